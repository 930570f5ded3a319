//! Winding numbers, the zero finder over the disk of Möbius parameters, and
//! the end-to-end synthesis of a closed curve with prescribed curvature.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{
    build_h1, compose, find_abab_points, local_extrema, normalize_total, sliver_half_width, AbabPoints, CircleDiffeo,
    CurvatureProfile, ScaleFactor, StepSpec, DEFAULT_PLATEAU_TOL,
};
use crate::error::{Error, Result};
use crate::integrator::{
    curvature_at_nodes, error_vector, integrate_curve, is_simple, scale_curve, CurveSample, ErrorVector, PlanarCurve,
};
use crate::moebius::MoebiusParameter;

/// Residual required of a zero of the error map.
pub const ZERO_TOL: f64 = 1e-9;
/// Quadtree cells are refined until their diameter drops below this.
pub const CELL_DIAMETER: f64 = 1e-6;
/// Largest angular increment accepted along sampled loops in the β-plane.
const LOOP_STEP: f64 = FRAC_PI_4;
/// Sup-norm bounds for the proximity of the curve to the reference bicircle.
pub const C1_POSITION_TOL: f64 = 0.1;
pub const C1_ANGLE_TOL: f64 = 0.1;

/// Winding number of the closed loop through `points` about the origin.
///
/// Consecutive points (including last to first) must turn by less than
/// π/2 as seen from the origin.
pub fn winding_number(points: &[Complex64]) -> Result<i64> {
    if let Some(index) = points.iter().position(|z| z.norm() == 0.0 || !z.norm().is_finite()) {
        return Err(Error::OriginOnLoop { index });
    }
    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        let step = (points[(i + 1) % n] / points[i]).arg();
        if step.abs() >= FRAC_PI_2 {
            return Err(Error::InsufficientDensity {
                index: i,
                step: step.abs(),
            });
        }
        total += step;
    }
    let turns = total / TAU;
    let w = turns.round();
    if (turns - w).abs() >= 0.01 {
        return Err(Error::InsufficientDensity { index: 0, step: turns });
    }
    Ok(w as i64)
}

/// The curve for `k1 ∘ g_β` at total curvature 2π and its error vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaEvaluation {
    pub error: ErrorVector,
    pub curve: PlanarCurve,
    pub scale: ScaleFactor,
}

/// Composes `k1` with `g_β`, normalizes the total curvature to 2π and
/// integrates.
pub fn error_at_beta(k1: &CurvatureProfile, m: MoebiusParameter) -> Result<BetaEvaluation> {
    let composed = compose(k1, &m.to_diffeo());
    let (normalized, scale) = normalize_total(&composed)?;
    let curve = integrate_curve(&normalized)?;
    Ok(BetaEvaluation {
        error: error_vector(&curve),
        curve,
        scale,
    })
}

/// Evaluates the error map with a cache keyed by the exact parameter.
struct ErrorMap<'a> {
    k1: &'a CurvatureProfile,
    cache: HashMap<(u64, u64), Complex64>,
    evaluations: usize,
}

impl<'a> ErrorMap<'a> {
    fn new(k1: &'a CurvatureProfile) -> Self {
        ErrorMap {
            k1,
            cache: HashMap::new(),
            evaluations: 0,
        }
    }

    fn key(b: Complex64) -> (u64, u64) {
        (b.re.to_bits(), b.im.to_bits())
    }

    fn eval_one(k1: &CurvatureProfile, b: Complex64) -> Result<Complex64> {
        Ok(error_at_beta(k1, MoebiusParameter::new(b)?)?.error)
    }

    /// Evaluates all points, in parallel for the uncached ones.
    fn eval(&mut self, pts: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut missing: Vec<Complex64> = pts.iter().copied().filter(|b| !self.cache.contains_key(&Self::key(*b))).collect();
        missing.sort_by(|x, y| Self::key(*x).cmp(&Self::key(*y)));
        missing.dedup();
        let k1 = self.k1;
        let values: Vec<Result<Complex64>> = missing.par_iter().map(|&b| Self::eval_one(k1, b)).collect();
        for (b, v) in missing.iter().zip(values) {
            self.cache.insert(Self::key(*b), v?);
            self.evaluations += 1;
        }
        Ok(pts.iter().map(|b| self.cache[&Self::key(*b)]).collect())
    }

    fn at(&mut self, b: Complex64) -> Result<Complex64> {
        Ok(self.eval(&[b])?[0])
    }
}

/// Winding of `E` along the closed polygon with the given vertices, with
/// each edge sampled finely enough that `E` turns less than π/4 per step.
fn polygon_winding(map: &mut ErrorMap, vertices: &[Complex64], per_edge: usize) -> Result<i64> {
    let mut pts = Vec::with_capacity(vertices.len() * per_edge);
    for i in 0..vertices.len() {
        let (a, b) = (vertices[i], vertices[(i + 1) % vertices.len()]);
        for j in 0..per_edge {
            pts.push(a + (b - a) * (j as f64 / per_edge as f64));
        }
    }
    loop_winding(map, pts)
}

fn loop_winding(map: &mut ErrorMap, mut pts: Vec<Complex64>) -> Result<i64> {
    let mut vals = map.eval(&pts)?;
    for _ in 0..60 {
        if let Some(index) = vals.iter().position(|e| e.norm() < 1e-15) {
            return Err(Error::OriginOnLoop { index });
        }
        let n = pts.len();
        let coarse: Vec<usize> = (0..n)
            .filter(|&i| (vals[(i + 1) % n] / vals[i]).arg().abs() >= LOOP_STEP)
            .collect();
        if coarse.is_empty() {
            return winding_number(&vals);
        }
        let mids: Vec<Complex64> = coarse.iter().map(|&i| 0.5 * (pts[i] + pts[(i + 1) % n])).collect();
        // a jump that survives refinement to rounding level means the
        // loop passes through a zero
        if let Some((&i, _)) = coarse.iter().zip(&mids).find(|(&i, m)| (**m - pts[i]).norm() < 1e-15) {
            return Err(Error::OriginOnLoop { index: i });
        }
        let mid_vals = map.eval(&mids)?;
        let mut new_pts = Vec::with_capacity(n + mids.len());
        let mut new_vals = Vec::with_capacity(n + mids.len());
        let mut c = 0;
        for i in 0..n {
            new_pts.push(pts[i]);
            new_vals.push(vals[i]);
            if c < coarse.len() && coarse[c] == i {
                new_pts.push(mids[c]);
                new_vals.push(mid_vals[c]);
                c += 1;
            }
        }
        pts = new_pts;
        vals = new_vals;
    }
    Err(Error::InsufficientDensity { index: 0, step: PI })
}

/// Winding of `E(β)` over the circle `|β| = r`.
pub fn winding_at_radius(k1: &CurvatureProfile, r: f64) -> Result<i64> {
    let mut map = ErrorMap::new(k1);
    circle_winding(&mut map, r)
}

fn circle_winding(map: &mut ErrorMap, r: f64) -> Result<i64> {
    let pts: Vec<Complex64> = (0..64).map(|j| Complex64::from_polar(r, TAU * j as f64 / 64.0)).collect();
    loop_winding(map, pts)
}

/// Outcome of [`find_zero_beta`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroSearch {
    pub beta: MoebiusParameter,
    pub residual: f64,
    /// Winding of the error loop over `|β| = r0`.
    pub winding: i64,
    pub depth: usize,
    pub evaluations: usize,
    pub polish_steps: usize,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    x0: f64,
    y0: f64,
    size: f64,
}

impl Cell {
    fn corners(&self) -> [Complex64; 4] {
        let (x1, y1) = (self.x0 + self.size, self.y0 + self.size);
        [
            Complex64::new(self.x0, self.y0),
            Complex64::new(x1, self.y0),
            Complex64::new(x1, y1),
            Complex64::new(self.x0, y1),
        ]
    }

    fn center(&self) -> Complex64 {
        Complex64::new(self.x0 + 0.5 * self.size, self.y0 + 0.5 * self.size)
    }

    fn diameter(&self) -> f64 {
        self.size * std::f64::consts::SQRT_2
    }

    /// Distance from the origin to the nearest point of the cell.
    fn distance_to_origin(&self) -> f64 {
        let clamp = |lo: f64, hi: f64| if lo > 0.0 { lo } else if hi < 0.0 { -hi } else { 0.0 };
        Complex64::new(clamp(self.x0, self.x0 + self.size), clamp(self.y0, self.y0 + self.size)).norm()
    }

    fn children(&self, shift: f64) -> [Cell; 4] {
        let h = 0.5 * self.size + shift;
        let k = self.size - h;
        [
            Cell { x0: self.x0, y0: self.y0, size: h },
            Cell { x0: self.x0 + h, y0: self.y0, size: k },
            Cell { x0: self.x0, y0: self.y0 + h, size: h },
            Cell { x0: self.x0 + h, y0: self.y0 + h, size: k },
        ]
    }
}

/// Finds `β*` with `|β*| ≤ r0` and `|E(β*)| < 1e-9`.
///
/// The error loop over `|β| = r0` must wind around the origin. Cells of a
/// quadtree over `[−r0, r0]²` are refined along a chain of cells whose
/// boundary loop winds, down to diameter 1e-6; a Broyden iteration from the
/// final cell center polishes the zero.
pub fn find_zero_beta(k1: &CurvatureProfile, r0: f64) -> Result<ZeroSearch> {
    if !(r0 > 0.0 && r0 * std::f64::consts::SQRT_2 < 1.0) {
        return Err(Error::InvalidInput(format!("search radius must be in (0, 1/√2), got {r0}")));
    }
    let mut map = ErrorMap::new(k1);
    let ring: Vec<Complex64> = (0..64).map(|j| Complex64::from_polar(r0, TAU * j as f64 / 64.0)).collect();
    // an error map that vanishes on the whole circle has no usable degree
    if map.eval(&ring)?.iter().all(|e| e.norm() < 1e-12) {
        return Err(Error::NoWindingAtRadius { radius: r0 });
    }
    let winding = circle_winding(&mut map, r0)?;
    if winding == 0 {
        return Err(Error::NoWindingAtRadius { radius: r0 });
    }

    let mut cell = Cell {
        x0: -r0,
        y0: -r0,
        size: 2.0 * r0,
    };
    if polygon_winding(&mut map, &cell.corners(), 8)? == 0 {
        return Err(Error::NoWindingAtRadius { radius: r0 });
    }
    let mut depth = 0;
    while cell.diameter() >= CELL_DIAMETER {
        let mut next = None;
        let mut shift = 0.0;
        'retry: for _ in 0..8 {
            for child in cell.children(shift) {
                if child.distance_to_origin() > r0 {
                    continue;
                }
                match polygon_winding(&mut map, &child.corners(), 4) {
                    Ok(0) => {}
                    Ok(_) => {
                        next = Some(child);
                        break 'retry;
                    }
                    Err(Error::OriginOnLoop { .. }) => {
                        shift = if shift == 0.0 { 1e-12 } else { shift * 1e3 };
                        continue 'retry;
                    }
                    Err(e) => return Err(e),
                }
            }
            break;
        }
        match next {
            Some(c) => cell = c,
            None => break,
        }
        depth += 1;
    }

    let (beta, residual, polish_steps) = polish(&mut map, cell.center(), cell.size.max(1e-9))?;
    let best = MoebiusParameter::new(beta)?;
    if residual >= ZERO_TOL || beta.norm() > r0 {
        return Err(Error::PolishDiverged {
            beta_re: beta.re,
            beta_im: beta.im,
            residual,
        });
    }
    Ok(ZeroSearch {
        beta: best,
        residual,
        winding,
        depth,
        evaluations: map.evaluations,
        polish_steps,
    })
}

/// Broyden iteration on `E: R² → R²` with a finite-difference start.
fn polish(map: &mut ErrorMap, start: Complex64, scale: f64) -> Result<(Complex64, f64, usize)> {
    let h = (1e-3 * scale).max(1e-9);
    let f0 = map.at(start)?;
    let fx = map.at(start + h)?;
    let fy = map.at(start + Complex64::new(0.0, h))?;
    // columns of the Jacobian as complex numbers
    let mut jx = (fx - f0) / h;
    let mut jy = (fy - f0) / h;
    let (mut x, mut f) = (start, f0);
    let (mut best_x, mut best_f) = (x, f.norm());
    let mut steps = 0;
    for _ in 0..60 {
        if best_f < 1e-13 {
            break;
        }
        let det = jx.re * jy.im - jx.im * jy.re;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = -(jy.im * f.re - jy.re * f.im) / det;
        let dy = -(-jx.im * f.re + jx.re * f.im) / det;
        let step = Complex64::new(dx, dy);
        let xn = x + step;
        if !(xn.norm() < 1.0) {
            break;
        }
        let fnew = map.at(xn)?;
        steps += 1;
        let df = fnew - f;
        let denom = dx * dx + dy * dy;
        if denom == 0.0 {
            break;
        }
        let r = df - (jx * dx + jy * dy);
        jx += r * (dx / denom);
        jy += r * (dy / denom);
        x = xn;
        f = fnew;
        if f.norm() < best_f {
            best_x = x;
            best_f = f.norm();
        } else if steps > 20 && f.norm() > 10.0 * best_f {
            break;
        }
    }
    Ok((best_x, best_f, steps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisOptions {
    pub eps0: f64,
    pub r0: f64,
    pub max_rounds: usize,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            eps0: 0.1,
            r0: 0.2,
            max_rounds: 20,
        }
    }
}

/// What happened in one round of the `(eps, r0)` schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub eps: f64,
    pub r0: f64,
    /// `|E|` at `β = 0` for this round's `h₁`, when it was built.
    pub error_at_identity: Option<f64>,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub final_error: f64,
    /// Sup-norm distances to the reference bicircle (positions, angles).
    pub c1_position: f64,
    pub c1_angle: f64,
    /// Sup over non-sliver samples of `|estimated curvature − k(t)|`.
    pub curvature_error: f64,
    /// Measure (in normalized arc length) of the excluded sliver samples.
    pub excluded_measure: f64,
    pub rounds: usize,
    pub evaluations: usize,
    pub quadtree_depth: usize,
    pub polish_steps: usize,
    pub winding: i64,
    pub history: Vec<RoundRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    /// Closed simple curve; `param` holds the parameter `t` of the input
    /// curvature at each sample.
    pub curve: PlanarCurve,
    pub beta_star: MoebiusParameter,
    pub h1: CircleDiffeo,
    pub scale: ScaleFactor,
    pub eps_used: f64,
    pub sign_flipped: bool,
    pub abab: Option<AbabPoints>,
    pub diagnostics: Diagnostics,
}

fn is_constant(k: &CurvatureProfile) -> Option<f64> {
    let s = k.samples();
    let (lo, hi) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    if hi - lo <= DEFAULT_PLATEAU_TOL && local_extrema(k, DEFAULT_PLATEAU_TOL).is_empty() {
        Some(0.5 * (lo + hi))
    } else {
        None
    }
}

/// Reflection in the real axis: reverses the sense of turning.
fn mirror(c: &PlanarCurve) -> PlanarCurve {
    PlanarCurve {
        samples: c
            .samples
            .iter()
            .map(|p| CurveSample {
                s: p.s,
                pos: p.pos.conj(),
                theta: -p.theta,
            })
            .collect(),
        closed: c.closed,
        scale: c.scale,
        param: c.param.clone(),
    }
}

fn circle_result(k: &CurvatureProfile, value: f64) -> Result<SynthesisResult> {
    let unit = integrate_curve(&CurvatureProfile::constant(1.0, k.n())?)?;
    let scale = ScaleFactor::new(1.0 / value.abs())?;
    let params: Vec<f64> = unit.samples.iter().map(|p| p.s).collect();
    let mut curve = scale_curve(&unit, scale).with_param(params)?;
    if value < 0.0 {
        curve = mirror(&curve);
    }
    let final_error = error_vector(&curve).norm();
    Ok(SynthesisResult {
        curve,
        beta_star: MoebiusParameter::zero(),
        h1: CircleDiffeo::identity(),
        scale,
        eps_used: 0.0,
        sign_flipped: value < 0.0,
        abab: None,
        diagnostics: Diagnostics {
            final_error,
            c1_position: 0.0,
            c1_angle: 0.0,
            curvature_error: 0.0,
            excluded_measure: 0.0,
            rounds: 0,
            evaluations: 0,
            quadtree_depth: 0,
            polish_steps: 0,
            winding: 0,
            history: Vec::new(),
        },
    })
}

/// `κ₀` with values `a, b, a, b` on the quarter arcs and the closed
/// bicircle it produces at total curvature 2π.
pub fn reference_bicircle(a: f64, b: f64, n: usize) -> Result<PlanarCurve> {
    let (k0, _) = normalize_total(&StepSpec::quarters(a, b)?.profile(n)?)?;
    integrate_curve(&k0)
}

fn c1_distance(c: &PlanarCurve, reference: &PlanarCurve) -> (f64, f64) {
    c.samples
        .iter()
        .zip(&reference.samples)
        .fold((0.0f64, 0.0f64), |(dp, dt), (p, q)| {
            (dp.max((p.pos - q.pos).norm()), dt.max((p.theta - q.theta).abs()))
        })
}

/// Samples whose neighborhood maps (under `g_β`) into a sliver of `h₁`.
fn sliver_mask(m: MoebiusParameter, step: &StepSpec, eps: f64, curve: &PlanarCurve) -> Vec<bool> {
    let half = sliver_half_width(eps);
    let g = m.to_diffeo();
    let u: Vec<f64> = curve.samples.iter().map(|p| g.apply(p.s)).collect();
    let n = u.len();
    let hits = |lo: f64, hi: f64| {
        step.breakpoints.iter().any(|&q| {
            // shift q near lo, then test interval overlap
            let q = q + TAU * ((lo - q) / TAU).round();
            [q - TAU, q, q + TAU].iter().any(|&c| hi >= c - half && lo <= c + half)
        })
    };
    (0..n)
        .map(|j| {
            let lo = u[j.saturating_sub(1)];
            let hi = u[(j + 1).min(n - 1)];
            hits(lo, hi)
        })
        .collect()
}

/// Sup-norm mismatch between the estimated curvature of `curve` (at its
/// `param` values) and `k`, over samples outside `mask`.
fn curvature_mismatch(curve: &PlanarCurve, k: &CurvatureProfile, mask: &[bool]) -> Result<f64> {
    let est = curvature_at_nodes(curve)?;
    let params = curve.param.as_ref().ok_or_else(|| Error::InvalidInput("curve has no parameter".into()))?;
    Ok(est
        .iter()
        .zip(params)
        .zip(mask)
        .filter(|(_, &skip)| !skip)
        .map(|((e, &t), _)| (e - k.eval(t)).abs())
        .fold(0.0, f64::max))
}

/// Builds a simple closed curve whose curvature at parameter `t` is `k(t)`.
///
/// Constant nonzero curvature gives a circle. Otherwise `k` (or `−k`) is
/// pulled back by `h₁` to be close to the step function `a, b, a, b`, the
/// zero `β*` of the error map is located, and the curve for
/// `k ∘ h₁ ∘ g_β*` is rescaled and reparameterized. Rounds that fail any
/// check halve both `eps` and `r0`.
pub fn synthesize(k: &CurvatureProfile, options: &SynthesisOptions) -> Result<SynthesisResult> {
    if !(options.eps0 > 0.0 && options.r0 > 0.0 && options.max_rounds > 0) {
        return Err(Error::InvalidInput("eps0, r0 and max_rounds must be positive".into()));
    }
    if let Some(v) = is_constant(k) {
        if v.abs() < 1e-300 {
            return Err(Error::IdenticallyZero);
        }
        return circle_result(k, v);
    }
    let abab = find_abab_points(k)?;
    let kk = if abab.sign_flipped { k.negated() } else { k.clone() };
    let step = StepSpec::quarters(abab.a, abab.b)?;
    let reference = reference_bicircle(abab.a, abab.b, k.n())?;
    let tolerance = 0.05 * (abab.b - abab.a);

    let (mut eps, mut r0) = (options.eps0, options.r0);
    let mut history = Vec::new();
    let mut evaluations = 0;
    let mut last_reason = String::new();
    for round in 1..=options.max_rounds {
        let mut record = RoundRecord {
            eps,
            r0,
            error_at_identity: None,
            outcome: String::new(),
        };
        let attempt = (|| -> Result<std::result::Result<SynthesisResult, String>> {
            let h1 = match build_h1(&kk, &abab, &step, eps) {
                Ok(h) => h,
                Err(e) => return Ok(Err(e.to_string())),
            };
            let k1 = compose(&kk, &h1);
            record.error_at_identity = Some(error_at_beta(&k1, MoebiusParameter::zero())?.error.norm());
            let zero = match find_zero_beta(&k1, r0) {
                Ok(z) => z,
                Err(e @ (Error::NoWindingAtRadius { .. } | Error::PolishDiverged { .. } | Error::InsufficientDensity { .. } | Error::OriginOnLoop { .. })) => {
                    return Ok(Err(e.to_string()))
                }
                Err(e) => return Err(e),
            };
            evaluations += zero.evaluations;
            let eval = error_at_beta(&k1, zero.beta)?;
            let gap = eval.error.norm();
            if !(gap < ZERO_TOL) {
                return Ok(Err(format!("curve does not close (|E| = {gap:e})")));
            }
            let (dp, dt) = c1_distance(&eval.curve, &reference);
            if dp >= C1_POSITION_TOL || dt >= C1_ANGLE_TOL {
                return Ok(Err(format!("curve is not C1-close to the bicircle ({dp:.3e}, {dt:.3e})")));
            }
            if let (false, Some((i, j))) = is_simple(&eval.curve) {
                return Ok(Err(format!("curve is not simple (segments {i} and {j})")));
            }

            let g = zero.beta.to_diffeo();
            let params: Vec<f64> = eval.curve.samples.iter().map(|p| h1.apply(g.apply(p.s))).collect();
            let mask = sliver_mask(zero.beta, &step, eps, &eval.curve);
            let excluded_measure = {
                let mut m = 0.0;
                for (j, &skip) in mask.iter().enumerate().skip(1) {
                    if skip || mask[j - 1] {
                        m += eval.curve.samples[j].s - eval.curve.samples[j - 1].s;
                    }
                }
                m
            };
            let mut curve = scale_curve(&eval.curve, eval.scale).with_param(params)?;
            let curvature_error = curvature_mismatch(&curve, &kk, &mask)?;
            if curvature_error >= tolerance || excluded_measure >= eps {
                return Ok(Err(format!(
                    "curvature mismatch {curvature_error:.3e} outside slivers of measure {excluded_measure:.3e}"
                )));
            }
            if abab.sign_flipped {
                curve = mirror(&curve);
            }
            Ok(Ok(SynthesisResult {
                curve,
                beta_star: zero.beta,
                h1,
                scale: eval.scale,
                eps_used: eps,
                sign_flipped: abab.sign_flipped,
                abab: Some(abab),
                diagnostics: Diagnostics {
                    final_error: gap,
                    c1_position: dp,
                    c1_angle: dt,
                    curvature_error,
                    excluded_measure,
                    rounds: round,
                    evaluations,
                    quadtree_depth: zero.depth,
                    polish_steps: zero.polish_steps,
                    winding: zero.winding,
                    history: Vec::new(),
                },
            }))
        })()?;
        match attempt {
            Ok(mut result) => {
                record.outcome = "ok".into();
                history.push(record);
                result.diagnostics.history = history;
                return Ok(result);
            }
            Err(reason) => {
                record.outcome = reason.clone();
                history.push(record);
                last_reason = reason;
                eps *= 0.5;
                r0 *= 0.5;
            }
        }
    }
    Err(Error::SynthesisFailed {
        rounds: options.max_rounds,
        reason: last_reason,
    })
}

/// One panel of the compass figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompassPanel {
    pub beta: MoebiusParameter,
    pub curve: PlanarCurve,
    pub error: ErrorVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompassDemo {
    pub panels: Vec<CompassPanel>,
    pub winding: i64,
}

/// Curves for `κ₀ ∘ g_β` with `β = r·e^{2πik/n}` and the winding of their
/// error vectors.
pub fn compass_demo(a: f64, b: f64, r: f64, n_samples: usize, grid: usize) -> Result<CompassDemo> {
    if !(0.0 < r && r < 1.0) || n_samples < 3 {
        return Err(Error::InvalidInput("need 0 < r < 1 and at least 3 samples".into()));
    }
    let k0 = StepSpec::quarters(a, b)?.profile(grid)?;
    let panels = (0..n_samples)
        .into_par_iter()
        .map(|j| {
            let beta = MoebiusParameter::new(Complex64::from_polar(r, TAU * j as f64 / n_samples as f64))?;
            let e = error_at_beta(&k0, beta)?;
            Ok(CompassPanel {
                beta,
                curve: e.curve,
                error: e.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let errors: Vec<Complex64> = panels.iter().map(|p| p.error).collect();
    let winding = match winding_number(&errors) {
        Ok(w) => w,
        // few panels: count the turns on a denser loop instead
        Err(Error::InsufficientDensity { .. }) => winding_at_radius(&k0, r)?,
        Err(e) => return Err(e),
    };
    Ok(CompassDemo { panels, winding })
}
