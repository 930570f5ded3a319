//! Plane curves from curvature by exact circular-arc stepping.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::curvature::{CurvatureProfile, Interp, ScaleFactor};
use crate::error::{Error, Result};

/// Displacement `α(end) − α(start)` of a curve.
pub type ErrorVector = Complex64;

/// Curvatures below this are integrated as straight segments.
pub const STRAIGHT_THRESHOLD: f64 = 1e-14;
/// A curve is closed when `|E| < CLOSED_REL_TOL · length`.
pub const CLOSED_REL_TOL: f64 = 1e-9;
/// Fewest samples accepted by [`estimate_curvature`].
pub const MIN_ESTIMATE_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    /// Arc length from the first sample.
    pub s: f64,
    pub pos: Complex64,
    /// Tangent angle, lifted continuously along the curve.
    pub theta: f64,
}

/// A polyline with tangent angles, both endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarCurve {
    pub samples: Vec<CurveSample>,
    pub closed: bool,
    /// Product of the factors applied by [`scale_curve`].
    pub scale: ScaleFactor,
    /// Optional curve parameter of each sample (e.g. the parameter of the
    /// prescribed curvature function after reparameterization).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<Vec<f64>>,
}

impl PlanarCurve {
    /// Wraps samples and sets the closed flag from the end gap.
    pub fn new(samples: Vec<CurveSample>, scale: ScaleFactor) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooFewSamples {
                found: samples.len(),
                needed: 2,
            });
        }
        if samples.iter().any(|p| !(p.s.is_finite() && p.pos.re.is_finite() && p.pos.im.is_finite() && p.theta.is_finite())) {
            return Err(Error::InvalidInput("curve samples must be finite".into()));
        }
        if !samples.windows(2).all(|w| w[1].s > w[0].s) {
            return Err(Error::InvalidInput("arc length must be strictly increasing".into()));
        }
        let mut c = PlanarCurve {
            samples,
            closed: false,
            scale,
            param: None,
        };
        c.closed = c.gap() < CLOSED_REL_TOL * c.length();
        Ok(c)
    }

    /// Builds a curve through `points`, with chord-length arc length and
    /// node tangents averaged from the adjacent chords. A curve whose last
    /// point repeats the first is treated as closed.
    pub fn from_points(points: &[Complex64]) -> Result<Self> {
        let n = points.len();
        if n < 3 {
            return Err(Error::TooFewSamples { found: n, needed: 3 });
        }
        let chords: Vec<Complex64> = points.windows(2).map(|w| w[1] - w[0]).collect();
        if chords.iter().any(|c| c.norm() == 0.0) {
            return Err(Error::InvalidInput("consecutive points must be distinct".into()));
        }
        let span = chords.iter().map(|c| c.norm()).sum::<f64>();
        let looped = (points[n - 1] - points[0]).norm() <= 1e-12 * span;

        let mut phi = Vec::with_capacity(chords.len());
        let mut prev = chords[0].arg();
        for c in &chords {
            let a = prev + wrap_pi(c.arg() - prev);
            phi.push(a);
            prev = a;
        }
        let len = |i: usize| chords[i].norm();
        let blend = |p: f64, lp: f64, q: f64, lq: f64| (p * lp + q * lq) / (lp + lq);

        let m = chords.len();
        let mut samples = Vec::with_capacity(n);
        let mut s = 0.0;
        for j in 0..n {
            let theta = if j == 0 || j == n - 1 {
                if looped {
                    let turn = phi[m - 1] - phi[0] + wrap_pi(phi[0] - phi[m - 1]);
                    let t0 = blend(phi[m - 1] - turn, len(m - 1), phi[0], len(0));
                    if j == 0 {
                        t0
                    } else {
                        t0 + turn
                    }
                } else if j == 0 {
                    phi[0]
                } else {
                    phi[m - 1]
                }
            } else {
                blend(phi[j - 1], len(j - 1), phi[j], len(j))
            };
            samples.push(CurveSample {
                s,
                pos: points[j],
                theta,
            });
            if j < m {
                s += len(j);
            }
        }
        let mut c = Self::new(samples, ScaleFactor::ONE)?;
        c.closed = looped;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.samples[self.samples.len() - 1].s - self.samples[0].s
    }

    pub fn positions(&self) -> Vec<Complex64> {
        self.samples.iter().map(|p| p.pos).collect()
    }

    /// Total turning of the tangent, `θ(end) − θ(start)`.
    pub fn turning(&self) -> f64 {
        self.samples[self.samples.len() - 1].theta - self.samples[0].theta
    }

    fn gap(&self) -> f64 {
        error_vector(self).norm()
    }

    pub fn with_param(mut self, param: Vec<f64>) -> Result<Self> {
        if param.len() != self.samples.len() {
            return Err(Error::InvalidInput("one parameter per sample required".into()));
        }
        self.param = Some(param);
        Ok(self)
    }
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}

/// `(e^{ix} − 1)/(ix)`, stable near 0.
fn arc_factor(x: f64) -> Complex64 {
    let h = 0.5 * x;
    let sinc = if h.abs() < 1e-8 { 1.0 - h * h / 6.0 } else { h.sin() / h };
    Complex64::from_polar(sinc, h)
}

/// Integrates constant-curvature runs `(kappa, length)` starting at the
/// origin heading along +x, recording `n + 1` uniformly spaced samples.
pub fn integrate_runs(runs: &[(f64, f64)], n: usize) -> Result<PlanarCurve> {
    if n == 0 || runs.is_empty() {
        return Err(Error::InvalidInput("need at least one run and one step".into()));
    }
    if runs.iter().any(|&(k, l)| !k.is_finite() || !(l >= 0.0) || !l.is_finite()) {
        return Err(Error::InvalidInput("runs need finite curvature and non-negative length".into()));
    }
    let total: f64 = runs.iter().map(|r| r.1).sum();
    if !(total > 0.0) {
        return Err(Error::InvalidInput("total length must be positive".into()));
    }

    let mut samples = Vec::with_capacity(n + 1);
    let mut pos = Complex64::new(0.0, 0.0);
    let mut theta = 0.0;
    samples.push(CurveSample { s: 0.0, pos, theta });

    let mut ends = Vec::with_capacity(runs.len());
    let mut acc = 0.0;
    for r in runs {
        acc += r.1;
        ends.push(acc);
    }
    let last = runs.len() - 1;
    let mut r = 0;
    let mut cursor = 0.0;
    for j in 1..=n {
        let target = if j == n { total } else { total * j as f64 / n as f64 };
        while cursor < target {
            while r < last && ends[r] <= cursor {
                r += 1;
            }
            let stop = if r < last { ends[r].min(target) } else { target };
            let (k, ds) = (runs[r].0, stop - cursor);
            if k.abs() < STRAIGHT_THRESHOLD {
                pos += Complex64::from_polar(ds, theta);
            } else {
                pos += Complex64::from_polar(ds, theta) * arc_factor(k * ds);
            }
            theta += k * ds;
            cursor = stop;
        }
        samples.push(CurveSample { s: target, pos, theta });
    }
    PlanarCurve::new(samples, ScaleFactor::ONE)
}

/// Arc-length curve with curvature `k(s)` for `s ∈ [0, 2π]`.
///
/// Sampled profiles take the value `k(s_j)` on each grid step; exact step
/// functions are integrated through their breakpoints.
pub fn integrate_curve(k: &CurvatureProfile) -> Result<PlanarCurve> {
    let n = k.n();
    let runs: Vec<(f64, f64)> = match k.constant_runs() {
        Some(r) => r.iter().map(|&(a, b, v)| (v, b - a)).collect(),
        None => {
            let h = k.grid_step();
            k.samples().into_iter().map(|v| (v, h)).collect()
        }
    };
    integrate_runs(&runs, n)
}

/// `α(end) − α(start)`.
pub fn error_vector(c: &PlanarCurve) -> ErrorVector {
    c.samples[c.samples.len() - 1].pos - c.samples[0].pos
}

/// Multiplies positions (and arc length) by `f`; curvature is divided by
/// `|f|`. A negative factor is a half-turn, so tangents turn by π.
pub fn scale_curve(c: &PlanarCurve, f: ScaleFactor) -> PlanarCurve {
    let v = f.value();
    let shift = if v < 0.0 { PI } else { 0.0 };
    PlanarCurve {
        samples: c
            .samples
            .iter()
            .map(|p| CurveSample {
                s: p.s * v.abs(),
                pos: p.pos * v,
                theta: p.theta + shift,
            })
            .collect(),
        closed: c.closed,
        scale: ScaleFactor::new(c.scale.value() * v).unwrap_or(c.scale),
        param: c.param.clone(),
    }
}

/// Central-difference `dθ/ds` at every sample; the last sample of a closed
/// curve repeats the first.
pub fn curvature_at_nodes(c: &PlanarCurve) -> Result<Vec<f64>> {
    let n = c.samples.len();
    if n < MIN_ESTIMATE_SAMPLES {
        return Err(Error::TooFewSamples {
            found: n,
            needed: MIN_ESTIMATE_SAMPLES,
        });
    }
    let p = &c.samples;
    let (len, turn) = (c.length(), c.turning());
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let (prev, next) = if j == 0 {
            if c.closed {
                ((p[n - 2].s - len, p[n - 2].theta - turn), (p[1].s, p[1].theta))
            } else {
                ((p[0].s, p[0].theta), (p[1].s, p[1].theta))
            }
        } else if j == n - 1 {
            if c.closed {
                ((p[n - 2].s, p[n - 2].theta), (p[1].s + len, p[1].theta + turn))
            } else {
                ((p[n - 2].s, p[n - 2].theta), (p[n - 1].s, p[n - 1].theta))
            }
        } else {
            ((p[j - 1].s, p[j - 1].theta), (p[j + 1].s, p[j + 1].theta))
        };
        out.push((next.1 - prev.1) / (next.0 - prev.0));
    }
    Ok(out)
}

/// Discrete curvature as a profile indexed by sample: value `j` belongs to
/// sample `j` (the repeated closing sample is dropped for closed curves).
pub fn estimate_curvature(c: &PlanarCurve) -> Result<CurvatureProfile> {
    let mut k = curvature_at_nodes(c)?;
    if c.closed {
        k.pop();
    }
    CurvatureProfile::sampled(k, Interp::Linear)
}

/// Result of [`is_simple`]: `None` when simple, else two crossing segments.
pub type SimplicityWitness = Option<(usize, usize)>;

fn coord(z: Complex64) -> Coord<f64> {
    Coord { x: z.re, y: z.im }
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    orient2d(coord(a), coord(b), coord(c))
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

fn segments_meet(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Segments `ab` and `bc` share `b`; they overlap beyond it only when
/// collinear and folding back.
fn adjacent_fold(a: Complex64, b: Complex64, c: Complex64) -> bool {
    orient(a, b, c) == 0.0 && ((a - b) * (c - b).conj()).re > 0.0
}

/// Checks the polyline for self-intersections with exact orientation
/// predicates. Closed curves are treated as polygons whose last vertex is
/// the first sample. Returns the first crossing pair found.
pub fn is_simple(c: &PlanarCurve) -> (bool, SimplicityWitness) {
    let mut pts = c.positions();
    if c.closed {
        pts.pop();
    }
    let m = if c.closed { pts.len() } else { pts.len() - 1 };
    let seg = |i: usize| (pts[i], pts[(i + 1) % pts.len()]);
    let adjacent = |i: usize, j: usize| {
        let (lo, hi) = (i.min(j), i.max(j));
        hi == lo + 1 || (c.closed && lo == 0 && hi == m - 1)
    };

    // sweep over x with an active list of segments whose x-range is open
    let mut order: Vec<usize> = (0..m).collect();
    let min_x = |i: usize| {
        let (a, b) = seg(i);
        a.re.min(b.re)
    };
    order.sort_by(|&i, &j| min_x(i).total_cmp(&min_x(j)).then(i.cmp(&j)));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let (a, b) = seg(i);
        let x = a.re.min(b.re);
        active.retain(|&j| {
            let (c0, c1) = seg(j);
            c0.re.max(c1.re) >= x
        });
        let (ylo, yhi) = (a.im.min(b.im), a.im.max(b.im));
        for &j in &active {
            let (c0, c1) = seg(j);
            if c0.im.max(c1.im) < ylo || c0.im.min(c1.im) > yhi {
                continue;
            }
            let hit = if adjacent(i, j) {
                // shared vertex is the end of the earlier segment
                let (first, second) = if (i + 1) % pts.len() == j { (i, j) } else { (j, i) };
                let (p, q) = seg(first);
                let (_, r) = seg(second);
                adjacent_fold(p, q, r) || (m == 2)
            } else {
                segments_meet(a, b, c0, c1)
            };
            if hit {
                return (false, Some((i.min(j), i.max(j))));
            }
        }
        active.push(i);
    }
    (true, None)
}
