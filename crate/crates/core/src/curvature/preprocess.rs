//! Replacing a curvature function by a two-valued step function: the
//! `a, b, a, b` points and the preliminary diffeomorphism `h₁`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{local_extrema, CircleDiffeo, CurvatureProfile, Extremum, ExtremumKind, StepSpec, DEFAULT_PLATEAU_TOL};
use crate::error::{Error, Result};

/// Values `0 < a < b` attained by `k` (or `−k` when `sign_flipped`) at
/// `params`, in cyclic order with values `a, b, a, b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbabPoints {
    pub a: f64,
    pub b: f64,
    pub params: [f64; 4],
    pub sign_flipped: bool,
}

impl AbabPoints {
    pub fn value_at(&self, i: usize) -> f64 {
        if i.is_multiple_of(2) {
            self.a
        } else {
            self.b
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Window {
    /// indices into the extrema list
    max_i: usize,
    max_j: usize,
    min_ij: usize,
    min_ji: usize,
    lower: f64,
    upper: f64,
}

impl Window {
    fn unclamped_a(&self) -> f64 {
        self.lower + (self.upper - self.lower) / 10.0
    }

    fn clamped(&self) -> Option<(f64, f64)> {
        let lo = self.lower.max(0.0);
        if self.upper <= lo {
            return None;
        }
        let margin = (self.upper - lo) / 10.0;
        Some((lo + margin, self.upper - margin))
    }

    fn positive_width(&self) -> f64 {
        self.upper - self.lower.max(0.0)
    }
}

/// Best pair of maxima (with the lowest minimum on each arc between them)
/// for extrema `ext` of the sign-adjusted profile.
fn best_window(ext: &[Extremum]) -> Option<Window> {
    let maxima: Vec<usize> = (0..ext.len()).filter(|&i| ext[i].kind == ExtremumKind::Max).collect();
    if maxima.len() < 2 {
        return None;
    }
    // keep the search quadratic in a bounded number of candidates
    let mut cands = maxima.clone();
    if cands.len() > 128 {
        cands.sort_by(|&x, &y| ext[y].value.total_cmp(&ext[x].value));
        cands.truncate(128);
        cands.sort_unstable();
    }
    let n = ext.len();
    let lowest_min = |from: usize, to: usize| -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut i = (from + 1) % n;
        while i != to {
            if ext[i].kind == ExtremumKind::Min && best.is_none_or(|b| ext[i].value < ext[b].value) {
                best = Some(i);
            }
            i = (i + 1) % n;
        }
        best
    };
    let mut best: Option<Window> = None;
    for (x, &i) in cands.iter().enumerate() {
        for &j in &cands[x + 1..] {
            let (Some(mij), Some(mji)) = (lowest_min(i, j), lowest_min(j, i)) else {
                continue;
            };
            let w = Window {
                max_i: i,
                max_j: j,
                min_ij: mij,
                min_ji: mji,
                lower: ext[mij].value.max(ext[mji].value),
                upper: ext[i].value.min(ext[j].value),
            };
            let better = match &best {
                None => true,
                Some(b) => w.positive_width() > b.positive_width(),
            };
            if better {
                best = Some(w);
            }
        }
    }
    best
}

fn sign_adjusted(ext: &[Extremum], flip: bool) -> Vec<Extremum> {
    if !flip {
        return ext.to_vec();
    }
    ext.iter()
        .map(|e| Extremum {
            kind: match e.kind {
                ExtremumKind::Max => ExtremumKind::Min,
                ExtremumKind::Min => ExtremumKind::Max,
            },
            value: -e.value,
            ..*e
        })
        .collect()
}

/// First parameter after sample `from` (walking forward, at most up to
/// sample `to`) where the linear interpolant descends through `level`.
fn descending_crossing(samples: &[f64], h: f64, from: usize, to: usize, level: f64) -> Option<f64> {
    let n = samples.len();
    let mut p = from;
    while p != to {
        let q = (p + 1) % n;
        let (vp, vq) = (samples[p], samples[q]);
        if vp >= level && vq < level {
            let w = (vp - level) / (vp - vq);
            return Some(((p as f64 + w) * h).rem_euclid(TAU));
        }
        p = q;
    }
    None
}

fn plateau_mid(e: &Extremum) -> f64 {
    let end = if e.wraps { e.end + TAU } else { e.end };
    (0.5 * (e.start + end)).rem_euclid(TAU)
}

/// Finds `0 < a < b` and four parameters at which `k` (or `−k`) takes the
/// values `a, b, a, b` in cyclic order.
///
/// Two interleaved maxima `B₁, B₂` and minima `A₁, A₂` define the window
/// `(max A, min B)`; `a` and `b` sit one tenth of the window inside it. When
/// `max A ≤ 0` the lower end is raised to 0. The sign is flipped when only
/// `−k` leaves `a > 0` without that clamp.
pub fn find_abab_points(k: &CurvatureProfile) -> Result<AbabPoints> {
    let ext = local_extrema(k, DEFAULT_PLATEAU_TOL);
    let maxima = ext.iter().filter(|e| e.kind == ExtremumKind::Max).count();
    let minima = ext.len() - maxima;
    if maxima < 2 || minima < 2 {
        return Err(Error::HypothesisViolated { maxima, minima });
    }
    let plus = best_window(&sign_adjusted(&ext, false));
    let minus = best_window(&sign_adjusted(&ext, true));

    let flip = match (&plus, &minus) {
        (Some(p), _) if p.unclamped_a() > 0.0 => false,
        (_, Some(m)) if m.unclamped_a() > 0.0 => true,
        (Some(p), Some(m)) => m.positive_width() > p.positive_width(),
        (None, Some(_)) => true,
        _ => false,
    };
    let window = if flip { minus } else { plus }.ok_or(Error::NoPositiveWindow)?;
    let ext = sign_adjusted(&ext, flip);
    let samples: Vec<f64> = k.samples().into_iter().map(|v| if flip { -v } else { v }).collect();

    if k.is_piecewise_constant() {
        // step profiles only take their plateau values
        let a = window.lower;
        let b = window.upper;
        if !(a > 0.0 && b > a) {
            return Err(Error::NoPositiveWindow);
        }
        let params = [
            plateau_mid(&ext[window.min_ij]),
            plateau_mid(&ext[window.max_j]),
            plateau_mid(&ext[window.min_ji]),
            plateau_mid(&ext[window.max_i]),
        ];
        return Ok(AbabPoints {
            a,
            b,
            params,
            sign_flipped: flip,
        });
    }

    let (a, b) = window.clamped().ok_or(Error::NoPositiveWindow)?;
    let h = k.grid_step();
    let cross = |max_e: usize, min_e: usize| -> Result<(f64, f64)> {
        let (from, to) = (ext[max_e].index, ext[min_e].index);
        let tb = descending_crossing(&samples, h, from, to, b);
        let ta = tb.and_then(|tb| {
            let start = ((tb / h).floor() as usize) % samples.len();
            descending_crossing(&samples, h, start, to, a)
        });
        match (tb, ta) {
            (Some(tb), Some(ta)) => Ok((tb, ta)),
            _ => Err(Error::NoPositiveWindow),
        }
    };
    let (b1, a1) = cross(window.max_i, window.min_ij)?;
    let (b2, a2) = cross(window.max_j, window.min_ji)?;
    Ok(AbabPoints {
        a,
        b,
        params: [a1, b2, a2, b1],
        sign_flipped: flip,
    })
}

/// Measure of `{t : |k(h₁(t)) − κ₀(t)| > eps}` estimated on `m` uniform points.
pub fn measure_far_from_step(k: &CurvatureProfile, h1: &CircleDiffeo, step: &StepSpec, eps: f64, m: usize) -> f64 {
    let bad = (0..m)
        .filter(|&j| {
            let t = TAU * j as f64 / m as f64;
            (k.eval(h1.apply(t)) - step.eval(t)).abs() > eps
        })
        .count();
    bad as f64 * TAU / m as f64
}

/// Half-width of the slivers around each step breakpoint used by [`build_h1`].
pub fn sliver_half_width(eps: f64) -> f64 {
    eps / 16.0
}

/// Builds a piecewise-linear `h₁` with `k ∘ h₁` ε-close in measure to the
/// step function `step`.
///
/// All but a sliver of each arc of `step` is mapped onto a small
/// neighborhood of the matching `a`/`b` point, where `k` stays within
/// `eps/2` of the step value. Slivers of width `eps/8` straddle the step
/// breakpoints and absorb the rest of the circle. `k` is the sign-adjusted
/// profile (negate it first when `abab.sign_flipped`).
pub fn build_h1(k: &CurvatureProfile, abab: &AbabPoints, step: &StepSpec, eps: f64) -> Result<CircleDiffeo> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    if (step.a - abab.a).abs() > 1e-12 * abab.a.abs().max(1.0)
        || (step.b - abab.b).abs() > 1e-12 * abab.b.abs().max(1.0)
    {
        return Err(Error::InvalidInput("step values must match the a, b points".into()));
    }
    let half = sliver_half_width(eps);
    let q = step.breakpoints;
    let q_next = |i: usize| if i + 1 < 4 { q[i + 1] } else { q[0] + TAU };
    if (0..4).any(|i| q_next(i) - q[i] <= 4.0 * half) {
        return Err(Error::ConstructionFailed("eps too large for the step arcs".into()));
    }

    let mut tau = [0.0; 4];
    tau[0] = abab.params[0];
    for i in 1..4 {
        tau[i] = tau[0] + (abab.params[i] - tau[0]).rem_euclid(TAU);
    }
    if !tau.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::ConstructionFailed("a, b points are not in cyclic order".into()));
    }
    let gap = |i: usize| if i + 1 < 4 { tau[i + 1] - tau[i] } else { tau[0] + TAU - tau[3] };
    let gap_min = (0..4).map(gap).fold(f64::INFINITY, f64::min);

    let mut radii = [0.0; 4];
    for i in 0..4 {
        let target = abab.value_at(i);
        let mut delta = gap_min / 4.0;
        loop {
            let stays = (0..=64).all(|j| {
                let t = tau[i] - delta + 2.0 * delta * j as f64 / 64.0;
                (k.eval(t) - target).abs() <= 0.5 * eps
            });
            if stays {
                break;
            }
            delta *= 0.5;
            if delta < 1e-12 {
                return Err(Error::ConstructionFailed(format!(
                    "profile does not stay near {target} around parameter {}",
                    tau[i]
                )));
            }
        }
        radii[i] = delta;
    }

    let mut knots_t = Vec::with_capacity(8);
    let mut knots_f = Vec::with_capacity(8);
    for i in 0..4 {
        knots_t.push(q[i] + half);
        knots_f.push(tau[i] - radii[i]);
        knots_t.push(q_next(i) - half);
        knots_f.push(tau[i] + radii[i]);
    }
    let h1 = CircleDiffeo::piecewise_linear(knots_t, knots_f)
        .map_err(|e| Error::ConstructionFailed(e.to_string()))?;

    let far = measure_far_from_step(k, &h1, step, eps, 10_000);
    if far >= eps {
        return Err(Error::ConstructionFailed(format!(
            "measure {far} of the far set is not below eps = {eps}"
        )));
    }
    Ok(h1)
}
