//! Curvature functions on the circle.
//!
//! A [`CurvatureProfile`] is either a set of samples on the uniform grid
//! `t_j = 2πj/N` (piecewise-constant or piecewise-linear between them) or an
//! exact step function with arbitrary breakpoints. Step functions stay exact
//! under composition with circle diffeomorphisms, so curves built from them
//! close up to rounding when they should.

mod diffeo;
mod extrema;
mod preprocess;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use diffeo::CircleDiffeo;
pub use extrema::{find_extrema, local_extrema, Extremum, ExtremumKind};
pub use preprocess::{build_h1, find_abab_points, measure_far_from_step, sliver_half_width, AbabPoints};

/// Default grid size for profiles built by the pipeline.
pub const DEFAULT_GRID: usize = 4096;
/// Default plateau tolerance for extrema detection on profiles.
pub const DEFAULT_PLATEAU_TOL: f64 = 1e-9;
/// Smallest accepted grid.
pub const MIN_GRID: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Step,
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Sampled { samples: Vec<f64>, interp: Interp },
    /// `values[i]` holds on `[breaks[i], breaks[i + 1])`, the last piece wraps.
    Piecewise { breaks: Vec<f64>, values: Vec<f64> },
}

/// A periodic curvature function on `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    n: usize,
    repr: Repr,
}

/// Two-valued step function with values `a, b, a, b` on four arcs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSpec {
    pub a: f64,
    pub b: f64,
    pub breakpoints: [f64; 4],
}

/// Nonzero multiplicative constant applied to curvature or coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScaleFactor(f64);

impl ScaleFactor {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() || c == 0.0 {
            return Err(Error::InvalidInput(format!("scale factor must be finite and nonzero, got {c}")));
        }
        Ok(ScaleFactor(c))
    }

    pub const ONE: ScaleFactor = ScaleFactor(1.0);

    pub fn value(self) -> f64 {
        self.0
    }
}

impl StepSpec {
    /// Values `a, b, a, b` on the quarter arcs starting at `0, π/2, π, 3π/2`.
    pub fn quarters(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2])
    }

    /// Step spec whose four arcs have the given lengths, starting at 0.
    pub fn from_arc_lengths(a: f64, b: f64, lengths: [f64; 4]) -> Result<Self> {
        let total: f64 = lengths.iter().sum();
        if (total - TAU).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("arc lengths must sum to 2π, got {total}")));
        }
        let b1 = lengths[0];
        let b2 = b1 + lengths[1];
        let b3 = b2 + lengths[2];
        Self::new(a, b, [0.0, b1, b2, b3])
    }

    pub fn new(a: f64, b: f64, breakpoints: [f64; 4]) -> Result<Self> {
        if !(a > 0.0 && b > a && b.is_finite()) {
            return Err(Error::InvalidInput(format!("step values must satisfy 0 < a < b, got a={a}, b={b}")));
        }
        let ok = breakpoints.iter().all(|&t| (0.0..TAU).contains(&t))
            && breakpoints.windows(2).all(|w| w[1] > w[0]);
        if !ok {
            return Err(Error::InvalidInput(
                "step breakpoints must be strictly increasing in [0, 2π)".into(),
            ));
        }
        Ok(StepSpec { a, b, breakpoints })
    }

    pub fn value_on_arc(&self, i: usize) -> f64 {
        if i.is_multiple_of(2) {
            self.a
        } else {
            self.b
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.rem_euclid(TAU);
        let bp = &self.breakpoints;
        let i = bp.partition_point(|&x| x <= t);
        // before the first breakpoint we are still on the last arc
        self.value_on_arc((i + 3) % 4)
    }

    pub fn profile(&self, n: usize) -> Result<CurvatureProfile> {
        CurvatureProfile::piecewise(
            self.breakpoints.to_vec(),
            vec![self.a, self.b, self.a, self.b],
            n,
        )
    }
}

fn grid_point(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

impl CurvatureProfile {
    pub fn sampled(samples: Vec<f64>, interp: Interp) -> Result<Self> {
        if samples.len() < MIN_GRID {
            return Err(Error::InvalidInput(format!(
                "profile needs at least {MIN_GRID} samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("profile samples must be finite".into()));
        }
        Ok(CurvatureProfile {
            n: samples.len(),
            repr: Repr::Sampled { samples, interp },
        })
    }

    pub fn from_fn(f: impl Fn(f64) -> f64, n: usize, interp: Interp) -> Result<Self> {
        Self::sampled((0..n).map(|j| f(grid_point(j, n))).collect(), interp)
    }

    pub fn constant(value: f64, n: usize) -> Result<Self> {
        Self::sampled(vec![value; n], Interp::Linear)
    }

    /// Exact step function; `breaks` strictly increasing in `[0, 2π)`,
    /// `values[i]` on `[breaks[i], breaks[i+1])` with the last piece wrapping.
    /// `n` is the grid used when the profile is sampled or integrated.
    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>, n: usize) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != values.len() {
            return Err(Error::InvalidInput("piecewise profile needs matching breaks and values".into()));
        }
        if n < MIN_GRID {
            return Err(Error::InvalidInput(format!("grid must have at least {MIN_GRID} points")));
        }
        let ok = breaks.iter().all(|&t| (0.0..TAU).contains(&t))
            && breaks.windows(2).all(|w| w[1] > w[0])
            && values.iter().all(|v| v.is_finite());
        if !ok {
            return Err(Error::InvalidInput(
                "piecewise breaks must be strictly increasing in [0, 2π) with finite values".into(),
            ));
        }
        Ok(CurvatureProfile {
            n,
            repr: Repr::Piecewise { breaks, values },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid_step(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.n).map(|j| grid_point(j, self.n)).collect()
    }

    /// Interpolation mode; exact step functions report `Step`.
    pub fn interp(&self) -> Interp {
        match &self.repr {
            Repr::Sampled { interp, .. } => *interp,
            Repr::Piecewise { .. } => Interp::Step,
        }
    }

    /// Exact breakpoints and values when the profile is piecewise constant.
    pub fn pieces(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match &self.repr {
            Repr::Piecewise { breaks, values } => Some((breaks.clone(), values.clone())),
            Repr::Sampled {
                samples,
                interp: Interp::Step,
            } => Some((self.grid(), samples.clone())),
            Repr::Sampled { .. } => None,
        }
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.interp() == Interp::Step
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut t = t.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        match &self.repr {
            Repr::Sampled { samples, interp } => {
                let n = samples.len();
                let mut u = t * n as f64 / TAU;
                // grid points must reproduce their samples exactly
                let r = u.round();
                if (u - r).abs() <= 4.0 * f64::EPSILON * r.max(1.0) {
                    u = r;
                }
                let j = (u.floor() as usize) % n;
                match interp {
                    Interp::Step => samples[j],
                    Interp::Linear => {
                        let w = u - u.floor();
                        samples[j] + w * (samples[(j + 1) % n] - samples[j])
                    }
                }
            }
            Repr::Piecewise { breaks, values } => {
                let i = breaks.partition_point(|&x| x <= t);
                values[(i + values.len() - 1) % values.len()]
            }
        }
    }

    /// Values on the uniform grid.
    pub fn samples(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Sampled { samples, .. } => samples.clone(),
            Repr::Piecewise { .. } => (0..self.n).map(|j| self.eval(grid_point(j, self.n))).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.repr {
            Repr::Sampled { samples, .. } => samples.iter().fold(0.0, |m, v| m.max(v.abs())),
            Repr::Piecewise { values, .. } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let repr = match &self.repr {
            Repr::Sampled { samples, interp } => Repr::Sampled {
                samples: samples.iter().map(|v| c * v).collect(),
                interp: *interp,
            },
            Repr::Piecewise { breaks, values } => Repr::Piecewise {
                breaks: breaks.clone(),
                values: values.iter().map(|v| c * v).collect(),
            },
        };
        CurvatureProfile { n: self.n, repr }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// Same function sampled on a different grid (linear profiles are
    /// re-interpolated, exact step functions only change their grid).
    pub fn with_grid(&self, n: usize) -> Result<Self> {
        match &self.repr {
            Repr::Piecewise { breaks, values } => Self::piecewise(breaks.clone(), values.clone(), n),
            Repr::Sampled { interp, .. } => Self::from_fn(|t| self.eval(t), n, *interp),
        }
    }

    /// `(t_start, t_end, value)` for each constant run, used by the integrator.
    pub(crate) fn constant_runs(&self) -> Option<Vec<(f64, f64, f64)>> {
        let (breaks, values) = self.pieces()?;
        let m = breaks.len();
        let mut runs = Vec::with_capacity(m + 1);
        if breaks[0] > 0.0 {
            runs.push((0.0, breaks[0], values[m - 1]));
        }
        for i in 0..m {
            let end = if i + 1 < m { breaks[i + 1] } else { TAU };
            runs.push((breaks[i], end, values[i]));
        }
        Some(runs)
    }
}

/// Integral of the profile over one period.
pub fn total_curvature(k: &CurvatureProfile) -> f64 {
    match &k.repr {
        // the periodic trapezoid rule is exact for piecewise-linear profiles
        Repr::Sampled { samples, .. } => samples.iter().sum::<f64>() * k.grid_step(),
        Repr::Piecewise { .. } => k
            .constant_runs()
            .unwrap_or_default()
            .iter()
            .map(|(s, e, v)| v * (e - s))
            .sum(),
    }
}

fn zero_total_threshold(k: &CurvatureProfile) -> f64 {
    1e-8 * k.max_abs() * TAU
}

/// Rescales `k` so that its total curvature is 2π.
pub fn normalize_total(k: &CurvatureProfile) -> Result<(CurvatureProfile, ScaleFactor)> {
    let total = total_curvature(k);
    if total.abs() < zero_total_threshold(k) || total == 0.0 {
        return Err(Error::ZeroTotalCurvature { total });
    }
    let c = ScaleFactor::new(TAU / total)?;
    Ok((k.scaled(c.value()), c))
}

/// Precomposes `k` with a diffeomorphism that dilates the region where
/// `k > 0`, so the total curvature becomes positive. Returns the identity
/// when the total is already away from zero.
pub fn make_integral_nonzero(k: &CurvatureProfile) -> Result<(CurvatureProfile, CircleDiffeo)> {
    if k.max_abs() < 1e-300 {
        return Err(Error::IdenticallyZero);
    }
    if total_curvature(k).abs() >= zero_total_threshold(k) {
        return Ok((k.clone(), CircleDiffeo::identity()));
    }
    // d⁻¹ has density 2 where k > 0 and 1 elsewhere, renormalized to one
    // turn; then ∫ k∘d = ∫ k (d⁻¹)' picks up the positive part twice.
    let n = k.n();
    let h = k.grid_step();
    let weights: Vec<f64> = (0..n)
        .map(|j| if k.eval((j as f64 + 0.5) * h) > 0.0 { 2.0 } else { 1.0 })
        .collect();
    let total: f64 = weights.iter().sum::<f64>() * h;
    let mut knots_u = Vec::with_capacity(n);
    let mut knots_v = Vec::with_capacity(n);
    let mut acc = 0.0;
    for (j, w) in weights.iter().enumerate() {
        knots_u.push(j as f64 * h);
        knots_v.push(acc);
        acc += w * h * TAU / total;
    }
    let d_inv = CircleDiffeo::piecewise_linear(knots_u, knots_v)?;
    let d = d_inv.inverse();
    let composed = compose(k, &d);
    Ok((composed, d))
}

/// `(k ∘ d)(t) = k(d(t))`.
///
/// Linear profiles are resampled on the uniform grid; piecewise-constant
/// profiles keep exact breakpoints, pulled back through `d⁻¹`.
pub fn compose(k: &CurvatureProfile, d: &CircleDiffeo) -> CurvatureProfile {
    match (&k.repr, k.pieces()) {
        (Repr::Sampled { interp: Interp::Linear, .. }, _) | (_, None) => {
            let samples = (0..k.n).map(|j| k.eval(d.apply(grid_point(j, k.n)))).collect();
            CurvatureProfile {
                n: k.n,
                repr: Repr::Sampled {
                    samples,
                    interp: Interp::Linear,
                },
            }
        }
        (_, Some((breaks, values))) => {
            let d_inv = d.inverse();
            let mut pulled: Vec<(f64, f64)> = breaks
                .iter()
                .zip(values.iter())
                .map(|(&b, &v)| {
                    let mut s = d_inv.apply(b).rem_euclid(TAU);
                    if s >= TAU {
                        s = 0.0;
                    }
                    (s, v)
                })
                .collect();
            pulled.sort_by(|x, y| x.0.total_cmp(&y.0));
            // a break squeezed onto its successor leaves an empty piece
            let mut out_b: Vec<f64> = Vec::with_capacity(pulled.len());
            let mut out_v: Vec<f64> = Vec::with_capacity(pulled.len());
            for (s, v) in pulled {
                if let Some(last) = out_b.last() {
                    if s <= *last {
                        *out_v.last_mut().unwrap() = v;
                        continue;
                    }
                }
                out_b.push(s);
                out_v.push(v);
            }
            CurvatureProfile {
                n: k.n,
                repr: Repr::Piecewise {
                    breaks: out_b,
                    values: out_v,
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_curvature_examples() {
        let one = CurvatureProfile::constant(1.0, 64).unwrap();
        assert!((total_curvature(&one) - TAU).abs() < 1e-13);

        let step = StepSpec::quarters(0.5, 2.0).unwrap().profile(64).unwrap();
        assert!((total_curvature(&step) - 5.0 * PI / 2.0).abs() < 1e-13);

        let cos2 = CurvatureProfile::from_fn(|t| (2.0 * t).cos(), 1024, Interp::Linear).unwrap();
        assert!(total_curvature(&cos2).abs() < 1e-12);
    }

    #[test]
    fn sampled_step_total_is_exact() {
        let spec = StepSpec::quarters(0.5, 2.0).unwrap();
        let k = CurvatureProfile::from_fn(|t| spec.eval(t), 64, Interp::Step).unwrap();
        assert!((total_curvature(&k) - 5.0 * PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn normalize_examples() {
        let two = CurvatureProfile::constant(2.0, 32).unwrap();
        let (k, c) = normalize_total(&two).unwrap();
        assert!((c.value() - 0.5).abs() < 1e-15);
        assert!(k.samples().iter().all(|v| (v - 1.0).abs() < 1e-15));

        let step = StepSpec::quarters(0.5, 2.0).unwrap().profile(64).unwrap();
        let (_, c) = normalize_total(&step).unwrap();
        assert!((c.value() - 0.8).abs() < 1e-14);

        let cos2 = CurvatureProfile::from_fn(|t| (2.0 * t).cos(), 1024, Interp::Linear).unwrap();
        assert!(matches!(normalize_total(&cos2), Err(Error::ZeroTotalCurvature { .. })));
    }

    #[test]
    fn normalize_is_idempotent() {
        let k = CurvatureProfile::from_fn(|t| 1.5 + t.sin() + 0.3 * (3.0 * t).cos(), 512, Interp::Linear).unwrap();
        let (k1, _) = normalize_total(&k).unwrap();
        let (k2, c2) = normalize_total(&k1).unwrap();
        assert!((c2.value() - 1.0).abs() < 1e-12);
        let diff = k1.samples().iter().zip(k2.samples()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-12);
    }

    #[test]
    fn make_integral_nonzero_examples() {
        let one = CurvatureProfile::constant(1.0, 64).unwrap();
        let (k, d) = make_integral_nonzero(&one).unwrap();
        assert_eq!(k, one);
        assert_eq!(d, CircleDiffeo::identity());

        let cos2 = CurvatureProfile::from_fn(|t| (2.0 * t).cos(), 4096, Interp::Linear).unwrap();
        let (k, d) = make_integral_nonzero(&cos2).unwrap();
        assert!(total_curvature(&k) > 0.1, "total {}", total_curvature(&k));
        assert!(d.is_monotone(4096));

        let zero = CurvatureProfile::constant(0.0, 64).unwrap();
        assert_eq!(make_integral_nonzero(&zero), Err(Error::IdenticallyZero));
    }

    #[test]
    fn compose_identity_and_rotation() {
        let k = CurvatureProfile::from_fn(|t| t.sin() + 2.0, 256, Interp::Linear).unwrap();
        let same = compose(&k, &CircleDiffeo::identity());
        assert_eq!(same.samples(), k.samples());

        let step = StepSpec::quarters(0.5, 2.0).unwrap().profile(256).unwrap();
        let rotated = compose(&step, &CircleDiffeo::rotation(FRAC_PI_2));
        let (breaks, values) = rotated.pieces().unwrap();
        for (b, want) in breaks.iter().zip([0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]) {
            assert!((b - want).abs() < 1e-12, "{breaks:?}");
        }
        assert_eq!(values, vec![2.0, 0.5, 2.0, 0.5]);
        assert_eq!(rotated.eval(0.1), 2.0);
    }

    #[test]
    fn compose_with_warp_matches_direct_evaluation() {
        use rand::{Rng, SeedableRng};
        let n = 4096;
        let k = CurvatureProfile::from_fn(f64::sin, n, Interp::Linear).unwrap();
        // monotone warp 2·atan(λ tan(t/2)) lifted continuously
        let lam: f64 = 1.7;
        let warp = move |t: f64| {
            let k = ((t + PI) / TAU).floor();
            let u = t - TAU * k;
            2.0 * (lam * (u / 2.0).tan()).atan() + TAU * k
        };
        let d = CircleDiffeo::from_lift_fn(warp, 8192).unwrap();
        let kd = compose(&k, &d);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let t: f64 = rng.gen_range(0.0..TAU);
            let direct = warp(t).sin();
            assert!((kd.eval(t) - direct).abs() < 1e-4, "t={t}");
        }
    }

    #[test]
    fn compose_round_trip_through_inverse() {
        let n = 2048;
        let k = CurvatureProfile::from_fn(|t| 1.0 + 0.5 * (2.0 * t).cos(), n, Interp::Linear).unwrap();
        let d = CircleDiffeo::moebius(num_complex::Complex64::new(0.3, 0.2)).unwrap();
        let back = compose(&compose(&k, &d), &d.inverse());
        let err = k.samples().iter().zip(back.samples()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 10.0 / n as f64, "sup error {err}");
    }

    #[test]
    fn evaluation_is_periodic() {
        let k = CurvatureProfile::from_fn(|t| (3.0 * t).cos(), 128, Interp::Linear).unwrap();
        for j in 0..50 {
            let t = 0.13 * j as f64;
            assert!((k.eval(t) - k.eval(t + TAU)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_profiles() {
        assert!(CurvatureProfile::sampled(vec![1.0; 4], Interp::Linear).is_err());
        assert!(CurvatureProfile::sampled(vec![f64::NAN; 16], Interp::Linear).is_err());
        assert!(StepSpec::quarters(2.0, 1.0).is_err());
        assert!(StepSpec::quarters(0.0, 1.0).is_err());
        assert!(ScaleFactor::new(0.0).is_err());
    }
}
