//! Orientation-preserving diffeomorphisms of the circle, stored as lifts.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An orientation-preserving circle diffeomorphism, represented by a lift
/// `f: R -> R` with `f(t + 2π) = f(t) + 2π`.
///
/// The piecewise-linear variant stores one period of knots; the closing
/// knot `(t0 + 2π, f0 + 2π)` is implicit, so the degree is exactly one.
/// The Möbius variant evaluates `z ↦ (z − β)/(1 − β̄z)` on the circle in
/// closed form, which keeps step breakpoints exact under pull-back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircleDiffeo {
    PiecewiseLinear { t: Vec<f64>, f: Vec<f64> },
    Moebius { beta: Complex64 },
}

impl CircleDiffeo {
    pub fn identity() -> Self {
        CircleDiffeo::PiecewiseLinear {
            t: vec![0.0],
            f: vec![0.0],
        }
    }

    /// `t ↦ t + phi`.
    pub fn rotation(phi: f64) -> Self {
        CircleDiffeo::PiecewiseLinear {
            t: vec![0.0],
            f: vec![phi],
        }
    }

    /// Builds a piecewise-linear lift from one period of knots.
    ///
    /// `t` must start the period, be strictly increasing and span less than
    /// 2π; `f` must be strictly increasing with `f.last() < f[0] + 2π`.
    pub fn piecewise_linear(t: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if t.is_empty() || t.len() != f.len() {
            return Err(Error::InvalidInput(
                "lift knots must be non-empty and of equal length".into(),
            ));
        }
        if t.iter().chain(f.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("lift knots must be finite".into()));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]) && v[v.len() - 1] < v[0] + TAU;
        if !increasing(&t) || !increasing(&f) {
            return Err(Error::InvalidInput(
                "lift knots must be strictly increasing within one period".into(),
            ));
        }
        Ok(CircleDiffeo::PiecewiseLinear { t, f })
    }

    /// Samples a lift function on `m` uniform points of `[0, 2π)`.
    ///
    /// `lift` must be continuous, strictly increasing and satisfy
    /// `lift(2π) = lift(0) + 2π`.
    pub fn from_lift_fn(lift: impl Fn(f64) -> f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput("need at least two lift samples".into()));
        }
        let t: Vec<f64> = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
        let f: Vec<f64> = t.iter().map(|&x| lift(x)).collect();
        Self::piecewise_linear(t, f)
    }

    pub fn moebius(beta: Complex64) -> Result<Self> {
        if !(beta.norm() < 1.0) {
            return Err(Error::InvalidInput(format!(
                "Möbius parameter must satisfy |beta| < 1, got {}",
                beta.norm()
            )));
        }
        Ok(CircleDiffeo::Moebius { beta })
    }

    /// Evaluates the lift at `t` (any real).
    pub fn apply(&self, t: f64) -> f64 {
        match self {
            CircleDiffeo::PiecewiseLinear { t: ts, f: fs } => {
                let t0 = ts[0];
                let k = ((t - t0) / TAU).floor();
                let mut tau = t - TAU * k;
                // floor() can leave tau one ulp outside [t0, t0 + 2π)
                if tau < t0 {
                    tau = t0;
                }
                let n = ts.len();
                // segment j spans ts[j]..ts[j+1], the last one closes the period
                let j = ts.partition_point(|&x| x <= tau).saturating_sub(1);
                let (ta, fa) = (ts[j], fs[j]);
                let (tb, fb) = if j + 1 < n {
                    (ts[j + 1], fs[j + 1])
                } else {
                    (t0 + TAU, fs[0] + TAU)
                };
                let w = if tb > ta { (tau - ta) / (tb - ta) } else { 0.0 };
                fa + w * (fb - fa) + TAU * k
            }
            CircleDiffeo::Moebius { beta } => moebius_lift(*beta, t),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            CircleDiffeo::PiecewiseLinear { t, f } => CircleDiffeo::PiecewiseLinear {
                t: f.clone(),
                f: t.clone(),
            },
            CircleDiffeo::Moebius { beta } => CircleDiffeo::Moebius { beta: -beta },
        }
    }

    /// Lift samples on `m` uniform points of `[0, 2π]` (endpoint included).
    pub fn lift_samples(&self, m: usize) -> Vec<f64> {
        (0..=m).map(|j| self.apply(TAU * j as f64 / m as f64)).collect()
    }

    /// Checks strict monotonicity of the lift on a uniform grid of `m` points.
    pub fn is_monotone(&self, m: usize) -> bool {
        self.lift_samples(m).windows(2).all(|w| w[1] > w[0])
    }
}

/// Continuous lift of `e^{it} ↦ g_β(e^{it})`.
///
/// `g_β(e^{it}) = e^{it} w / w̄` with `w = 1 − β e^{−it}`, and `Re w > 0`
/// for `|β| < 1`, so `arg w` stays in `(−π/2, π/2)` and never wraps.
fn moebius_lift(beta: Complex64, t: f64) -> f64 {
    let w = Complex64::new(1.0, 0.0) - beta * Complex64::from_polar(1.0, -t);
    t + 2.0 * w.im.atan2(w.re)
}
