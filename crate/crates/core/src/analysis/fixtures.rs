//! Closed test curves with known curvature.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::integrator::PlanarCurve;

fn closed_curve(n: usize, f: impl Fn(f64) -> Complex64) -> Result<PlanarCurve> {
    let mut pts: Vec<Complex64> = (0..=n).map(|j| f(TAU * j as f64 / n as f64)).collect();
    pts[n] = pts[0];
    PlanarCurve::from_points(&pts)
}

/// `(a cos t, b sin t)` sampled at `n` points.
pub fn ellipse(a: f64, b: f64, n: usize) -> Result<PlanarCurve> {
    closed_curve(n, |t| Complex64::new(a * t.cos(), b * t.sin()))
}

/// Curvature of the ellipse `(a cos t, b sin t)` at `t`.
pub fn ellipse_curvature(a: f64, b: f64, t: f64) -> f64 {
    a * b / (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).powf(1.5)
}

/// Limaçon `r = −1 − 2 sin θ`: a big loop with a small inner loop.
pub fn limacon(n: usize) -> Result<PlanarCurve> {
    closed_curve(n, |t| Complex64::from_polar(-1.0 - 2.0 * t.sin(), t))
}

/// Curvature of [`limacon`] at `θ`, `(9 − 6 sin θ)/(5 − 4 sin θ)^{3/2}`.
pub fn limacon_curvature(theta: f64) -> f64 {
    let s = theta.sin();
    (9.0 - 6.0 * s) / (5.0 - 4.0 * s).powf(1.5)
}

/// Trigonometric coefficients `(k, a_k, b_k)` of a random perturbation.
pub type Harmonics = Vec<(usize, f64, f64)>;

/// Convex curve with support function `h(θ) = 1 + Σ (a_k cos kθ + b_k sin kθ)`
/// over `k = 2..=max_k`, scaled so that `h + h'' ≥ 1 − budget > 0`.
pub fn random_convex<R: Rng + ?Sized>(rng: &mut R, max_k: usize, budget: f64, n: usize) -> Result<(PlanarCurve, Harmonics)> {
    let mut terms: Harmonics = (2..=max_k).map(|k| (k, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let weight: f64 = terms.iter().map(|&(k, a, b)| ((k * k - 1) as f64) * (a.abs() + b.abs())).sum();
    let s = budget * rng.gen_range(0.2..1.0) / weight.max(1e-300);
    for t in &mut terms {
        t.1 *= s;
        t.2 *= s;
    }
    let curve = closed_curve(n, |th| {
        let (mut h, mut dh) = (1.0, 0.0);
        for &(k, a, b) in &terms {
            let kf = k as f64;
            let (sn, cs) = (kf * th).sin_cos();
            h += a * cs + b * sn;
            dh += kf * (b * cs - a * sn);
        }
        let (sn, cs) = th.sin_cos();
        Complex64::new(h * cs - dh * sn, h * sn + dh * cs)
    })?;
    Ok((curve, terms))
}

/// Star-shaped curve `r(θ) = 1 + Σ (c_k cos kθ + d_k sin kθ)` over
/// `k = 1..=max_k` with `Σ |c_k| + |d_k| ≤ budget < 1`.
pub fn random_star<R: Rng + ?Sized>(rng: &mut R, max_k: usize, budget: f64, n: usize) -> Result<(PlanarCurve, Harmonics)> {
    let mut terms: Harmonics = (1..=max_k).map(|k| (k, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let weight: f64 = terms.iter().map(|&(_, a, b)| a.abs() + b.abs()).sum();
    let s = budget * rng.gen_range(0.2..1.0) / weight.max(1e-300);
    for t in &mut terms {
        t.1 *= s;
        t.2 *= s;
    }
    let curve = closed_curve(n, |th| {
        let r: f64 = 1.0 + terms.iter().map(|&(k, a, b)| {
            let (sn, cs) = (k as f64 * th).sin_cos();
            a * cs + b * sn
        }).sum::<f64>();
        Complex64::from_polar(r, th)
    })?;
    Ok((curve, terms))
}
