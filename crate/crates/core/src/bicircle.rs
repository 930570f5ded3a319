//! Four points on the circle as parameters of two-valued step curvature.
//!
//! A configuration `(p₁, p₂, p₃, p₄)` cuts the circle into four arcs that
//! carry the curvature values `a, b, a, b`. The curve closes exactly when
//! `p₁ − p₂ + p₃ − p₄ = 0` (opposite points antipodal); these closing
//! configurations form the core.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::ErrorVector;
use crate::solver::winding_number;

/// Tolerance on `|p_i| = 1`.
pub const UNIT_TOL: f64 = 1e-12;
/// Smallest error magnitude tolerated along a loop avoiding the core.
pub const LOOP_CORE_TOL: f64 = 1e-12;

/// Four distinct unit complex numbers in counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Complex64; 4]", into = "[Complex64; 4]")]
pub struct Configuration {
    p: [Complex64; 4],
}

/// Reduced coordinates `0 < x < y < z < 1` of a configuration with first
/// point 1: the others are `e^{2πix}, e^{2πiy}, e^{2πiz}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ReducedConfigCoords {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Argument of `z` in `[0, 2π)`.
fn angle(z: Complex64) -> f64 {
    let a = z.arg().rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

impl Configuration {
    pub fn new(p: [Complex64; 4]) -> Result<Self> {
        if p.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()) || (z.norm() - 1.0).abs() > UNIT_TOL) {
            return Err(Error::InvalidInput("configuration points must have modulus 1".into()));
        }
        let gaps = [p[1], p[2], p[3]].map(|z| angle(z / p[0]));
        if !(gaps[0] > 0.0 && gaps[1] > gaps[0] && gaps[2] > gaps[1]) {
            return Err(Error::InvalidInput(
                "configuration points must be distinct and counterclockwise".into(),
            ));
        }
        Ok(Configuration { p })
    }

    /// Points at the given angles (radians).
    pub fn from_angles(t: [f64; 4]) -> Result<Self> {
        Self::new(t.map(|a| Complex64::from_polar(1.0, a)))
    }

    /// `(1, i, −1, −i)`.
    pub fn quarters() -> Self {
        Configuration {
            p: [unit(), Complex64::i(), -unit(), -Complex64::i()],
        }
    }

    pub fn points(&self) -> [Complex64; 4] {
        self.p
    }

    /// Angles of the points in `[0, 2π)`.
    pub fn angles(&self) -> [f64; 4] {
        self.p.map(angle)
    }

    /// `p₁ − p₂ + p₃ − p₄`.
    pub fn alternating_sum(&self) -> Complex64 {
        self.p[0] - self.p[1] + self.p[2] - self.p[3]
    }

    pub fn is_reduced(&self) -> bool {
        (self.p[0] - unit()).norm() <= UNIT_TOL
    }

    /// Arc lengths from each point to the next, summing to 2π.
    pub fn arc_lengths(&self) -> [f64; 4] {
        let g = [self.p[1], self.p[2], self.p[3]].map(|z| angle(z / self.p[0]));
        [g[0], g[1] - g[0], g[2] - g[1], TAU - g[2]]
    }

    /// Uniformly random counterclockwise configuration with first point 1
    /// and every arc at least `min_gap` long.
    pub fn random_reduced<R: Rng + ?Sized>(rng: &mut R, min_gap: f64) -> Self {
        assert!(min_gap >= 0.0 && 4.0 * min_gap < TAU);
        let free = TAU - 4.0 * min_gap;
        let mut cuts = [rng.gen_range(0.0..free), rng.gen_range(0.0..free), rng.gen_range(0.0..free)];
        cuts.sort_by(f64::total_cmp);
        let t = [0.0, cuts[0] + min_gap, cuts[1] + 2.0 * min_gap, cuts[2] + 3.0 * min_gap];
        Configuration {
            p: t.map(|a| Complex64::from_polar(1.0, a)),
        }
        .with_first_exact()
    }

    /// Random core configuration with first point 1.
    pub fn random_core<R: Rng + ?Sized>(rng: &mut R, min_gap: f64) -> Self {
        let x = rng.gen_range(min_gap..(0.5 * TAU - min_gap));
        let q = Complex64::from_polar(1.0, x);
        Configuration {
            p: [unit(), q, -unit(), -q],
        }
    }

    fn with_first_exact(mut self) -> Self {
        self.p[0] = unit();
        self
    }
}

impl TryFrom<[Complex64; 4]> for Configuration {
    type Error = Error;

    fn try_from(p: [Complex64; 4]) -> Result<Self> {
        Configuration::new(p)
    }
}

impl From<Configuration> for [Complex64; 4] {
    fn from(c: Configuration) -> Self {
        c.p
    }
}

impl ReducedConfigCoords {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(0.0 < x && x < y && y < z && z < 1.0) {
            return Err(Error::InvalidInput(format!(
                "reduced coordinates need 0 < x < y < z < 1, got ({x}, {y}, {z})"
            )));
        }
        Ok(ReducedConfigCoords { x, y, z })
    }
}

impl TryFrom<[f64; 3]> for ReducedConfigCoords {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        ReducedConfigCoords::new(v[0], v[1], v[2])
    }
}

impl From<ReducedConfigCoords> for [f64; 3] {
    fn from(c: ReducedConfigCoords) -> Self {
        [c.x, c.y, c.z]
    }
}

/// `|p₁ − p₂ + p₃ − p₄| < tol`.
pub fn is_core(c: &Configuration, tol: f64) -> bool {
    c.alternating_sum().norm() < tol
}

/// Splits `c` into the rotation `p₁` and the reduced coordinates of
/// `p₁⁻¹ c`.
pub fn to_reduced(c: &Configuration) -> (Complex64, ReducedConfigCoords) {
    let rot = c.p[0];
    let [x, y, z] = [c.p[1], c.p[2], c.p[3]].map(|q| angle(q / rot) / TAU);
    (rot, ReducedConfigCoords { x, y, z })
}

/// Inverse of [`to_reduced`].
pub fn rebuild(rotation: Complex64, coords: &ReducedConfigCoords) -> Result<Configuration> {
    let e = |u: f64| rotation * Complex64::from_polar(1.0, TAU * u);
    Configuration::new([rotation, e(coords.x), e(coords.y), e(coords.z)])
}

/// Division points by tangent angle for the curve of total curvature 2π
/// whose arcs `L₁..L₄` (arc lengths of `c`) carry `aP, bP, aP, bP`, with
/// `aP/bP = a/b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleConfig {
    pub theta_config: Configuration,
    pub a_p: f64,
    pub b_p: f64,
}

fn check_values(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput(format!("curvature values must be positive, got a={a}, b={b}")));
    }
    Ok(())
}

/// Normalizing factor `σ` with `σ(a(L₁ + L₃) + b(L₂ + L₄)) = 2π`.
fn sigma(lengths: &[f64; 4], a: f64, b: f64) -> f64 {
    TAU / (a * (lengths[0] + lengths[2]) + b * (lengths[1] + lengths[3]))
}

pub fn arclength_to_angle_config(c: &Configuration, a: f64, b: f64) -> Result<AngleConfig> {
    if !c.is_reduced() {
        return Err(Error::NotReduced);
    }
    check_values(a, b)?;
    let l = c.arc_lengths();
    let s = sigma(&l, a, b);
    let (a_p, b_p) = (a * s, b * s);
    let t1 = a_p * l[0];
    let t2 = t1 + b_p * l[1];
    let t3 = t2 + a_p * l[2];
    let theta_config = Configuration::new([
        unit(),
        Complex64::from_polar(1.0, t1),
        Complex64::from_polar(1.0, t2),
        Complex64::from_polar(1.0, t3),
    ])?;
    Ok(AngleConfig { theta_config, a_p, b_p })
}

/// Error vector of the arc-length curve of total curvature 2π whose
/// curvature is `a, b, a, b` (rescaled) on the arcs of the reduced
/// configuration `c`, the first arc carrying `a`:
/// `E = (1/(i·bP) − 1/(i·aP))(1 − q₂ + q₃ − q₄)`.
pub fn closed_form_error(c: &Configuration, a: f64, b: f64) -> Result<ErrorVector> {
    let ac = arclength_to_angle_config(c, a, b)?;
    let i = Complex64::i();
    let factor = 1.0 / (i * ac.b_p) - 1.0 / (i * ac.a_p);
    Ok(factor * ac.theta_config.alternating_sum())
}

/// Error vector for any configuration: the curvature `a, b, a, b` starts
/// at `p₁, p₂, p₃, p₄` and the curve is integrated from parameter 0.
pub fn error_map(c: &Configuration, a: f64, b: f64) -> Result<ErrorVector> {
    check_values(a, b)?;
    let s = sigma(&c.arc_lengths(), a, b);
    let t = c.angles();
    let vals = [a * s, b * s, a * s, b * s];
    let mut cuts: Vec<(f64, f64)> = (0..4).map(|i| (t[i], vals[i])).collect();
    cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
    // the run containing 0 carries the value of the last cut
    let mut pieces = Vec::with_capacity(5);
    let wrap_val = cuts[3].1;
    if cuts[0].0 > 0.0 {
        pieces.push((cuts[0].0, wrap_val));
    }
    for i in 0..4 {
        let end = if i + 1 < 4 { cuts[i + 1].0 } else { TAU };
        pieces.push((end - cuts[i].0, cuts[i].1));
    }
    let i = Complex64::i();
    let mut theta = 0.0;
    let mut e = Complex64::new(0.0, 0.0);
    for (len, k) in pieces {
        let next = theta + k * len;
        e += (Complex64::from_polar(1.0, next) - Complex64::from_polar(1.0, theta)) / (i * k);
        theta = next;
    }
    Ok(e)
}

/// Winding number of the error vectors along a closed loop of
/// configurations.
pub fn error_winding_on_core_link(a: f64, b: f64, cycle: &[Configuration]) -> Result<i64> {
    let errors = cycle.iter().map(|c| error_map(c, a, b)).collect::<Result<Vec<_>>>()?;
    if let Some(min) = errors.iter().map(|e| e.norm()).reduce(f64::min) {
        if min < LOOP_CORE_TOL {
            return Err(Error::LoopTouchesCore { magnitude: min });
        }
    }
    winding_number(&errors)
}
