//! Disk-preserving Möbius maps `g_β(z) = (z − β)/(1 − β̄z)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bicircle::{is_core, Configuration};
use crate::curvature::CircleDiffeo;
use crate::error::{Error, Result};

/// Geodesics meeting at a smaller angle are rejected as degenerate.
pub const MIN_INTERSECTION_ANGLE: f64 = 1e-6;

/// A point `β` of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct MoebiusParameter(Complex64);

impl MoebiusParameter {
    pub fn new(beta: Complex64) -> Result<Self> {
        if !(beta.norm() < 1.0) {
            return Err(Error::InvalidInput(format!(
                "Möbius parameter must satisfy |beta| < 1, got {}",
                beta.norm()
            )));
        }
        Ok(MoebiusParameter(beta))
    }

    pub fn zero() -> Self {
        MoebiusParameter(Complex64::new(0.0, 0.0))
    }

    pub fn beta(self) -> Complex64 {
        self.0
    }

    /// `g_β⁻¹ = g_{−β}`.
    pub fn inverse(self) -> Self {
        MoebiusParameter(-self.0)
    }

    /// The restriction of `g_β` to the circle as a lift.
    pub fn to_diffeo(self) -> CircleDiffeo {
        CircleDiffeo::Moebius { beta: self.0 }
    }
}

impl TryFrom<Complex64> for MoebiusParameter {
    type Error = Error;

    fn try_from(beta: Complex64) -> Result<Self> {
        MoebiusParameter::new(beta)
    }
}

impl From<MoebiusParameter> for Complex64 {
    fn from(m: MoebiusParameter) -> Self {
        m.0
    }
}

pub fn moebius_apply(m: MoebiusParameter, z: Complex64) -> Complex64 {
    let b = m.0;
    (z - b) / (1.0 - b.conj() * z)
}

/// Applies `g_β` to each point; unit-modulus drift is removed.
pub fn moebius_on_config(m: MoebiusParameter, c: &Configuration) -> Result<Configuration> {
    Configuration::new(c.points().map(|z| {
        let w = moebius_apply(m, z);
        w / w.norm()
    }))
}

/// A hyperbolic geodesic: a diameter through the origin with unit
/// direction `d`, or a circle orthogonal to the unit circle.
#[derive(Debug, Clone, Copy)]
enum Geodesic {
    Diameter(Complex64),
    Arc { center: Complex64 },
}

/// Geodesic with ideal endpoints `u` and `v`.
fn geodesic(u: Complex64, v: Complex64) -> Geodesic {
    let denom = 1.0 + (u * v.conj()).re;
    let s = u + v;
    // nearly antipodal endpoints give a huge orthogonal circle
    if denom < 1e-12 || s.norm() < 1e-12 {
        return Geodesic::Diameter(u / u.norm());
    }
    Geodesic::Arc { center: s / denom }
}

fn tangent_at(g: Geodesic, w: Complex64) -> Complex64 {
    match g {
        Geodesic::Diameter(d) => d,
        Geodesic::Arc { center, .. } => Complex64::i() * (w - center),
    }
}

/// Point `t·d` of the diameter `d` on the orthogonal circle, inside the disk.
fn line_meets_arc(d: Complex64, center: Complex64) -> Option<Complex64> {
    let p = (d.conj() * center).re;
    let disc = p * p - 1.0;
    if disc < 0.0 {
        return None;
    }
    // roots multiply to 1; take the smaller one without cancellation
    let big = p + p.signum() * disc.sqrt();
    Some(d * (1.0 / big))
}

fn intersect(g1: Geodesic, g2: Geodesic) -> Option<Complex64> {
    match (g1, g2) {
        (Geodesic::Diameter(_), Geodesic::Diameter(_)) => Some(Complex64::new(0.0, 0.0)),
        (Geodesic::Diameter(d), Geodesic::Arc { center, .. }) | (Geodesic::Arc { center, .. }, Geodesic::Diameter(d)) => {
            line_meets_arc(d, center)
        }
        (Geodesic::Arc { center: c1, .. }, Geodesic::Arc { center: c2, .. }) => {
            // both circles satisfy |z|² − 2Re(z c̄) + 1 = 0, so the radical
            // line passes through the origin perpendicular to c1 − c2
            let diff = c1 - c2;
            if diff.norm() == 0.0 {
                return None;
            }
            let d = Complex64::i() * diff / diff.norm();
            line_meets_arc(d, c1)
        }
    }
}

/// Splits `q` into a core configuration and `β` with `g_β(core) = q`.
///
/// The geodesics joining `q₁, q₃` and `q₂, q₄` meet at `−β`; `g_{−β}` moves
/// that point to the origin, which turns both geodesics into diameters.
pub fn evaluation_inverse(q: &Configuration) -> Result<(Configuration, MoebiusParameter)> {
    let p = q.points();
    let g1 = geodesic(p[0], p[2]);
    let g2 = geodesic(p[1], p[3]);
    let w = intersect(g1, g2).ok_or(Error::NumericallyDegenerate { angle: 0.0 })?;
    let t = tangent_at(g1, w) / tangent_at(g2, w);
    let mut ang = t.arg().abs();
    if ang > std::f64::consts::FRAC_PI_2 {
        ang = std::f64::consts::PI - ang;
    }
    if ang < MIN_INTERSECTION_ANGLE || !(w.norm() < 1.0) {
        return Err(Error::NumericallyDegenerate { angle: ang });
    }
    let m = MoebiusParameter::new(-w)?;
    let core = moebius_on_config(m.inverse(), q)?;
    Ok((core, m))
}

/// Distance of `g_β(P)` from the core.
pub fn core_residual(m: MoebiusParameter, c: &Configuration) -> Result<f64> {
    Ok(moebius_on_config(m, c)?.alternating_sum().norm())
}

/// True when `c` is in the core within `tol`, after [`evaluation_inverse`].
pub fn splits_cleanly(q: &Configuration, tol: f64) -> bool {
    evaluation_inverse(q)
        .ok()
        .and_then(|(core, m)| {
            let back = moebius_on_config(m, &core).ok()?;
            let err = back
                .points()
                .iter()
                .zip(q.points())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            Some(is_core(&core, tol) && err < tol)
        })
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn beta(re: f64, im: f64) -> MoebiusParameter {
        MoebiusParameter::new(Complex64::new(re, im)).unwrap()
    }

    fn random_beta(rng: &mut ChaCha8Rng, rmax: f64) -> MoebiusParameter {
        let r = rmax * rng.gen::<f64>().sqrt();
        MoebiusParameter::new(Complex64::from_polar(r, rng.gen_range(0.0..TAU))).unwrap()
    }

    #[test]
    fn basic_values() {
        let z = Complex64::new(0.3, -0.2);
        assert_eq!(moebius_apply(MoebiusParameter::zero(), z), z);
        let m = beta(0.3, 0.4);
        assert!(moebius_apply(m, m.beta()).norm() < 1e-15);
        assert!((moebius_apply(m, Complex64::new(0.0, 0.0)) + m.beta()).norm() < 1e-15);
        let h = beta(0.5, 0.0);
        assert!((moebius_apply(h, Complex64::new(1.0, 0.0)) - 1.0).norm() < 1e-15);
        assert!((moebius_apply(h, Complex64::new(-1.0, 0.0)) + 1.0).norm() < 1e-15);
        assert!(MoebiusParameter::new(Complex64::new(0.8, 0.6)).is_err());
    }

    #[test]
    fn preserves_the_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let m = random_beta(&mut rng, 0.99);
            let z = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            assert!((moebius_apply(m, z).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn intertwining() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let m = random_beta(&mut rng, 0.95);
            let phi: f64 = rng.gen_range(0.0..TAU);
            let rot = Complex64::from_polar(1.0, phi);
            let z = Complex64::from_polar(rng.gen::<f64>(), rng.gen_range(0.0..TAU));
            let lhs = moebius_apply(MoebiusParameter::new(rot * m.beta()).unwrap(), rot * z);
            let rhs = rot * moebius_apply(m, z);
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn on_config_keeps_order() {
        let c = moebius_on_config(MoebiusParameter::zero(), &Configuration::quarters()).unwrap();
        assert_eq!(c, Configuration::quarters());
        let moved = moebius_on_config(beta(0.3, 0.0), &Configuration::quarters()).unwrap();
        for z in moved.points() {
            assert!((z.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn diffeo_matches_pointwise_map() {
        let m = beta(-0.2, 0.6);
        let d = m.to_diffeo();
        for j in 0..64 {
            let t = TAU * j as f64 / 64.0;
            let w = moebius_apply(m, Complex64::from_polar(1.0, t));
            assert!((Complex64::from_polar(1.0, d.apply(t)) - w).norm() < 1e-14);
        }
    }

    #[test]
    fn inverse_of_core_is_trivial() {
        let (core, m) = evaluation_inverse(&Configuration::quarters()).unwrap();
        assert!(m.beta().norm() < 1e-15);
        assert_eq!(core, Configuration::quarters());
    }

    #[test]
    fn inverse_recovers_parameter() {
        let m0 = beta(0.3, 0.2);
        let q = moebius_on_config(m0, &Configuration::quarters()).unwrap();
        let (core, m) = evaluation_inverse(&q).unwrap();
        assert!((m.beta() - m0.beta()).norm() < 1e-10);
        for (p, w) in core.points().iter().zip(Configuration::quarters().points()) {
            assert!((p - w).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_round_trip_on_random_configurations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let phi: f64 = rng.gen_range(0.0..TAU);
            let base = Configuration::random_reduced(&mut rng, 0.01);
            let q = Configuration::new(base.points().map(|z| z * Complex64::from_polar(1.0, phi))).unwrap();
            assert!(splits_cleanly(&q, 1e-9), "{q:?}");
        }
    }

    #[test]
    fn only_zero_maps_a_core_point_to_the_core() {
        let p = Configuration::quarters();
        let n = 60;
        for i in 0..=n {
            for j in 0..=n {
                let b = Complex64::new(-0.9 + 1.8 * i as f64 / n as f64, -0.9 + 1.8 * j as f64 / n as f64);
                if b.norm() > 0.9 {
                    continue;
                }
                let r = core_residual(MoebiusParameter::new(b).unwrap(), &p).unwrap();
                if b.norm() < 1e-12 {
                    assert!(r < 1e-14);
                } else {
                    assert!(r > 0.1 * b.norm(), "beta {b}, residual {r}");
                }
            }
        }
    }

    #[test]
    fn points_cluster_near_the_boundary() {
        for k in 0..16 {
            let b = Complex64::from_polar(1.0 - 1e-3, TAU * k as f64 / 16.0 + 0.1);
            let q = moebius_on_config(MoebiusParameter::new(b).unwrap(), &Configuration::quarters()).unwrap();
            let mut t = q.angles().to_vec();
            t.sort_by(f64::total_cmp);
            let mut gaps: Vec<f64> = (0..4).map(|i| if i < 3 { t[i + 1] - t[i] } else { t[0] + TAU - t[3] }).collect();
            gaps.sort_by(f64::total_cmp);
            // at most two clusters: the two smallest gaps are tiny
            assert!(gaps[0] + gaps[1] < 0.1, "{gaps:?}");
        }
    }

    #[test]
    fn json_shape() {
        let m = beta(0.25, -0.5);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[0.25,-0.5]");
        assert!(serde_json::from_str::<MoebiusParameter>("[1.0,0.0]").is_err());
    }
}
