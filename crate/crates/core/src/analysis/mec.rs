use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seed of the shuffle used by [`min_enclosing_circle`].
pub const DEFAULT_MEC_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnclosingCircle {
    pub center: Complex64,
    pub radius: f64,
    /// Indices of the input points that determine the circle.
    pub support: Vec<usize>,
}

impl EnclosingCircle {
    /// Curvature `K = 1/R` of the circle.
    pub fn curvature(&self) -> f64 {
        1.0 / self.radius
    }

    pub fn contains(&self, p: Complex64, rel_tol: f64) -> bool {
        (p - self.center).norm() <= self.radius * (1.0 + rel_tol)
    }
}

fn circle2(a: Complex64, b: Complex64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    (c, 0.5 * (a - b).norm())
}

/// Circumcircle, computed relative to `a`; `None` for collinear points.
fn circle3(a: Complex64, b: Complex64, c: Complex64) -> Option<(Complex64, f64)> {
    let (u, v) = (b - a, c - a);
    let d = 2.0 * (u.re * v.im - u.im * v.re);
    if d == 0.0 {
        return None;
    }
    let (uu, vv) = (u.norm_sqr(), v.norm_sqr());
    let o = Complex64::new((v.im * uu - u.im * vv) / d, (u.re * vv - v.re * uu) / d);
    Some((a + o, o.norm()))
}

/// Smallest circle enclosing `points` (Welzl's randomized incremental
/// algorithm, shuffled with a fixed seed).
pub fn min_enclosing_circle(points: &[Complex64]) -> Result<EnclosingCircle> {
    min_enclosing_circle_seeded(points, DEFAULT_MEC_SEED)
}

pub fn min_enclosing_circle_seeded(points: &[Complex64], seed: u64) -> Result<EnclosingCircle> {
    if points.is_empty() {
        return Err(Error::InvalidInput("need at least one point".into()));
    }
    if points.iter().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
        return Err(Error::InvalidInput("points must be finite".into()));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let p = |i: usize| points[order[i]];
    let outside = |c: Complex64, r: f64, q: Complex64| (q - c).norm() > r * (1.0 + 1e-14) + 1e-300;

    let (mut c, mut r) = (p(0), 0.0);
    let mut support = vec![order[0]];
    for i in 1..order.len() {
        if !outside(c, r, p(i)) {
            continue;
        }
        (c, r) = (p(i), 0.0);
        support = vec![order[i]];
        for j in 0..i {
            if !outside(c, r, p(j)) {
                continue;
            }
            (c, r) = circle2(p(i), p(j));
            support = vec![order[i], order[j]];
            for k in 0..j {
                if !outside(c, r, p(k)) {
                    continue;
                }
                match circle3(p(i), p(j), p(k)) {
                    Some(cr) => {
                        (c, r) = cr;
                        support = vec![order[i], order[j], order[k]];
                    }
                    None => {
                        // collinear: the farthest pair spans the circle
                        let cands = [(p(i), p(j), order[i], order[j]), (p(i), p(k), order[i], order[k]), (p(j), p(k), order[j], order[k])];
                        let best = cands
                            .iter()
                            .max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm()))
                            .unwrap();
                        (c, r) = circle2(best.0, best.1);
                        support = vec![best.2, best.3];
                    }
                }
            }
        }
    }
    support.sort_unstable();
    Ok(EnclosingCircle { center: c, radius: r, support })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn two_points() {
        let c = min_enclosing_circle(&[Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)]).unwrap();
        assert!((c.center - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((c.radius - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equilateral_triangle() {
        let pts = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 3f64.sqrt() / 2.0),
        ];
        let c = min_enclosing_circle(&pts).unwrap();
        assert!((c.radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(c.support.len(), 3);
    }

    #[test]
    fn obtuse_triangle_uses_longest_side() {
        let pts = [Complex64::new(0.0, 0.0), Complex64::new(4.0, 0.0), Complex64::new(2.0, 0.5)];
        let c = min_enclosing_circle(&pts).unwrap();
        assert!((c.radius - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_and_collinear() {
        let one = min_enclosing_circle(&[Complex64::new(3.0, 4.0)]).unwrap();
        assert_eq!(one.radius, 0.0);
        let line: Vec<Complex64> = (0..10).map(|i| Complex64::new(i as f64, 2.0 * i as f64)).collect();
        let c = min_enclosing_circle(&line).unwrap();
        assert!((c.radius - 0.5 * (81.0f64 + 324.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn random_points_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pts: Vec<Complex64> = (0..1000).map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..2.0))).collect();
            let c = min_enclosing_circle(&pts).unwrap();
            assert!(pts.iter().all(|&p| c.contains(p, 1e-12)));
            for &i in &c.support {
                assert!(((pts[i] - c.center).norm() - c.radius).abs() < 1e-12 * c.radius);
            }
            // no circle through a pair or triple of points is smaller and still encloses
            for &i in &c.support {
                for &j in &c.support {
                    if i < j {
                        let (cc, r) = circle2(pts[i], pts[j]);
                        if r < c.radius * (1.0 - 1e-12) {
                            assert!(pts.iter().any(|&p| (p - cc).norm() > r * (1.0 + 1e-12)));
                        }
                    }
                }
            }
        }
    }
}
