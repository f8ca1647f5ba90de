//! Invariants separate closed orbits: two points of the zero level of the
//! planar one-particle momentum with the same cone coordinates differ by a
//! rotation.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{int, rational_to_f64, Rational};

/// A single planar particle `(q, p)` with rational coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarPoint {
    pub q: [Rational; 2],
    pub p: [Rational; 2],
}

impl PlanarPoint {
    pub fn new(q: [Rational; 2], p: [Rational; 2]) -> Self {
        PlanarPoint { q, p }
    }

    /// `(x1, x2, rho)`.
    pub fn cone_coordinates(&self) -> [Rational; 3] {
        let qq = &self.q[0] * &self.q[0] + &self.q[1] * &self.q[1];
        let pp = &self.p[0] * &self.p[0] + &self.p[1] * &self.p[1];
        let qp = &self.q[0] * &self.p[0] + &self.q[1] * &self.p[1];
        [&qq - &pp, qp * int(2), qq + pp]
    }

    pub fn momentum(&self) -> Rational {
        &self.q[0] * &self.p[1] - &self.q[1] * &self.p[0]
    }

    fn to_f64(&self) -> [[f64; 2]; 2] {
        [
            [rational_to_f64(&self.q[0]), rational_to_f64(&self.q[1])],
            [rational_to_f64(&self.p[0]), rational_to_f64(&self.p[1])],
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KempfNessReport {
    /// `rho ≥ 0` and `rho² = x1² + x2²` hold exactly at both points.
    pub on_cone: bool,
    pub same_invariants: bool,
    pub angle: f64,
    /// Largest coordinate difference after rotating the first point.
    pub error: f64,
}

fn rotate(v: [f64; 2], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

/// Checks that `b` is a rotation of `a`. Both points must lie on the zero
/// level of the momentum and share cone coordinates.
pub fn kempf_ness_check(a: &PlanarPoint, b: &PlanarPoint) -> Result<KempfNessReport> {
    if !a.momentum().is_zero() || !b.momentum().is_zero() {
        return Err(Error::Invalid("points must have zero momentum".into()));
    }
    let on_cone = [a, b].iter().all(|x| {
        let [x1, x2, rho] = x.cone_coordinates();
        !rho.is_negative() && &rho * &rho == &x1 * &x1 + &x2 * &x2
    });
    let same_invariants = a.cone_coordinates() == b.cone_coordinates();
    let [qa, pa] = a.to_f64();
    let [qb, pb] = b.to_f64();
    let norm = |v: [f64; 2]| v[0].hypot(v[1]);
    // align along the longer vector, which is well conditioned
    let (u, v) = if norm(qa) >= norm(pa) { (qa, qb) } else { (pa, pb) };
    let angle = (u[0] * v[1] - u[1] * v[0]).atan2(u[0] * v[0] + u[1] * v[1]);
    let (rq, rp) = (rotate(qa, angle), rotate(pa, angle));
    let error = [rq[0] - qb[0], rq[1] - qb[1], rp[0] - pb[0], rp[1] - pb[1]]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(KempfNessReport {
        on_cone,
        same_invariants,
        angle,
        error,
    })
}

fn unit_vector(t: &Rational) -> [Rational; 2] {
    let one = int(1);
    let d = &one + t * t;
    [(&one - t * t) / &d, (t * int(2)) / d]
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=9).into())
}

/// Pairs of zero-momentum points with equal invariants, sampled with exact
/// rational coordinates: `q = a·u, p = b·u` for a rational unit vector `u`,
/// and the partner uses `±(a, b)` with a different unit vector.
pub fn sample_pairs(seed: u64, count: usize) -> Vec<(PlanarPoint, PlanarPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = small_rational(&mut rng);
        let b = small_rational(&mut rng);
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let u = unit_vector(&small_rational(&mut rng));
        let w = unit_vector(&small_rational(&mut rng));
        let sign = if rng.random::<bool>() { int(1) } else { int(-1) };
        let first = PlanarPoint::new(
            [&a * &u[0], &a * &u[1]],
            [&b * &u[0], &b * &u[1]],
        );
        let (a2, b2) = (&a * &sign, &b * &sign);
        let second = PlanarPoint::new([&a2 * &w[0], &a2 * &w[1]], [&b2 * &w[0], &b2 * &w[1]]);
        out.push((first, second));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_pairs_are_rotations() {
        for (a, b) in sample_pairs(7, 200) {
            let r = kempf_ness_check(&a, &b).unwrap();
            assert!(r.on_cone && r.same_invariants);
            assert!(r.error <= 1e-9, "error {}", r.error);
        }
    }

    #[test]
    fn nonzero_momentum_rejected() {
        let p = PlanarPoint::new([int(1), int(0)], [int(0), int(1)]);
        assert!(kempf_ness_check(&p, &p).is_err());
    }
}
