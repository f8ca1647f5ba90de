//! SU(2) as unit quaternions and its Lie algebra su(2).
//!
//! The algebra is spanned by the imaginary units `e1 = i`, `e2 = j`,
//! `e3 = k`, so the bracket is the quaternion commutator
//! `[e_i, e_j] = 2 ε_ijk e_k` and the invariant form makes `{e1, e2, e3}`
//! orthonormal. `exp` is the quaternion exponential, whose differential at
//! zero is the identity in these coordinates.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit-norm tolerance enforced after every normalization.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// A point of SU(2), stored as a unit quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", from = "[f64; 4]")]
pub struct GroupElement {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<GroupElement> for [f64; 4] {
    fn from(g: GroupElement) -> Self {
        g.to_array()
    }
}

impl From<[f64; 4]> for GroupElement {
    fn from(a: [f64; 4]) -> Self {
        GroupElement::new(a[0], a[1], a[2], a[3])
    }
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const MINUS_IDENTITY: GroupElement = GroupElement {
        w: -1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Builds an element from quaternion coefficients, normalizing them.
    ///
    /// The zero quaternion has no direction; it maps to the identity.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Self::IDENTITY;
        }
        if (n - 1.0).abs() <= f64::EPSILON {
            return GroupElement { w, x, y, z };
        }
        GroupElement {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        }
    }

    pub fn identity() -> Self {
        Self::IDENTITY
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Inverse of a unit quaternion is its conjugate.
    pub fn inverse(self) -> Self {
        GroupElement {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Quaternion product, renormalized.
    pub fn mul(self, b: GroupElement) -> Self {
        let (a0, a1, a2, a3) = (self.w, self.x, self.y, self.z);
        let (b0, b1, b2, b3) = (b.w, b.x, b.y, b.z);
        GroupElement::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }

    /// Group commutator `a b a⁻¹ b⁻¹`.
    pub fn commutator(self, b: GroupElement) -> Self {
        self.mul(b).mul(self.inverse()).mul(b.inverse())
    }

    /// Euclidean distance in ℝ⁴ between quaternions.
    pub fn distance(self, b: GroupElement) -> f64 {
        let d = [self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z];
        d.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `|g - e|` in quaternion norm.
    pub fn distance_to_identity(self) -> f64 {
        self.distance(Self::IDENTITY)
    }

    /// Distance to the nearer of `±e`.
    pub fn distance_to_center(self) -> f64 {
        self.distance(Self::IDENTITY)
            .min(self.distance(Self::MINUS_IDENTITY))
    }

    /// Imaginary part as an algebra vector.
    pub fn imaginary(self) -> AlgebraVector {
        AlgebraVector([self.x, self.y, self.z])
    }

    /// Quaternion exponential of an algebra vector.
    pub fn exp(v: AlgebraVector) -> Self {
        let theta = v.norm();
        let sinc = if theta < 1e-8 {
            1.0 - theta * theta / 6.0
        } else {
            theta.sin() / theta
        };
        GroupElement::new(theta.cos(), sinc * v.0[0], sinc * v.0[1], sinc * v.0[2])
    }

    /// Principal logarithm; angle in `[0, π)`.
    pub fn log(self) -> Result<AlgebraVector> {
        let s = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        if s < 1e-14 && self.w < 0.0 {
            return Err(Error::LogBranch);
        }
        if s == 0.0 {
            return Ok(AlgebraVector::ZERO);
        }
        let theta = s.atan2(self.w);
        Ok(AlgebraVector([self.x, self.y, self.z]) * (theta / s))
    }

    /// Rotation matrix of `v ↦ g v g⁻¹` on su(2) ≅ ℝ³.
    pub fn adjoint_matrix(self) -> [[f64; 3]; 3] {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ]
    }

    /// `Ad(g) v`, the imaginary part of `g v g⁻¹`.
    pub fn adjoint(self, v: AlgebraVector) -> AlgebraVector {
        let r = self.adjoint_matrix();
        let mut out = [0.0; 3];
        for (i, row) in r.iter().enumerate() {
            out[i] = row[0] * v.0[0] + row[1] * v.0[1] + row[2] * v.0[2];
        }
        AlgebraVector(out)
    }

    /// Haar-random element (normalized Gaussian quaternion).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let w: f64 = rng.sample(StandardNormal);
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            let z: f64 = rng.sample(StandardNormal);
            if w * w + x * x + y * y + z * z > 1e-12 {
                return GroupElement::new(w, x, y, z);
            }
        }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement::mul(self, rhs)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}

/// Free-function form of the group product.
pub fn group_mul(a: GroupElement, b: GroupElement) -> GroupElement {
    a.mul(b)
}

pub fn exp_map(v: AlgebraVector) -> GroupElement {
    GroupElement::exp(v)
}

pub fn log_map(g: GroupElement) -> Result<AlgebraVector> {
    g.log()
}

pub fn adjoint(g: GroupElement, v: AlgebraVector) -> AlgebraVector {
    g.adjoint(v)
}

/// An element of su(2) in the basis `e1, e2, e3`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgebraVector(pub [f64; 3]);

impl AlgebraVector {
    pub const ZERO: AlgebraVector = AlgebraVector([0.0; 3]);

    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        AlgebraVector([c1, c2, c3])
    }

    /// Basis vector `e_{i+1}`.
    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; 3];
        c[i] = 1.0;
        AlgebraVector(c)
    }

    /// Lie bracket; twice the cross product.
    pub fn bracket(self, other: AlgebraVector) -> AlgebraVector {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        AlgebraVector([
            2.0 * (a2 * b3 - a3 * b2),
            2.0 * (a3 * b1 - a1 * b3),
            2.0 * (a1 * b2 - a2 * b1),
        ])
    }

    /// Invariant form; `e1, e2, e3` orthonormal.
    pub fn form(self, other: AlgebraVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm(self) -> f64 {
        self.form(self).sqrt()
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        AlgebraVector([
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ])
    }
}

impl Add for AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, o: AlgebraVector) -> AlgebraVector {
        AlgebraVector([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for AlgebraVector {
    fn add_assign(&mut self, o: AlgebraVector) {
        *self = *self + o;
    }
}

impl Sub for AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, o: AlgebraVector) -> AlgebraVector {
        AlgebraVector([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> AlgebraVector {
        AlgebraVector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for AlgebraVector {
    type Output = AlgebraVector;
    fn mul(self, s: f64) -> AlgebraVector {
        AlgebraVector([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}
