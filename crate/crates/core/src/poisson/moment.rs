use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::RMatrix;
use crate::poly::{int, rat, Rational, RationalPolynomial};

use super::PhaseSpace;

/// A square complex matrix stored as real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    pub re: RMatrix,
    pub im: RMatrix,
}

impl ComplexMatrix {
    pub fn new(re: RMatrix, im: RMatrix) -> Result<Self> {
        let n = re.len();
        if im.len() != n || re.iter().chain(&im).any(|r| r.len() != n) {
            return Err(Error::Invalid("complex matrix parts must be square and equal size".into()));
        }
        Ok(ComplexMatrix { re, im })
    }

    pub fn size(&self) -> usize {
        self.re.len()
    }

    /// `ξ* = −ξ`: real part antisymmetric, imaginary part symmetric.
    pub fn is_skew_hermitian(&self) -> bool {
        let n = self.size();
        (0..n).all(|j| {
            (0..n).all(|k| {
                self.re[j][k] == -self.re[k][j].clone() && self.im[j][k] == self.im[k][j]
            })
        })
    }
}

/// The momentum function `(i/2) z̄ᵀ ξ z` of a skew-Hermitian `ξ` acting
/// on `z_k = q_k + i p_k`, one complex coordinate per canonical pair.
///
/// It generates the linear flow of `ξ` in the sense that `{F, f} = df(ξz)`
/// for every linear `f`.
pub fn unitary_moment(space: &PhaseSpace, xi: &ComplexMatrix) -> Result<RationalPolynomial> {
    if xi.size() != space.pairs() {
        return Err(Error::Dimension {
            expected: space.pairs(),
            got: xi.size(),
        });
    }
    if !xi.is_skew_hermitian() {
        return Err(Error::NotSkewHermitian);
    }
    let n = xi.size();
    // With ξ = A + iB the value is −½ Σ A_jk (q_j p_k − p_j q_k) − ½ Σ B_jk (q_j q_k + p_j p_k).
    let half = rat(-1, 2);
    let mut out = space.zero();
    for j in 0..n {
        for k in 0..n {
            let (a, b) = (&xi.re[j][k], &xi.im[j][k]);
            if !a.is_zero() {
                let t = &(&space.q(j) * &space.p(k)) - &(&space.p(j) * &space.q(k));
                out = &out + &t.scale(&(a * &half));
            }
            if !b.is_zero() {
                let t = &(&space.q(j) * &space.q(k)) + &(&space.p(j) * &space.p(k));
                out = &out + &t.scale(&(b * &half));
            }
        }
    }
    Ok(out)
}

/// The 4×4 symplectic form `[[0, I], [−I, 0]]` on `(q1, q2, p1, p2)`.
pub fn symplectic_j() -> RMatrix {
    let mut j = vec![vec![Rational::zero(); 4]; 4];
    j[0][2] = int(1);
    j[1][3] = int(1);
    j[2][0] = int(-1);
    j[3][1] = int(-1);
    j
}

/// Momentum of the `Sp(4)` action on two particles in 3-space.
///
/// The configuration is `[q1, q2, p1, p2]` flattened (12 entries). With
/// `Z` the 3×4 matrix of these columns and `G = ZᵀZ`, the value is
/// `M = G J`, which lies in `sp(4)` and satisfies
/// `½ ω(ξZ, Z) = −½ tr(ξ M)` for every `ξ ∈ sp(4)`.
pub fn sp4_moment(config: &[Rational]) -> Result<RMatrix> {
    if config.len() != 12 {
        return Err(Error::Dimension {
            expected: 12,
            got: config.len(),
        });
    }
    let col = |a: usize| &config[3 * a..3 * a + 3];
    let mut g = vec![vec![Rational::zero(); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            g[a][b] = col(a).iter().zip(col(b)).map(|(x, y)| x * y).sum();
        }
    }
    Ok(matmul(&g, &symplectic_j()))
}

/// Floating point wrapper around [`sp4_moment`].
pub fn sp4_moment_f64(config: &[f64; 12]) -> [[f64; 4]; 4] {
    let col = |a: usize| &config[3 * a..3 * a + 3];
    let mut g = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            g[a][b] = col(a).iter().zip(col(b)).map(|(x, y)| x * y).sum();
        }
    }
    let mut m = [[0.0; 4]; 4];
    for a in 0..4 {
        m[a][2] = g[a][0];
        m[a][3] = g[a][1];
        m[a][0] = -g[a][2];
        m[a][1] = -g[a][3];
    }
    m
}

pub fn matmul(a: &RMatrix, b: &RMatrix) -> RMatrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &RMatrix) -> RMatrix {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Whether `Xᵀ J + J X = 0`.
pub fn is_in_sp4(x: &RMatrix) -> bool {
    let j = symplectic_j();
    let l = matmul(&transpose(x), &j);
    let r = matmul(&j, x);
    l.iter().zip(&r).all(|(a, b)| a.iter().zip(b).all(|(u, v)| (u + v).is_zero()))
}

/// `½ ω(ξZ, Z)` for a configuration laid out as in [`sp4_moment`]:
/// `ω(X, Y) = Σ_rows xᵀ J y`.
pub fn sp4_pairing(xi: &RMatrix, config: &[Rational]) -> Rational {
    let j = symplectic_j();
    let mut total = Rational::zero();
    for axis in 0..3 {
        let z: Vec<Rational> = (0..4).map(|a| config[3 * a + axis].clone()).collect();
        // row of ξZ for this axis: (ξ z)ᵀ since Z rows transform by z ↦ ξ z
        let xz: Vec<Rational> = (0..4).map(|a| (0..4).map(|b| &xi[a][b] * &z[b]).sum()).collect();
        for a in 0..4 {
            for b in 0..4 {
                if !j[a][b].is_zero() {
                    total += &xz[a] * &j[a][b] * &z[b];
                }
            }
        }
    }
    total / int(2)
}

pub fn trace(a: &RMatrix) -> Rational {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.random_range(-6i64..=6).into(), rng.random_range(1i64..=4).into())
}

fn cross3(a: &[Rational], b: &[Rational]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Rational configurations `[q1, q2, p1, p2]` in 3-space with
/// `q1 × p1 + q2 × p2 = 0`, exactly.
///
/// `q1, p1` are random; with `L = −q1 × p1`, `q2 = L × r` for random `r`
/// (so `q2 ⊥ L`) and `p2 = (L × q2)/|q2|²`, which gives `q2 × p2 = L`.
pub fn zero_momentum_configs(seed: u64, count: usize) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q1: Vec<Rational> = (0..3).map(|_| small_rational(&mut rng)).collect();
        let p1: Vec<Rational> = (0..3).map(|_| small_rational(&mut rng)).collect();
        let r: Vec<Rational> = (0..3).map(|_| small_rational(&mut rng)).collect();
        let l: Vec<Rational> = cross3(&q1, &p1).into_iter().map(|x| -x).collect();
        let q2 = cross3(&l, &r);
        let n2: Rational = q2.iter().map(|x| x * x).sum();
        if n2.is_zero() {
            continue;
        }
        let p2: Vec<Rational> = cross3(&l, &q2).into_iter().map(|x| x / &n2).collect();
        out.push(q1.into_iter().chain(q2).chain(p1).chain(p2).collect());
    }
    out
}

/// Rational configurations with independent random entries.
pub fn generic_configs(seed: u64, count: usize) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..12).map(|_| small_rational(&mut rng)).collect())
        .collect()
}

/// Total angular momentum of a configuration laid out as in [`sp4_moment`].
pub fn angular_momentum(config: &[Rational]) -> [Rational; 3] {
    let a = cross3(&config[0..3], &config[6..9]);
    let b = cross3(&config[3..6], &config[9..12]);
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

#[cfg(test)]
mod tests {
    use super::super::canonical_bracket;
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rotation_generator_is_angular_momentum() {
        let space = PhaseSpace::new(1, 2).unwrap();
        let xi = ComplexMatrix::new(vec![q(&[0, -1]), q(&[1, 0])], vec![q(&[0, 0]), q(&[0, 0])]).unwrap();
        let f = unitary_moment(&space, &xi).unwrap();
        let expected = &(&space.q(0) * &space.p(1)) - &(&space.q(1) * &space.p(0));
        assert_eq!(f, expected);
    }

    #[test]
    fn moment_generates_linear_flow() {
        let space = PhaseSpace::new(1, 2).unwrap();
        let xi = ComplexMatrix::new(
            vec![q(&[0, 2]), q(&[-2, 0])],
            vec![q(&[1, 3]), q(&[3, -5])],
        )
        .unwrap();
        let f = unitary_moment(&space, &xi).unwrap();
        // ξz for z = q + ip: real part A q − B p, imaginary part B q + A p
        for k in 0..2 {
            let mut dq = space.zero();
            let mut dp = space.zero();
            for l in 0..2 {
                dq = &dq + &(&space.q(l).scale(&xi.re[k][l]) - &space.p(l).scale(&xi.im[k][l]));
                dp = &dp + &(&space.q(l).scale(&xi.im[k][l]) + &space.p(l).scale(&xi.re[k][l]));
            }
            assert_eq!(canonical_bracket(&space, &f, &space.q(k)).unwrap(), dq);
            assert_eq!(canonical_bracket(&space, &f, &space.p(k)).unwrap(), dp);
        }
    }

    #[test]
    fn rejects_non_skew_hermitian() {
        let space = PhaseSpace::new(1, 2).unwrap();
        let xi = ComplexMatrix::new(vec![q(&[1, 0]), q(&[0, 0])], vec![q(&[0, 0]), q(&[0, 0])]).unwrap();
        assert!(matches!(unitary_moment(&space, &xi), Err(Error::NotSkewHermitian)));
    }

    #[test]
    fn sp4_moment_properties() {
        let config = q(&[1, 2, -1, 0, 3, 1, 2, -2, 5, 1, 1, 4]);
        let m = sp4_moment(&config).unwrap();
        assert!(is_in_sp4(&m));
        let xi = vec![q(&[1, 2, 3, -1]), q(&[0, -2, -1, 4]), q(&[5, 1, -1, 0]), q(&[1, -1, -2, 2])];
        assert!(is_in_sp4(&xi));
        assert_eq!(sp4_pairing(&xi, &config), -trace(&matmul(&xi, &m)) / int(2));
    }

    #[test]
    fn sampled_zero_momentum_is_nilpotent() {
        for c in zero_momentum_configs(1, 20) {
            assert!(angular_momentum(&c).iter().all(Zero::is_zero));
            let m = sp4_moment(&c).unwrap();
            assert!(is_in_sp4(&m));
            assert!(matmul(&m, &m).iter().flatten().all(Zero::is_zero));
        }
    }

    #[test]
    fn sp4_moment_of_orthonormal_positions_is_the_standard_nilpotent() {
        let config = q(&[1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0]);
        let m = sp4_moment(&config).unwrap();
        let mut e = vec![vec![Rational::zero(); 4]; 4];
        e[0][2] = int(1);
        e[1][3] = int(1);
        assert_eq!(m, e);
        assert!(matmul(&m, &m).iter().flatten().all(Zero::is_zero));
    }
}
