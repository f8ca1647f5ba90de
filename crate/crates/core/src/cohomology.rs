//! Group cohomology `H*(π, g_φ)` of a surface group with adjoint
//! coefficients, in degrees 0, 1 and 2.
//!
//! Cochains of degree one are vectors in `ℝ^{6ℓ}` (values on the generators,
//! three coordinates each). They extend to words by the cocycle rule
//! `u(xy) = u(x) + Ad(φ(x)) u(y)`. Coboundaries are `u(x) = v − Ad(φ(x)) v`.
//!
//! The degree-one pairing is the cup product, with coefficients contracted
//! by the invariant form, evaluated on the fundamental cycle of the
//! one-relator presentation
//!
//! ```text
//! c = Σ_k [w_{k-1} | y_k] − Σ_i [x_i | x_i⁻¹]
//! ```
//!
//! where `r = y_1 ··· y_N` and `w_k = y_1 ··· y_k`. With the bracket in place of
//! the form the same evaluation gives `Θ_φ(u) = ½[u, u]`, reported through
//! `H² ≅ (H⁰)*` as a vector of `H⁰ ⊆ su(2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, GroupElement};
use crate::linalg::{column_space, complement_within, DimensionCertificate, RealMatrix};
use crate::words::{letter_image, orbit_type, relator_derivative, Representation, StratumLabel};

/// Residual above which a representation is rejected.
pub const MAX_RESIDUAL: f64 = 1e-8;

/// Relative singular-value threshold for every dimension in this module.
pub const COHOMOLOGY_TOL: f64 = 1e-8;

/// The operators built here are sums of rotations; this floor keeps exact
/// zeros with round-off from counting as rank.
const OPERATOR_SCALE: f64 = 1.0;

fn check_residual(rep: &Representation) -> Result<()> {
    let r = rep.clone().refresh()?.residual;
    if r > MAX_RESIDUAL || !r.is_finite() {
        return Err(Error::Residual {
            residual: r,
            limit: MAX_RESIDUAL,
        });
    }
    Ok(())
}

fn block(u: &[f64], i: usize) -> AlgebraVector {
    AlgebraVector([u[3 * i], u[3 * i + 1], u[3 * i + 2]])
}

/// Stacked `(Ad(φ(x_i)) − 1)`, a `6ℓ × 3` matrix.
fn invariance_operator(rep: &Representation) -> RealMatrix {
    let n = rep.images.len();
    let mut m = RealMatrix::zeros(3 * n, 3);
    for (i, g) in rep.images.iter().enumerate() {
        let ad = g.adjoint_matrix();
        for r in 0..3 {
            for c in 0..3 {
                let id = if r == c { 1.0 } else { 0.0 };
                m.set(3 * i + r, c, ad[r][c] - id);
            }
        }
    }
    m
}

/// `H⁰`: vectors fixed by every `Ad(φ(x_i))`, orthonormal columns.
pub fn h0_space(rep: &Representation) -> Result<RealMatrix> {
    check_residual(rep)?;
    Ok(invariance_operator(rep)
        .rank_report_scaled(COHOMOLOGY_TOL, OPERATOR_SCALE)?
        .kernel())
}

/// `Z¹ = ker dr_φ`, orthonormal columns in `ℝ^{6ℓ}`.
pub fn cocycles(rep: &Representation) -> Result<RealMatrix> {
    check_residual(rep)?;
    Ok(relator_derivative(rep)
        .rank_report_scaled(COHOMOLOGY_TOL, OPERATOR_SCALE)?
        .kernel())
}

/// `B¹`, the image of `v ↦ (v − Ad(φ(x_i)) v)_i`, orthonormal columns.
pub fn coboundaries(rep: &Representation) -> Result<RealMatrix> {
    check_residual(rep)?;
    let (b, _) = column_space(&invariance_operator(rep), COHOMOLOGY_TOL, OPERATOR_SCALE)?;
    Ok(b)
}

/// Coboundary of `v`: `(v − Ad(φ(x_i)) v)_i`.
pub fn coboundary_of(rep: &Representation, v: AlgebraVector) -> Vec<f64> {
    let mut out = Vec::with_capacity(3 * rep.images.len());
    for g in &rep.images {
        out.extend((v - g.adjoint(v)).0);
    }
    out
}

/// `|dr_φ(u)|`: how far `u` is from satisfying the cocycle condition.
pub fn cocycle_defect(rep: &Representation, u: &[f64]) -> f64 {
    relator_derivative(rep)
        .apply(u)
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

fn require_cocycle(rep: &Representation, u: &[f64]) -> Result<()> {
    if u.len() != 3 * rep.images.len() {
        return Err(Error::Dimension {
            expected: 3 * rep.images.len(),
            got: u.len(),
        });
    }
    let scale = 1.0 + u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let defect = cocycle_defect(rep, u);
    if defect > 1e-8 * scale {
        return Err(Error::NotCocycle { defect });
    }
    Ok(())
}

/// Walks the relator, yielding for letter `k` the prefix image
/// `φ(w_{k-1})`, the cocycle value `u(w_{k-1})` and `v(y_k)`.
fn walk_relator<F: FnMut(GroupElement, AlgebraVector, AlgebraVector)>(
    rep: &Representation,
    u: &[f64],
    v: &[f64],
    mut visit: F,
) {
    let pres = rep.presentation();
    let mut prefix = GroupElement::IDENTITY;
    let mut u_prefix = AlgebraVector::ZERO;
    for &l in pres.relator() {
        let g = rep.images[l.generator];
        let letter_value = |w: &[f64]| {
            let x = block(w, l.generator);
            if l.exponent > 0 {
                x
            } else {
                -g.inverse().adjoint(x)
            }
        };
        let u_letter = letter_value(u);
        let v_letter = letter_value(v);
        visit(prefix, u_prefix, v_letter);
        u_prefix += prefix.adjoint(u_letter);
        prefix = prefix * letter_image(&rep.images, l);
    }
}

/// Cup-product pairing of two 1-cocycles on the fundamental class.
pub fn symplectic_pairing(rep: &Representation, u: &[f64], v: &[f64]) -> Result<f64> {
    require_cocycle(rep, u)?;
    require_cocycle(rep, v)?;
    Ok(pairing_unchecked(rep, u, v))
}

fn pairing_unchecked(rep: &Representation, u: &[f64], v: &[f64]) -> f64 {
    let mut total = 0.0;
    walk_relator(rep, u, v, |prefix, u_prefix, v_letter| {
        total += u_prefix.form(prefix.adjoint(v_letter));
    });
    // − Σ_i [x_i | x_i⁻¹] contributes + Σ_i ⟨u(x_i), v(x_i)⟩
    for i in 0..rep.images.len() {
        total += block(u, i).form(block(v, i));
    }
    total
}

/// Unprojected bracket cup-square `½ Σ_k [u(w_{k-1}), Ad(w_{k-1}) u(y_k)]`.
fn bracket_square(rep: &Representation, u: &[f64]) -> AlgebraVector {
    let mut total = AlgebraVector::ZERO;
    walk_relator(rep, u, u, |prefix, u_prefix, u_letter| {
        total += u_prefix.bracket(prefix.adjoint(u_letter));
    });
    // the [x_i | x_i⁻¹] terms are brackets of a vector with itself
    total * 0.5
}

/// `Θ_φ(u) = ½[u, u]_φ` as the vector of `H⁰` representing the functional
/// `ξ ↦ ⟨½[u ∪ u], ξ⟩` under the invariant form.
pub fn theta(rep: &Representation, u: &[f64]) -> Result<AlgebraVector> {
    require_cocycle(rep, u)?;
    let h0 = h0_space(rep)?;
    Ok(theta_with(rep, &h0, u))
}

fn theta_with(rep: &Representation, h0: &RealMatrix, u: &[f64]) -> AlgebraVector {
    let t = bracket_square(rep, u);
    let mut out = AlgebraVector::ZERO;
    for j in 0..h0.cols() {
        let xi = AlgebraVector([h0.get(0, j), h0.get(1, j), h0.get(2, j)]);
        out += xi * t.form(xi);
    }
    out
}

/// Kernel and image of `λ_φ: H¹ → T_[φ] Rep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaAnalysis {
    pub kernel: usize,
    pub image: usize,
    pub isomorphism: bool,
}

/// Everything computed at one representation.
#[derive(Clone, Debug)]
pub struct CohomologyData {
    pub genus: usize,
    pub stratum: StratumLabel,
    pub h0_dim: usize,
    pub h1_dim: usize,
    pub h2_dim: usize,
    pub h0_basis: RealMatrix,
    pub z1_basis: RealMatrix,
    pub b1_basis: RealMatrix,
    pub h1_basis: RealMatrix,
    pub pairing: PairingMatrix,
    pub lambda: LambdaAnalysis,
    /// Worst singular-value gap among the rank decisions made.
    pub certificates: Vec<DimensionCertificate>,
}

/// Matrix of the pairing in the `H¹` basis.
#[derive(Clone, Debug)]
pub struct PairingMatrix {
    pub matrix: RealMatrix,
    pub rank: usize,
    pub skew_defect: f64,
}

impl CohomologyData {
    pub fn z1_dim(&self) -> usize {
        self.z1_basis.cols()
    }

    pub fn b1_dim(&self) -> usize {
        self.b1_basis.cols()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.h0_dim as i64 - self.h1_dim as i64 + self.h2_dim as i64
    }

    /// `log10` of the smallest singular-value gap among the rank decisions.
    pub fn min_gap_log10(&self) -> f64 {
        self.certificates
            .iter()
            .map(|c| c.gap_log10)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "genus": self.genus,
            "stratum": self.stratum.as_str(),
            "h0": self.h0_dim,
            "h1": self.h1_dim,
            "h2": self.h2_dim,
            "pairing_rank": self.pairing.rank,
            "lambda": {
                "kernel": self.lambda.kernel,
                "image": self.lambda.image,
                "isomorphism": self.lambda.isomorphism,
            },
            "min_gap_log10": self.min_gap_log10(),
        })
    }
}

/// Cohomology, pairing and `λ_φ` at a representation.
pub fn cohomology(rep: &Representation) -> Result<CohomologyData> {
    check_residual(rep)?;
    let mut certificates = Vec::new();

    let inv = invariance_operator(rep);
    let inv_report = inv.rank_report_scaled(COHOMOLOGY_TOL, OPERATOR_SCALE)?;
    certificates.push(DimensionCertificate::from_gap(inv_report.rank, inv_report.gap()));
    let h0_basis = inv_report.kernel();
    let b1_full = inv_report.image();
    let b1_basis = RealMatrix::from_fn(inv.rows(), b1_full.cols(), |i, j| b1_full.get(i, j));

    let dr = relator_derivative(rep);
    let dr_report = dr.rank_report_scaled(COHOMOLOGY_TOL, OPERATOR_SCALE)?;
    certificates.push(DimensionCertificate::from_gap(dr_report.rank, dr_report.gap()));
    let z1_basis = dr_report.kernel();

    // B¹ ⊆ Z¹
    let proj = z1_basis.matmul(&z1_basis.transpose().matmul(&b1_basis));
    let defect = if b1_basis.cols() == 0 {
        0.0
    } else {
        let diff = RealMatrix::from_fn(proj.rows(), proj.cols(), |i, j| {
            proj.get(i, j) - b1_basis.get(i, j)
        });
        diff.max_abs()
    };
    if defect > 1e-8 {
        return Err(Error::Inclusion { defect });
    }

    let h1_basis = complement_within(&z1_basis, &b1_basis, COHOMOLOGY_TOL)?;
    let h0_dim = h0_basis.cols();
    let h1_dim = h1_basis.cols();
    // H² ≅ (H⁰)* through the pairing
    let h2_dim = h0_dim;

    let pairing = pairing_matrix(rep, &h1_basis)?;
    if let Some(c) = pairing_certificate(&pairing)? {
        certificates.push(c);
    }
    let lambda = lambda_with(rep, &h0_basis, &h1_basis, orbit_type(rep))?;

    Ok(CohomologyData {
        genus: rep.genus,
        stratum: orbit_type(rep),
        h0_dim,
        h1_dim,
        h2_dim,
        h0_basis,
        z1_basis,
        b1_basis,
        h1_basis,
        pairing,
        lambda,
        certificates,
    })
}

fn pairing_matrix(rep: &Representation, h1: &RealMatrix) -> Result<PairingMatrix> {
    let n = h1.cols();
    let cols = h1.columns();
    let mut m = RealMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            m.set(a, b, pairing_unchecked(rep, &cols[a], &cols[b]));
        }
    }
    let mut skew_defect: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            skew_defect = skew_defect.max((m.get(a, b) + m.get(b, a)).abs());
        }
    }
    let rank = if n == 0 {
        0
    } else {
        m.rank_report_scaled(COHOMOLOGY_TOL, OPERATOR_SCALE)?.rank
    };
    Ok(PairingMatrix {
        matrix: m,
        rank,
        skew_defect,
    })
}

fn pairing_certificate(p: &PairingMatrix) -> Result<Option<DimensionCertificate>> {
    if p.matrix.cols() == 0 {
        return Ok(None);
    }
    let r = p.matrix.rank_report_scaled(COHOMOLOGY_TOL, OPERATOR_SCALE)?;
    Ok(Some(DimensionCertificate::from_gap(r.rank, r.gap())))
}

/// Infinitesimal action `u ↦ [ξ, u]` (blockwise) of `ξ ∈ H⁰` on cochains.
pub fn infinitesimal_action(xi: AlgebraVector, u: &[f64]) -> Vec<f64> {
    u.chunks(3)
        .flat_map(|c| xi.bracket(AlgebraVector([c[0], c[1], c[2]])).0)
        .collect()
}

/// Group action `u ↦ Ad(g) u` (blockwise) on cochains.
pub fn group_action(g: GroupElement, u: &[f64]) -> Vec<f64> {
    u.chunks(3)
        .flat_map(|c| g.adjoint(AlgebraVector([c[0], c[1], c[2]])).0)
        .collect()
}

/// Kernel and image of `λ_φ`.
///
/// The kernel is spanned by `x·w − w` for `x` in the stabilizer, which is the
/// orthogonal complement of the stabilizer-fixed subspace of `H¹`. The
/// stabilizers that occur (center, maximal torus, SU(2)) act through their
/// identity components, so the fixed subspace is the common kernel of the
/// infinitesimal actions of a basis of `H⁰`.
pub fn lambda_analysis(rep: &Representation) -> Result<LambdaAnalysis> {
    let data = cohomology(rep)?;
    Ok(data.lambda)
}

fn lambda_with(
    _rep: &Representation,
    h0: &RealMatrix,
    h1: &RealMatrix,
    stratum: StratumLabel,
) -> Result<LambdaAnalysis> {
    let n = h1.cols();
    let fixed = if h0.cols() == 0 || n == 0 {
        n
    } else {
        let cols = h1.columns();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for j in 0..h0.cols() {
            let xi = AlgebraVector([h0.get(0, j), h0.get(1, j), h0.get(2, j)]);
            // matrix of ad_ξ in the H¹ basis
            let images: Vec<Vec<f64>> = cols.iter().map(|c| infinitesimal_action(xi, c)).collect();
            for a in 0..n {
                rows.push(
                    (0..n)
                        .map(|b| cols[a].iter().zip(&images[b]).map(|(x, y)| x * y).sum())
                        .collect(),
                );
            }
        }
        let stacked = RealMatrix::from_rows(&rows);
        n - stacked.rank_report_scaled(COHOMOLOGY_TOL, OPERATOR_SCALE)?.rank
    };
    let kernel = n - fixed;
    let image = n - kernel;
    let isomorphism = kernel == 0;
    debug_assert_eq!(isomorphism, stratum == StratumLabel::Z);
    Ok(LambdaAnalysis {
        kernel,
        image,
        isomorphism,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{central_representation, solve_flat};

    #[test]
    fn central_pairing_is_intersection_form() {
        let rep = central_representation(2, 0b0110);
        let u: Vec<f64> = (0..12).map(|k| (k as f64 * 0.37).sin()).collect();
        let v: Vec<f64> = (0..12).map(|k| (k as f64 * 0.91 + 0.2).cos()).collect();
        let mut want = 0.0;
        for i in 0..2 {
            let (a, b) = (2 * i, 2 * i + 1);
            want += block(&u, a).form(block(&v, b)) - block(&u, b).form(block(&v, a));
        }
        let got = symplectic_pairing(&rep, &u, &v).unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn central_theta_is_sum_of_brackets() {
        let rep = central_representation(3, 0);
        let u: Vec<f64> = (0..18).map(|k| (k as f64 * 1.3).sin()).collect();
        let mut want = AlgebraVector::ZERO;
        for i in 0..3 {
            want += block(&u, 2 * i).bracket(block(&u, 2 * i + 1));
        }
        let got = theta(&rep, &u).unwrap();
        assert!((got - want).norm() < 1e-12);
    }

    #[test]
    fn non_cocycle_rejected() {
        let rep = solve_flat(2, StratumLabel::Z, 1).unwrap();
        let mut u = vec![0.0; 12];
        u[0] = 1.0;
        assert!(matches!(
            symplectic_pairing(&rep, &u, &u),
            Err(Error::NotCocycle { .. })
        ));
    }

    #[test]
    fn large_residual_rejected() {
        let mut images = vec![GroupElement::IDENTITY; 4];
        images[0] = GroupElement::exp(AlgebraVector::basis(0) * 0.4);
        images[1] = GroupElement::exp(AlgebraVector::basis(1) * 0.4);
        let rep = Representation::new(2, images).unwrap();
        assert!(matches!(cohomology(&rep), Err(Error::Residual { .. })));
    }

    #[test]
    fn genus_two_dimensions() {
        let z = cohomology(&solve_flat(2, StratumLabel::Z, 42).unwrap()).unwrap();
        assert_eq!((z.h0_dim, z.h1_dim, z.h2_dim), (0, 6, 0));
        assert_eq!((z.z1_dim(), z.b1_dim()), (9, 3));
        let t = cohomology(&solve_flat(2, StratumLabel::T, 42).unwrap()).unwrap();
        assert_eq!((t.h0_dim, t.h1_dim, t.h2_dim), (1, 8, 1));
        assert_eq!((t.z1_dim(), t.b1_dim()), (10, 2));
        let g = cohomology(&solve_flat(2, StratumLabel::G, 42).unwrap()).unwrap();
        assert_eq!((g.h0_dim, g.h1_dim, g.h2_dim), (3, 12, 3));
        assert_eq!((g.z1_dim(), g.b1_dim()), (12, 0));
    }
}
