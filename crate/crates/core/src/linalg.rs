//! Dense real matrices with SVD-based rank decisions.
//!
//! Every rank is decided by a singular-value cut `σ > tol · scale`, where
//! `scale` is the largest singular value (optionally floored by a known
//! operator scale). [`RankReport`] keeps the singular values on both sides
//! of the cut so integer dimensions can be certified by their gap.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative singular-value threshold.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix(DMatrix<f64>);

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        RealMatrix(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        RealMatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Row-major construction.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        RealMatrix::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn from_columns(dim: usize, cols: &[Vec<f64>]) -> Self {
        RealMatrix::from_fn(dim, cols.len(), |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] = v;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols()).map(|j| self.column(j)).collect()
    }

    pub fn as_nalgebra(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<f64> {
        self.0
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix(self.0.transpose())
    }

    pub fn matmul(&self, other: &RealMatrix) -> RealMatrix {
        RealMatrix(&self.0 * &other.0)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.cols(), other.cols());
        let r = self.rows();
        RealMatrix::from_fn(r + other.rows(), self.cols(), |i, j| {
            if i < r {
                self.0[(i, j)]
            } else {
                other.0[(i - r, j)]
            }
        })
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Singular values in descending order, padded with zeros to `cols`.
    pub fn singular_values(&self) -> Vec<f64> {
        let (_, s, _) = self.full_svd();
        s
    }

    /// SVD with a full right basis: returns (U columns, σ descending, V
    /// columns), where V is `cols × cols`.
    fn full_svd(&self) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
        let (r, c) = (self.rows(), self.cols());
        // pad with zero rows so nalgebra returns every right singular vector
        let padded = if r < c {
            DMatrix::from_fn(c, c, |i, j| if i < r { self.0[(i, j)] } else { 0.0 })
        } else {
            self.0.clone()
        };
        let svd = padded.svd(true, true);
        let u = svd.u.expect("requested U");
        let vt = svd.v_t.expect("requested V^T");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| {
            svd.singular_values[b]
                .partial_cmp(&svd.singular_values[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let sigma: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
        let u_sorted = DMatrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]);
        let v_sorted = DMatrix::from_fn(c, order.len(), |i, j| vt[(order[j], i)]);
        let mut s = sigma;
        s.resize(c.max(s.len()), 0.0);
        (u_sorted, s, v_sorted)
    }

    /// Rank decision with the relative threshold `tol · σ_max`.
    pub fn rank_report(&self, tol: f64) -> Result<RankReport> {
        self.rank_report_scaled(tol, 0.0)
    }

    /// Rank decision with threshold `tol · max(σ_max, scale_floor)`.
    ///
    /// A positive floor keeps round-off noise in an operator that is
    /// exactly zero in exact arithmetic from being counted as rank.
    pub fn rank_report_scaled(&self, tol: f64, scale_floor: f64) -> Result<RankReport> {
        if !(tol > 0.0) {
            return Err(Error::BadTolerance(tol));
        }
        if self.rows() == 0 || self.cols() == 0 {
            return Err(Error::EmptyMatrix {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let (u, sigma, v) = self.full_svd();
        let smax = sigma.first().copied().unwrap_or(0.0);
        let threshold = tol * smax.max(scale_floor);
        let rank = sigma.iter().filter(|&&s| s > threshold && s > 0.0).count();
        Ok(RankReport {
            rank,
            threshold,
            scale: smax.max(scale_floor),
            singular_values: sigma,
            left: u,
            right: v,
        })
    }
}

/// Result of an SVD rank decision.
#[derive(Clone, Debug)]
pub struct RankReport {
    pub rank: usize,
    pub threshold: f64,
    /// Reference scale the threshold is relative to.
    pub scale: f64,
    /// Descending, length = number of columns.
    pub singular_values: Vec<f64>,
    left: DMatrix<f64>,
    right: DMatrix<f64>,
}

impl RankReport {
    /// Smallest singular value kept, largest dropped.
    pub fn cut(&self) -> (Option<f64>, Option<f64>) {
        let kept = self.rank.checked_sub(1).map(|k| self.singular_values[k]);
        let dropped = self.singular_values.get(self.rank).copied();
        (kept, dropped)
    }

    /// Ratio across the cut. Infinite when one side is empty or the
    /// dropped singular value is exactly zero.
    pub fn gap(&self) -> f64 {
        match self.cut() {
            (Some(k), Some(d)) if d > 0.0 => k / d,
            // nothing kept: the reference scale stands in for the kept side
            (None, Some(d)) if d > 0.0 => self.scale / d,
            _ => f64::INFINITY,
        }
    }

    /// Orthonormal kernel basis (columns).
    pub fn kernel(&self) -> RealMatrix {
        let n = self.right.nrows();
        let k = n - self.rank;
        RealMatrix::from_fn(n, k, |i, j| self.right[(i, self.rank + j)])
    }

    /// Orthonormal basis of the column space (columns).
    pub fn image(&self) -> RealMatrix {
        let m = self.left.nrows();
        RealMatrix::from_fn(m, self.rank, |i, j| self.left[(i, j)])
    }
}

/// Number of singular values above `tol · σ_max`.
pub fn numeric_rank(m: &RealMatrix, tol: f64) -> Result<usize> {
    Ok(m.rank_report(tol)?.rank)
}

/// Orthonormal basis of the numerical kernel, one vector per column.
pub fn kernel_basis(m: &RealMatrix, tol: f64) -> Result<RealMatrix> {
    Ok(m.rank_report(tol)?.kernel())
}

/// Orthonormal basis for the column span of `m`, trimmed to `dim` rows when
/// `m` was padded. Returns `(basis, report)`.
pub fn column_space(m: &RealMatrix, tol: f64, scale_floor: f64) -> Result<(RealMatrix, RankReport)> {
    let report = m.rank_report_scaled(tol, scale_floor)?;
    let img = report.image();
    let basis = RealMatrix::from_fn(m.rows(), img.cols(), |i, j| img.get(i, j));
    Ok((basis, report))
}

/// Orthonormal basis of the orthogonal complement of `sub` inside `ambient`,
/// both given by orthonormal columns with `span(sub) ⊆ span(ambient)`.
pub fn complement_within(ambient: &RealMatrix, sub: &RealMatrix, tol: f64) -> Result<RealMatrix> {
    if sub.cols() == 0 {
        return Ok(ambient.clone());
    }
    if ambient.cols() == 0 {
        return Ok(ambient.clone());
    }
    // coordinates of sub inside ambient; complement = kernel of their transpose
    let coords = ambient.transpose().matmul(sub); // a × s
    let report = coords.transpose().rank_report_scaled(tol, 1.0)?;
    let k = report.kernel(); // a × (a - rank)
    Ok(ambient.matmul(&k))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct DimensionCertificate {
    pub dim: usize,
    /// `log10` of the singular-value ratio across the cut, capped at 300.
    pub gap_log10: f64,
}

impl DimensionCertificate {
    pub fn from_gap(dim: usize, gap: f64) -> Self {
        let g = if gap.is_finite() { gap.log10().min(300.0) } else { 300.0 };
        DimensionCertificate { dim, gap_log10: g }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_matrix() {
        let m = RealMatrix::zeros(3, 6);
        assert_eq!(numeric_rank(&m, 1e-8).unwrap(), 0);
        assert_eq!(kernel_basis(&m, 1e-8).unwrap().cols(), 6);
    }

    #[test]
    fn identity_full_rank() {
        assert_eq!(numeric_rank(&RealMatrix::identity(4), 1e-8).unwrap(), 4);
    }

    #[test]
    fn empty_rejected() {
        let m = RealMatrix::zeros(0, 3);
        assert!(matches!(numeric_rank(&m, 1e-8), Err(Error::EmptyMatrix { .. })));
        assert!(matches!(
            numeric_rank(&RealMatrix::identity(2), 0.0),
            Err(Error::BadTolerance(_))
        ));
    }

    #[test]
    fn constructed_rank_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = RealMatrix::from_fn(6, 2, |_, _| rng.random::<f64>() - 0.5);
            let b = RealMatrix::from_fn(2, 6, |_, _| rng.random::<f64>() - 0.5);
            let m = a.matmul(&b);
            let rep = m.rank_report(1e-8).unwrap();
            assert_eq!(rep.rank, 2);
            assert!(rep.gap() > 1e3);
            let k = rep.kernel();
            assert_eq!(k.cols(), 4);
            let ktk = k.transpose().matmul(&k);
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ktk.get(i, j) - want).abs() < 1e-12);
                }
            }
            assert!(m.matmul(&k).norm() <= 10.0 * 1e-8);
        }
    }

    #[test]
    fn wide_matrix_kernel_is_complete() {
        // 3 × 6 with rank 3: kernel must be 3-dimensional
        let m = RealMatrix::from_fn(3, 6, |i, j| if j == i || j == i + 3 { 1.0 } else { 0.0 });
        let rep = m.rank_report(1e-8).unwrap();
        assert_eq!(rep.rank, 3);
        assert_eq!(rep.kernel().cols(), 3);
        assert!(m.matmul(&rep.kernel()).norm() < 1e-12);
    }

    #[test]
    fn complement_inside_subspace() {
        let ambient = RealMatrix::identity(4);
        let sub = RealMatrix::from_columns(4, &[vec![1.0, 0.0, 0.0, 0.0]]);
        let c = complement_within(&ambient, &sub, 1e-8).unwrap();
        assert_eq!(c.cols(), 3);
        assert!(sub.transpose().matmul(&c).norm() < 1e-12);
    }
}
