//! Linear algebra over ℚ: elimination, span membership and the inertia of
//! symmetric forms.

use num_traits::{Signed, Zero};

use crate::poly::Rational;

pub type RMatrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns the pivot columns. Pivots are
/// only taken among the first `pivot_cols` columns.
pub fn rref(m: &mut RMatrix, pivot_cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RMatrix) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut work = m.clone();
    rref(&mut work, cols).len()
}

/// Expresses each target as a combination of `basis` vectors.
///
/// All vectors have the same length. Returns, per target, `Some(coeffs)` or
/// `None` when the target is outside the span. The basis must be linearly
/// independent for the coefficients to be unique.
pub fn express_in_span(basis: &[Vec<Rational>], targets: &[Vec<Rational>]) -> Vec<Option<Vec<Rational>>> {
    let k = basis.len();
    let len = basis
        .first()
        .or(targets.first())
        .map_or(0, Vec::len);
    // augmented rows: [basis coords | target coords]
    let mut m: RMatrix = (0..len)
        .map(|i| {
            basis
                .iter()
                .map(|b| b[i].clone())
                .chain(targets.iter().map(|t| t[i].clone()))
                .collect()
        })
        .collect();
    let pivots = rref(&mut m, k);
    (0..targets.len())
        .map(|t| {
            let col = k + t;
            // any nonzero entry in a non-pivot row means the target is outside
            if m[pivots.len()..].iter().any(|row| !row[col].is_zero()) {
                return None;
            }
            let mut coeffs = vec![Rational::zero(); k];
            for (r, &p) in pivots.iter().enumerate() {
                coeffs[p] = m[r][col].clone();
            }
            Some(coeffs)
        })
        .collect()
}

/// Signature `(positive, negative, zero)` of a symmetric rational matrix,
/// by congruence diagonalization.
pub fn inertia(sym: &RMatrix) -> (usize, usize, usize) {
    let n = sym.len();
    let mut a = sym.clone();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // choose a nonzero diagonal pivot, or manufacture one
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                // row/col i += row/col j gives a_ii = 2 a_ij
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        let d = a[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let prow = a[p].clone();
        for &i in &active {
            if i == p || prow[i].is_zero() {
                continue;
            }
            let f = &prow[i] / &d;
            for &k in &active {
                let v = &f * &prow[k];
                a[i][k] -= v;
            }
        }
        active.retain(|&i| i != p);
        for &i in &active {
            a[i][p] = Rational::zero();
            a[p][i] = Rational::zero();
        }
    }
    (pos, neg, n - pos - neg)
}
