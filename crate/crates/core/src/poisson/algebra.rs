use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{express_in_span, inertia, RMatrix};
use crate::poly::{Monomial, Rational, RationalPolynomial, VarSet};

use super::{canonical_bracket, InvariantSet};

fn coordinates(polys: &[&RationalPolynomial]) -> (BTreeMap<Monomial, usize>, Vec<Vec<Rational>>) {
    let mut index = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let vectors = polys
        .iter()
        .map(|p| {
            let mut v = vec![Rational::zero(); index.len()];
            for (m, c) in p.terms() {
                v[index[m]] = c.clone();
            }
            v
        })
        .collect();
    (index, vectors)
}

/// Writes every table entry as a linear combination of the generators, or
/// returns `None` if some entry leaves their span.
pub(crate) fn express_linearly(
    generators: &[RationalPolynomial],
    table: &[Vec<RationalPolynomial>],
    vars: &Arc<VarSet>,
) -> Option<Vec<Vec<RationalPolynomial>>> {
    let n = generators.len();
    let mut all: Vec<&RationalPolynomial> = generators.iter().collect();
    all.extend(table.iter().flatten());
    let (_, vectors) = coordinates(&all);
    let (basis, targets) = vectors.split_at(n);
    let solved = express_in_span(basis, targets);
    let mut out = vec![vec![RationalPolynomial::zero(vars); n]; n];
    for (k, coeffs) in solved.into_iter().enumerate() {
        let coeffs = coeffs?;
        let terms = coeffs.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(g, c)| {
            let mut m = vec![0; n];
            m[g] = 1;
            (m, c)
        });
        out[k / n][k % n] = RationalPolynomial::from_terms(vars, terms);
    }
    Some(out)
}

/// Structure constants `[e_i, e_j] = Σ_k c[i][j][k] e_k` of a finite
/// dimensional Lie algebra.
#[derive(Clone, Debug, Serialize)]
pub struct StructureConstants {
    pub names: Vec<String>,
    #[serde(skip)]
    pub constants: Vec<Vec<Vec<Rational>>>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Whether the Jacobi identity holds exactly on every basis triple.
    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim();
        let c = &self.constants;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for m in 0..n {
                        let mut s = Rational::zero();
                        for l in 0..n {
                            s += &c[i][j][l] * &c[l][k][m];
                            s += &c[j][k][l] * &c[l][i][m];
                            s += &c[k][i][l] * &c[l][j][m];
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `K_ab = tr(ad_a ∘ ad_b)`.
    pub fn killing_form(&self) -> RMatrix {
        let n = self.dim();
        let c = &self.constants;
        let mut k = vec![vec![Rational::zero(); n]; n];
        for a in 0..n {
            for b in a..n {
                let mut s = Rational::zero();
                for x in 0..n {
                    for y in 0..n {
                        if !c[a][x][y].is_zero() && !c[b][y][x].is_zero() {
                            s += &c[a][x][y] * &c[b][y][x];
                        }
                    }
                }
                k[b][a] = s.clone();
                k[a][b] = s;
            }
        }
        k
    }

    /// `(positive, negative, zero)` counts of the Killing form.
    pub fn killing_signature(&self) -> (usize, usize, usize) {
        inertia(&self.killing_form())
    }
}

/// Closes a set of homogeneous quadratic generators under the canonical
/// bracket and returns the resulting structure constants.
///
/// Fails with [`Error::NonClosure`] naming the first pair whose bracket
/// leaves the linear span of the generators.
pub fn closure_to_lie_algebra(set: &InvariantSet) -> Result<StructureConstants> {
    if let Some(bad) = set.generators.iter().position(|g| !g.is_homogeneous(2)) {
        return Err(Error::Invalid(format!(
            "generator {} is not a homogeneous quadratic",
            set.names[bad]
        )));
    }
    let n = set.len();
    let mut brackets = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            brackets.push(canonical_bracket(&set.space, &set.generators[i], &set.generators[j])?);
        }
    }
    let mut all: Vec<&RationalPolynomial> = set.generators.iter().collect();
    all.extend(brackets.iter());
    let (_, vectors) = coordinates(&all);
    let (basis, targets) = vectors.split_at(n);
    let solved = express_in_span(basis, targets);
    let mut constants = vec![vec![vec![Rational::zero(); n]; n]; n];
    for (k, coeffs) in solved.into_iter().enumerate() {
        let (i, j) = (k / n, k % n);
        constants[i][j] = coeffs.ok_or_else(|| Error::NonClosure {
            left: set.names[i].clone(),
            right: set.names[j].clone(),
        })?;
    }
    Ok(StructureConstants {
        names: set.names.clone(),
        constants,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{planar_invariants, spatial_invariants, PhaseSpace, SymmetryGroup};
    use super::*;
    use crate::poly::int;

    #[test]
    fn cone_is_sl2() {
        let set = planar_invariants().subset(&["x1", "x2", "rho"]).unwrap();
        let sc = closure_to_lie_algebra(&set).unwrap();
        assert!(sc.satisfies_jacobi());
        assert_eq!(sc.killing_signature(), (2, 1, 0));
    }

    #[test]
    fn spatial_two_particles_is_sp4() {
        let set = spatial_invariants(2).unwrap();
        let sc = closure_to_lie_algebra(&set).unwrap();
        assert!(sc.satisfies_jacobi());
        assert_eq!(sc.killing_signature(), (6, 4, 0));
    }

    #[test]
    fn cubic_does_not_close() {
        let space = PhaseSpace::new(1, 1).unwrap();
        let q = space.q(0);
        let p = space.p(0);
        let set = InvariantSet {
            group: SymmetryGroup::PlanarSO2,
            names: vec!["a".into(), "b".into()],
            generators: vec![q.pow(2), p.pow(2)],
            momentum: vec![],
            space: space.clone(),
        };
        // {q², p²} = −4qp is outside span{q², p²}
        match closure_to_lie_algebra(&set) {
            Err(Error::NonClosure { left, right }) => assert_eq!((left.as_str(), right.as_str()), ("a", "b")),
            other => panic!("expected non-closure, got {other:?}"),
        }
        let mut cubic = set.clone();
        cubic.generators[0] = q.pow(3).scale(&int(1));
        assert!(matches!(closure_to_lie_algebra(&cubic), Err(Error::Invalid(_))));
    }
}
