//! Closed-form brackets of the rotation invariants of `n` particles in
//! 3-space, expressed directly in the invariants.
//!
//! The generators are the dot products `u.v` of the `2n` vectors
//! `q_1, …, q_n, p_1, …, p_n` and, optionally, the triple products
//! `[u,v,w] = det(u, v, w)`. Brackets follow from the gradients
//! `∇_a (a.b) = b`, `∇_a [a,b,c] = b × c` and the identities
//! `w.(x × y) = [w,x,y]`, `(w × x).(y × z) = (w.y)(x.z) − (w.z)(x.y)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{int, RationalPolynomial, VarSet};

use super::{cross, dot, PhaseSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpatialGenerator {
    Dot(usize, usize),
    Triple(usize, usize, usize),
}

#[derive(Clone, Copy, Debug)]
enum VecExpr {
    Vector(usize),
    Cross(usize, usize),
}

/// Sign of the permutation sorting three distinct indices, with the sorted
/// triple; `None` if two coincide.
fn sort3(a: usize, b: usize, c: usize) -> Option<(i64, [usize; 3])> {
    if a == b || b == c || a == c {
        return None;
    }
    let mut v = [a, b, c];
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Some((sign, v))
}

#[derive(Clone, Debug)]
pub struct SpatialAlgebra {
    particles: usize,
    generators: Vec<SpatialGenerator>,
    names: Vec<String>,
    vars: Arc<VarSet>,
    lookup: HashMap<SpatialGenerator, usize>,
}

impl SpatialAlgebra {
    pub fn new(particles: usize, with_triples: bool) -> Result<Self> {
        if particles == 0 {
            return Err(Error::Invalid("need at least one particle".into()));
        }
        let space = PhaseSpace::new(particles, 3)?;
        let m = 2 * particles;
        let mut generators = Vec::new();
        let mut names = Vec::new();
        for a in 0..m {
            for b in a..m {
                generators.push(SpatialGenerator::Dot(a, b));
                names.push(format!("{}.{}", space.vector_name(a), space.vector_name(b)));
            }
        }
        if with_triples {
            for a in 0..m {
                for b in a + 1..m {
                    for c in b + 1..m {
                        generators.push(SpatialGenerator::Triple(a, b, c));
                        names.push(format!(
                            "[{},{},{}]",
                            space.vector_name(a),
                            space.vector_name(b),
                            space.vector_name(c)
                        ));
                    }
                }
            }
        }
        let lookup = generators.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        Ok(SpatialAlgebra {
            particles,
            generators,
            vars: VarSet::new(names.clone()),
            names,
            lookup,
        })
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn generators(&self) -> &[SpatialGenerator] {
        &self.generators
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index(&self, g: SpatialGenerator) -> Option<usize> {
        self.lookup.get(&g).copied()
    }

    /// Generator variable for `u.v` (any order).
    pub fn dot_var(&self, a: usize, b: usize) -> RationalPolynomial {
        let g = SpatialGenerator::Dot(a.min(b), a.max(b));
        RationalPolynomial::var_index(&self.vars, self.lookup[&g])
    }

    /// `[a,b,c]` as a signed generator variable; zero for repeated vectors.
    pub fn triple_var(&self, a: usize, b: usize, c: usize) -> Result<RationalPolynomial> {
        let Some((sign, [x, y, z])) = sort3(a, b, c) else {
            return Ok(RationalPolynomial::zero(&self.vars));
        };
        let idx = self
            .index(SpatialGenerator::Triple(x, y, z))
            .ok_or_else(|| Error::Invalid("triple products are not generators here".into()))?;
        Ok(RationalPolynomial::var_index(&self.vars, idx).scale(&int(sign)))
    }

    /// The generator as a polynomial on phase space.
    pub fn ambient(&self, space: &PhaseSpace, i: usize) -> RationalPolynomial {
        match self.generators[i] {
            SpatialGenerator::Dot(a, b) => dot(&space.vector(a), &space.vector(b)),
            SpatialGenerator::Triple(a, b, c) => {
                dot(&space.vector(a), &cross(&space.vector(b), &space.vector(c)))
            }
        }
    }

    pub fn phase_space(&self) -> PhaseSpace {
        PhaseSpace::new(self.particles, 3).expect("valid")
    }

    /// Gradient of generator `i` with respect to vector `v`.
    fn gradient(&self, i: usize, v: usize) -> Vec<(i64, VecExpr)> {
        match self.generators[i] {
            SpatialGenerator::Dot(a, b) if a == b => {
                if v == a {
                    vec![(2, VecExpr::Vector(a))]
                } else {
                    vec![]
                }
            }
            SpatialGenerator::Dot(a, b) => {
                let mut out = vec![];
                if v == a {
                    out.push((1, VecExpr::Vector(b)));
                }
                if v == b {
                    out.push((1, VecExpr::Vector(a)));
                }
                out
            }
            SpatialGenerator::Triple(a, b, c) => {
                if v == a {
                    vec![(1, VecExpr::Cross(b, c))]
                } else if v == b {
                    vec![(1, VecExpr::Cross(c, a))]
                } else if v == c {
                    vec![(1, VecExpr::Cross(a, b))]
                } else {
                    vec![]
                }
            }
        }
    }

    fn inner(&self, x: VecExpr, y: VecExpr) -> Result<RationalPolynomial> {
        use VecExpr::*;
        Ok(match (x, y) {
            (Vector(a), Vector(b)) => self.dot_var(a, b),
            (Vector(w), Cross(a, b)) | (Cross(a, b), Vector(w)) => self.triple_var(w, a, b)?,
            (Cross(w, x), Cross(y, z)) => {
                if w == x || y == z {
                    RationalPolynomial::zero(&self.vars)
                } else {
                    &(&self.dot_var(w, y) * &self.dot_var(x, z))
                        - &(&self.dot_var(w, z) * &self.dot_var(x, y))
                }
            }
        })
    }

    fn pair_sum(&self, f: usize, g: usize, vf: usize, vg: usize) -> Result<RationalPolynomial> {
        let mut out = RationalPolynomial::zero(&self.vars);
        for (cf, ef) in self.gradient(f, vf) {
            for (cg, eg) in self.gradient(g, vg) {
                out = &out + &self.inner(ef, eg)?.scale(&int(cf * cg));
            }
        }
        Ok(out)
    }

    /// `{g_i, g_j}` in generator variables.
    pub fn bracket(&self, i: usize, j: usize) -> Result<RationalPolynomial> {
        let n = self.particles;
        let mut out = RationalPolynomial::zero(&self.vars);
        for k in 0..n {
            let (q, p) = (k, n + k);
            out = &out + &self.pair_sum(i, j, p, q)?;
            out = &out - &self.pair_sum(i, j, q, p)?;
        }
        Ok(out)
    }

    /// The full antisymmetric table.
    pub fn table(&self) -> Result<Vec<Vec<RationalPolynomial>>> {
        let n = self.len();
        let mut t = vec![vec![RationalPolynomial::zero(&self.vars); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = self.bracket(i, j)?;
                t[j][i] = -&b;
                t[i][j] = b;
            }
        }
        Ok(t)
    }
}
