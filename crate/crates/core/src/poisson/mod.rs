//! The canonical Poisson bracket on polynomial phase spaces, the invariant
//! generators of the planar and spatial particle systems, their bracket
//! tables and momentum maps.
//!
//! Sign convention: for coordinates `q_k, p_k`
//!
//! ```text
//! {f, h} = Σ_k ∂f/∂p_k · ∂h/∂q_k − ∂f/∂q_k · ∂h/∂p_k
//! ```
//!
//! so `{q, p} = −1`. Comparisons with tables written in other normalizations
//! are made through a measured global constant, never by changing this sign.

pub mod algebra;
pub mod kempf_ness;
pub mod moment;
pub mod spatial;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{int, Rational, RationalPolynomial, VarSet};

pub use algebra::{closure_to_lie_algebra, StructureConstants};
pub use kempf_ness::{kempf_ness_check, KempfNessReport, PlanarPoint};
pub use moment::{sp4_moment, unitary_moment, ComplexMatrix};

const AXES: [&str; 3] = ["x", "y", "z"];

/// `n` particles in `ℝ^d` with positions `q_i` and momenta `p_i`.
///
/// Variables are named `q1x, q1y, …, p1x, …`; all positions precede all
/// momenta, and canonical pair `k` is `(k, k + n·d)`.
#[derive(Clone, Debug)]
pub struct PhaseSpace {
    particles: usize,
    dim: usize,
    vars: Arc<VarSet>,
}

impl PartialEq for PhaseSpace {
    fn eq(&self, other: &Self) -> bool {
        self.particles == other.particles && self.dim == other.dim
    }
}

impl PhaseSpace {
    pub fn new(particles: usize, dim: usize) -> Result<Self> {
        if particles == 0 || !(1..=3).contains(&dim) {
            return Err(Error::Invalid(format!(
                "phase space needs particles >= 1 and dimension 1..=3, got {particles}, {dim}"
            )));
        }
        let mut names = Vec::with_capacity(2 * particles * dim);
        for kind in ["q", "p"] {
            for i in 1..=particles {
                for axis in &AXES[..dim] {
                    names.push(format!("{kind}{i}{axis}"));
                }
            }
        }
        Ok(PhaseSpace {
            particles,
            dim,
            vars: VarSet::new(names),
        })
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// Number of canonical pairs.
    pub fn pairs(&self) -> usize {
        self.particles * self.dim
    }

    pub fn q(&self, k: usize) -> RationalPolynomial {
        RationalPolynomial::var_index(&self.vars, k)
    }

    pub fn p(&self, k: usize) -> RationalPolynomial {
        RationalPolynomial::var_index(&self.vars, self.pairs() + k)
    }

    /// Position of particle `i` (0-based) as a vector of coordinates.
    pub fn position(&self, i: usize) -> Vec<RationalPolynomial> {
        (0..self.dim).map(|a| self.q(i * self.dim + a)).collect()
    }

    pub fn momentum(&self, i: usize) -> Vec<RationalPolynomial> {
        (0..self.dim).map(|a| self.p(i * self.dim + a)).collect()
    }

    /// Vector `j` of the list `q_1, …, q_n, p_1, …, p_n`.
    pub fn vector(&self, j: usize) -> Vec<RationalPolynomial> {
        if j < self.particles {
            self.position(j)
        } else {
            self.momentum(j - self.particles)
        }
    }

    pub fn vector_name(&self, j: usize) -> String {
        if j < self.particles {
            format!("q{}", j + 1)
        } else {
            format!("p{}", j - self.particles + 1)
        }
    }

    pub fn zero(&self) -> RationalPolynomial {
        RationalPolynomial::zero(&self.vars)
    }
}

pub fn dot(u: &[RationalPolynomial], v: &[RationalPolynomial]) -> RationalPolynomial {
    let mut acc = RationalPolynomial::zero(u[0].vars());
    for (a, b) in u.iter().zip(v) {
        acc = &acc + &(a * b);
    }
    acc
}

/// `u_x v_y − u_y v_x` for planar vectors.
pub fn det2(u: &[RationalPolynomial], v: &[RationalPolynomial]) -> RationalPolynomial {
    &(&u[0] * &v[1]) - &(&u[1] * &v[0])
}

pub fn cross(u: &[RationalPolynomial], v: &[RationalPolynomial]) -> Vec<RationalPolynomial> {
    vec![
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

/// Canonical bracket on a phase space.
pub fn canonical_bracket(
    space: &PhaseSpace,
    f: &RationalPolynomial,
    h: &RationalPolynomial,
) -> Result<RationalPolynomial> {
    if f.vars() != space.vars() || h.vars() != space.vars() {
        return Err(Error::VariableMismatch);
    }
    Ok(pair_bracket(space.pairs(), f, h))
}

/// Canonical bracket on any variable set whose first `pairs` variables are
/// positions and next `pairs` are the conjugate momenta.
pub fn pair_bracket(pairs: usize, f: &RationalPolynomial, h: &RationalPolynomial) -> RationalPolynomial {
    let mut out = RationalPolynomial::zero(f.vars());
    for k in 0..pairs {
        let (q, p) = (k, pairs + k);
        let fp = f.derivative_index(p);
        let fq = f.derivative_index(q);
        if !fp.is_zero() {
            let hq = h.derivative_index(q);
            if !hq.is_zero() {
                out = &out + &(&fp * &hq);
            }
        }
        if !fq.is_zero() {
            let hp = h.derivative_index(p);
            if !hp.is_zero() {
                out = &out - &(&fq * &hp);
            }
        }
    }
    out
}

/// Which symmetry group the invariants belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SymmetryGroup {
    /// Rotations of the plane acting diagonally on every vector.
    PlanarSO2,
    /// Rotations (and, for dot products, reflections) of 3-space.
    SpatialO3,
}

/// Named invariant generators on a phase space together with the
/// momentum components of the acting group.
#[derive(Clone, Debug)]
pub struct InvariantSet {
    pub group: SymmetryGroup,
    pub space: PhaseSpace,
    pub names: Vec<String>,
    pub generators: Vec<RationalPolynomial>,
    pub momentum: Vec<RationalPolynomial>,
}

impl InvariantSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, name: &str) -> Result<&RationalPolynomial> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.generators[i])
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// The sub-collection of named generators, same momentum.
    pub fn subset(&self, names: &[&str]) -> Result<InvariantSet> {
        let mut out = InvariantSet {
            group: self.group,
            space: self.space.clone(),
            names: Vec::new(),
            generators: Vec::new(),
            momentum: self.momentum.clone(),
        };
        for n in names {
            out.generators.push(self.generator(n)?.clone());
            out.names.push((*n).to_string());
        }
        Ok(out)
    }

    /// Checks `{g, μ_k} = 0` exactly for every generator and component;
    /// returns the first offending pair.
    pub fn invariance_violation(&self) -> Result<Option<(String, usize)>> {
        for (name, g) in self.names.iter().zip(&self.generators) {
            for (k, mu) in self.momentum.iter().enumerate() {
                if !canonical_bracket(&self.space, g, mu)?.is_zero() {
                    return Ok(Some((name.clone(), k)));
                }
            }
        }
        Ok(None)
    }

    pub fn bracket_table(&self) -> Result<BracketTable> {
        BracketTable::new(self)
    }
}

/// Single planar particle: `x1 = qq − pp`, `x2 = 2qp`, `rho = qq + pp`
/// and the determinant `mu = |q p|`, which is also the momentum.
pub fn planar_invariants() -> InvariantSet {
    let space = PhaseSpace::new(1, 2).expect("valid");
    let q = space.position(0);
    let p = space.momentum(0);
    let qq = dot(&q, &q);
    let pp = dot(&p, &p);
    let qp = dot(&q, &p);
    let mu = det2(&q, &p);
    InvariantSet {
        group: SymmetryGroup::PlanarSO2,
        names: vec!["x1".into(), "x2".into(), "rho".into(), "mu".into()],
        generators: vec![&qq - &pp, qp.scale(&int(2)), &qq + &pp, mu.clone()],
        momentum: vec![mu],
        space,
    }
}

/// `n` planar particles: every dot product `u.v` and determinant `u^v`
/// among `q_1, …, q_n, p_1, …, p_n`, with momentum `Σ |q_i p_i|`.
pub fn planar_invariants_n(n: usize) -> Result<InvariantSet> {
    let space = PhaseSpace::new(n, 2)?;
    let m = 2 * n;
    let mut names = Vec::new();
    let mut generators = Vec::new();
    for a in 0..m {
        for b in a..m {
            names.push(format!("{}.{}", space.vector_name(a), space.vector_name(b)));
            generators.push(dot(&space.vector(a), &space.vector(b)));
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            names.push(format!("{}^{}", space.vector_name(a), space.vector_name(b)));
            generators.push(det2(&space.vector(a), &space.vector(b)));
        }
    }
    let mut mu = space.zero();
    for i in 0..n {
        mu = &mu + &det2(&space.position(i), &space.momentum(i));
    }
    Ok(InvariantSet {
        group: SymmetryGroup::PlanarSO2,
        names,
        generators,
        momentum: vec![mu],
        space,
    })
}

/// `n` particles in 3-space: the `n(2n+1)` dot products among
/// `q_1, …, q_n, p_1, …, p_n`, with total angular momentum `Σ q_i × p_i`.
pub fn spatial_invariants(n: usize) -> Result<InvariantSet> {
    let space = PhaseSpace::new(n, 3)?;
    let m = 2 * n;
    let mut names = Vec::new();
    let mut generators = Vec::new();
    for a in 0..m {
        for b in a..m {
            names.push(format!("{}.{}", space.vector_name(a), space.vector_name(b)));
            generators.push(dot(&space.vector(a), &space.vector(b)));
        }
    }
    let mut mu = vec![space.zero(), space.zero(), space.zero()];
    for i in 0..n {
        let c = cross(&space.position(i), &space.momentum(i));
        for (acc, x) in mu.iter_mut().zip(c) {
            *acc = &*acc + &x;
        }
    }
    Ok(InvariantSet {
        group: SymmetryGroup::SpatialO3,
        names,
        generators,
        momentum: mu,
        space,
    })
}

/// All pairwise brackets of a generator set, in ambient coordinates and,
/// when they close linearly, in the generators.
#[derive(Clone, Debug)]
pub struct BracketTable {
    pub names: Vec<String>,
    pub ambient: Vec<Vec<RationalPolynomial>>,
    /// Brackets as linear polynomials in generator variables, if the
    /// generators span their brackets.
    pub in_generators: Option<Vec<Vec<RationalPolynomial>>>,
    pub generator_vars: Arc<VarSet>,
}

impl BracketTable {
    pub fn new(set: &InvariantSet) -> Result<Self> {
        let n = set.len();
        let mut ambient = vec![vec![set.space.zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = canonical_bracket(&set.space, &set.generators[i], &set.generators[j])?;
                ambient[j][i] = -&b;
                ambient[i][j] = b;
            }
        }
        let generator_vars = VarSet::new(set.names.clone());
        let in_generators = algebra::express_linearly(&set.generators, &ambient, &generator_vars);
        Ok(BracketTable {
            names: set.names.clone(),
            ambient,
            in_generators,
            generator_vars,
        })
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// `{a, b}` in generator variables.
    pub fn entry(&self, a: &str, b: &str) -> Result<Option<&RationalPolynomial>> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        Ok(self.in_generators.as_ref().map(|t| &t[i][j]))
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.names.len();
        (0..n).all(|i| {
            self.ambient[i][i].is_zero()
                && (i + 1..n).all(|j| (&self.ambient[i][j] + &self.ambient[j][i]).is_zero())
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.names.len();
        let mut entries = serde_json::Map::new();
        for i in 0..n {
            for j in i + 1..n {
                let key = format!("{{{},{}}}", self.names[i], self.names[j]);
                let mut e = serde_json::Map::new();
                e.insert("ambient".into(), self.ambient[i][j].to_canonical_string().into());
                if let Some(t) = &self.in_generators {
                    e.insert("generators".into(), t[i][j].to_canonical_string().into());
                }
                entries.insert(key, serde_json::Value::Object(e));
            }
        }
        serde_json::json!({
            "generators": self.names,
            "closes": self.in_generators.is_some(),
            "brackets": entries,
        })
    }

    pub fn to_text(&self) -> String {
        let n = self.names.len();
        let mut s = String::new();
        for i in 0..n {
            for j in i + 1..n {
                let rhs = match &self.in_generators {
                    Some(t) => t[i][j].to_canonical_string(),
                    None => self.ambient[i][j].to_canonical_string(),
                };
                s.push_str(&format!("{{{}, {}}} = {}\n", self.names[i], self.names[j], rhs));
            }
        }
        s
    }
}

/// `{f, {g, h}} + {g, {h, f}} + {h, {f, g}}`.
pub fn jacobiator(
    space: &PhaseSpace,
    f: &RationalPolynomial,
    g: &RationalPolynomial,
    h: &RationalPolynomial,
) -> Result<RationalPolynomial> {
    let b = |x: &RationalPolynomial, y: &RationalPolynomial| canonical_bracket(space, x, y);
    let t1 = b(f, &b(g, h)?)?;
    let t2 = b(g, &b(h, f)?)?;
    let t3 = b(h, &b(f, g)?)?;
    Ok(&(&t1 + &t2) + &t3)
}

/// The table `{x, y} = 2ρ, {x, ρ} = 2y, {y, ρ} = −2x` on the cone
/// coordinates `(x1, x2, rho)`, as polynomials in those variables.
pub fn cone_reference_table(vars: &Arc<VarSet>) -> Result<Vec<((String, String), RationalPolynomial)>> {
    let v = |n: &str| RationalPolynomial::var(vars, n);
    Ok(vec![
        (("x1".into(), "x2".into()), v("rho")?.scale(&int(2))),
        (("x1".into(), "rho".into()), v("x2")?.scale(&int(2))),
        (("x2".into(), "rho".into()), v("x1")?.scale(&int(-2))),
    ])
}

/// The single constant `c` with `reference = c · table` on every listed
/// pair, if one exists.
pub fn proportionality_constant(
    table: &BracketTable,
    reference: &[((String, String), RationalPolynomial)],
) -> Result<Option<Rational>> {
    let Some(ours) = &table.in_generators else {
        return Ok(None);
    };
    let mut constant: Option<Rational> = None;
    for ((a, b), want) in reference {
        let (i, j) = (table.index(a)?, table.index(b)?);
        let have = &ours[i][j];
        // re-home the reference onto the table's variable set by name
        let images: Result<Vec<_>> = want
            .vars()
            .names()
            .iter()
            .map(|n| RationalPolynomial::var(&table.generator_vars, n))
            .collect();
        let Ok(want) = images.and_then(|im| want.compose(&im)) else {
            return Ok(None);
        };
        let Some(c) = want.ratio_to(have) else {
            return Ok(None);
        };
        match &constant {
            None => constant = Some(c),
            Some(x) if *x == c => {}
            Some(_) => return Ok(None),
        }
    }
    Ok(constant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn q_p_bracket_is_minus_one() {
        let s = PhaseSpace::new(1, 1).unwrap();
        let b = canonical_bracket(&s, &s.q(0), &s.p(0)).unwrap();
        assert_eq!(b, RationalPolynomial::constant(s.vars(), int(-1)));
        let f = &(&s.q(0) * &s.p(0)) + &s.q(0);
        assert!(canonical_bracket(&s, &f, &f).unwrap().is_zero());
    }

    #[test]
    fn planar_table_values() {
        let set = planar_invariants();
        let t = set.bracket_table().unwrap();
        let g = |n| RationalPolynomial::var(&t.generator_vars, n).unwrap();
        assert_eq!(t.entry("x1", "x2").unwrap().unwrap(), &g("rho").scale(&int(-4)));
        assert_eq!(t.entry("x1", "rho").unwrap().unwrap(), &g("x2").scale(&int(-4)));
        assert_eq!(t.entry("x2", "rho").unwrap().unwrap(), &g("x1").scale(&int(4)));
        let cone = set.subset(&["x1", "x2", "rho"]).unwrap().bracket_table().unwrap();
        let reference = cone_reference_table(&cone.generator_vars).unwrap();
        assert_eq!(
            proportionality_constant(&cone, &reference).unwrap(),
            Some(rat(-1, 2))
        );
    }

    #[test]
    fn planar_invariance_and_lagrange() {
        let set = planar_invariants();
        assert_eq!(set.invariance_violation().unwrap(), None);
        let x1 = set.generator("x1").unwrap();
        let x2 = set.generator("x2").unwrap();
        let rho = set.generator("rho").unwrap();
        let mu = set.generator("mu").unwrap();
        let lhs = &(&(rho * rho) - &(x1 * x1)) - &(x2 * x2);
        assert_eq!(lhs, (mu * mu).scale(&int(4)));
    }

    #[test]
    fn spatial_counts_and_invariance() {
        let set = spatial_invariants(2).unwrap();
        assert_eq!(set.len(), 10);
        assert_eq!(set.invariance_violation().unwrap(), None);
        let s = &set.space;
        let b = canonical_bracket(s, set.generator("q1.q1").unwrap(), set.generator("p1.p1").unwrap())
            .unwrap();
        assert_eq!(b, set.generator("q1.p1").unwrap().scale(&int(-4)));
    }

    #[test]
    fn planar_n_invariance() {
        let set = planar_invariants_n(2).unwrap();
        assert_eq!(set.len(), 16);
        assert_eq!(set.invariance_violation().unwrap(), None);
        assert!(set.bracket_table().unwrap().in_generators.is_some());
    }
}
