//! Poisson models of reduced spaces, the detectors that read off the
//! stratification from them, and the local models attached to each
//! stratum of the representation space.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::cohomology::cohomology;
use crate::error::{Error, Result};
use crate::linalg::{RealMatrix, DEFAULT_RANK_TOL};
use crate::poisson::spatial::SpatialAlgebra;
use crate::poisson::{pair_bracket, planar_invariants, planar_invariants_n};
use crate::poly::{int, RationalPolynomial, VarSet};
use crate::words::{solve_flat, StratumLabel};

/// Relations and inequalities are judged relative to the size of their
/// terms at the point.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// Realization of the generators as polynomials on a symplectic vector
/// space with `pairs` canonical pairs (positions first).
#[derive(Clone, Debug)]
pub struct Lift {
    pub vars: Arc<VarSet>,
    pub pairs: usize,
    pub images: Vec<RationalPolynomial>,
}

/// How a model was built; used to sample points of its top stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    Darboux { pairs: usize },
    Cone,
    Planar { particles: usize },
    Spatial { particles: usize },
    Product(Box<ModelKind>, Box<ModelKind>),
}

/// A finitely presented Poisson algebra: generators, polynomial relations
/// and inequalities cutting out the space, and the brackets of generators
/// as polynomials in the generators.
#[derive(Clone, Debug)]
pub struct PoissonModel {
    pub kind: ModelKind,
    vars: Arc<VarSet>,
    pub relations: Vec<RationalPolynomial>,
    /// Each must be `≥ 0` on the space.
    pub inequalities: Vec<RationalPolynomial>,
    pub brackets: Vec<Vec<RationalPolynomial>>,
    pub lift: Option<Lift>,
}

impl PoissonModel {
    pub fn new(
        kind: ModelKind,
        vars: Arc<VarSet>,
        relations: Vec<RationalPolynomial>,
        inequalities: Vec<RationalPolynomial>,
        brackets: Vec<Vec<RationalPolynomial>>,
        lift: Option<Lift>,
    ) -> Result<Self> {
        let n = vars.len();
        if brackets.len() != n || brackets.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension {
                expected: n,
                got: brackets.len(),
            });
        }
        let all = relations.iter().chain(&inequalities).chain(brackets.iter().flatten());
        if all.into_iter().any(|p| p.vars() != &vars) {
            return Err(Error::VariableMismatch);
        }
        for i in 0..n {
            for j in i..n {
                if !(&brackets[i][j] + &brackets[j][i]).is_zero() {
                    return Err(Error::Invalid(format!(
                        "bracket table is not antisymmetric at ({}, {})",
                        vars.names()[i],
                        vars.names()[j]
                    )));
                }
            }
        }
        if let Some(l) = &lift {
            if l.images.len() != n || l.vars.len() != 2 * l.pairs {
                return Err(Error::Invalid("lift does not match the generators".into()));
            }
        }
        Ok(PoissonModel {
            kind,
            vars,
            relations,
            inequalities,
            brackets,
            lift,
        })
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn names(&self) -> &[String] {
        self.vars.names()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn origin(&self) -> Vec<f64> {
        vec![0.0; self.len()]
    }

    /// Bracket of two polynomials in the generators, by the Leibniz rule.
    pub fn bracket(&self, f: &RationalPolynomial, h: &RationalPolynomial) -> RationalPolynomial {
        let n = self.len();
        let df: Vec<_> = (0..n).map(|a| f.derivative_index(a)).collect();
        let dh: Vec<_> = (0..n).map(|b| h.derivative_index(b)).collect();
        let mut out = RationalPolynomial::zero(&self.vars);
        for a in 0..n {
            if df[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if dh[b].is_zero() || self.brackets[a][b].is_zero() {
                    continue;
                }
                out = &out + &(&(&df[a] * &dh[b]) * &self.brackets[a][b]);
            }
        }
        out
    }

    /// `{g_i, {g_j, g_k}} + {g_j, {g_k, g_i}} + {g_k, {g_i, g_j}}` in the
    /// generator ring.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> RationalPolynomial {
        let g = |a| RationalPolynomial::var_index(&self.vars, a);
        let t1 = self.bracket(&g(i), &self.brackets[j][k]);
        let t2 = self.bracket(&g(j), &self.brackets[k][i]);
        let t3 = self.bracket(&g(k), &self.brackets[i][j]);
        &(&t1 + &t2) + &t3
    }

    /// Jacobi for one triple, modulo the relations satisfied by the
    /// generators: either the jacobiator vanishes in the generator ring or
    /// its lift does.
    pub fn jacobi_holds(&self, i: usize, j: usize, k: usize) -> Result<bool> {
        let jac = self.jacobiator(i, j, k);
        if jac.is_zero() {
            return Ok(true);
        }
        match &self.lift {
            Some(l) => Ok(jac.compose(&l.images)?.is_zero()),
            None => Ok(false),
        }
    }

    /// Checks the table against the lift: `{g_i, g_j}` composed with the
    /// lift equals the canonical bracket of the lifted generators.
    pub fn lift_is_consistent(&self) -> Result<bool> {
        let Some(l) = &self.lift else {
            return Ok(true);
        };
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let direct = pair_bracket(l.pairs, &l.images[i], &l.images[j]);
                if direct != self.brackets[i][j].compose(&l.images)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Generator values at an ambient point.
    pub fn point_from_ambient(&self, ambient: &[f64]) -> Result<Vec<f64>> {
        let l = self
            .lift
            .as_ref()
            .ok_or_else(|| Error::Invalid("model has no ambient realization".into()))?;
        if ambient.len() != l.vars.len() {
            return Err(Error::Dimension {
                expected: l.vars.len(),
                got: ambient.len(),
            });
        }
        Ok(l.images.iter().map(|g| g.evaluate_f64(ambient)).collect())
    }

    /// Largest relative violation of a relation or inequality.
    pub fn feasibility_defect(&self, point: &[f64]) -> f64 {
        let rel = self
            .relations
            .iter()
            .map(|r| r.evaluate_f64(point).abs() / (1.0 + r.magnitude_f64(point)));
        let ineq = self
            .inequalities
            .iter()
            .map(|g| (-g.evaluate_f64(point)).max(0.0) / (1.0 + g.magnitude_f64(point)));
        rel.chain(ineq).fold(0.0, f64::max)
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: point.len(),
            });
        }
        if point.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("point has non-finite coordinates".into()));
        }
        let defect = self.feasibility_defect(point);
        if defect > FEASIBILITY_TOL {
            return Err(Error::Infeasible { defect });
        }
        Ok(())
    }

    /// `Π(x)_ab = {g_a, g_b}(x)`.
    pub fn bracket_matrix(&self, point: &[f64]) -> RealMatrix {
        let n = self.len();
        RealMatrix::from_fn(n, n, |a, b| self.brackets[a][b].evaluate_f64(point))
    }

    /// Rows are the gradients of the relations.
    pub fn relation_jacobian(&self, point: &[f64]) -> RealMatrix {
        let rows: Vec<Vec<f64>> = self.relations.iter().map(|r| r.gradient_f64(point)).collect();
        if rows.is_empty() {
            RealMatrix::zeros(0, self.len())
        } else {
            RealMatrix::from_rows(&rows)
        }
    }

    fn jacobian_rank_and_kernel(&self, point: &[f64]) -> Result<(usize, RealMatrix)> {
        let j = self.relation_jacobian(point);
        if j.rows() == 0 {
            return Ok((0, RealMatrix::identity(self.len())));
        }
        let report = j.rank_report_scaled(DEFAULT_RANK_TOL, 1.0)?;
        Ok((report.rank, report.kernel()))
    }

    /// `dim (m_x/m_x²)*`: generators minus the rank of the relation
    /// Jacobian.
    pub fn zariski_tangent_dim(&self, point: &[f64]) -> Result<usize> {
        self.check_point(point)?;
        let (rank, _) = self.jacobian_rank_and_kernel(point)?;
        Ok(self.len() - rank)
    }

    /// Rank of the bracket on the Zariski cotangent space at the point.
    pub fn poisson_rank_at(&self, point: &[f64]) -> Result<usize> {
        self.check_point(point)?;
        let (_, kernel) = self.jacobian_rank_and_kernel(point)?;
        if kernel.cols() == 0 {
            return Ok(0);
        }
        let pi = self.bracket_matrix(point);
        let restricted = kernel.transpose().matmul(&pi).matmul(&kernel);
        Ok(restricted.rank_report_scaled(DEFAULT_RANK_TOL, 1.0)?.rank)
    }

    /// Relations within tolerance and every inequality satisfied.
    pub fn semialgebraic_member(&self, point: &[f64]) -> bool {
        point.len() == self.len()
            && point.iter().all(|x| x.is_finite())
            && self.feasibility_defect(point) <= FEASIBILITY_TOL
    }

    /// The same model with generators reordered: new generator `i` is old
    /// generator `order[i]`.
    pub fn relabel(&self, order: &[usize]) -> Result<PoissonModel> {
        let n = self.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::Invalid("relabeling must be a permutation".into()));
        }
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let vars = VarSet::new(order.iter().map(|&i| self.names()[i].clone()));
        let mv = |p: &RationalPolynomial| p.remap(&vars, &position);
        let brackets = (0..n)
            .map(|i| (0..n).map(|j| mv(&self.brackets[order[i]][order[j]])).collect())
            .collect();
        let lift = self.lift.as_ref().map(|l| Lift {
            vars: Arc::clone(&l.vars),
            pairs: l.pairs,
            images: order.iter().map(|&i| l.images[i].clone()).collect(),
        });
        PoissonModel::new(
            self.kind.clone(),
            Arc::clone(&vars),
            self.relations.iter().map(mv).collect(),
            self.inequalities.iter().map(mv).collect(),
            brackets,
            lift,
        )
    }

    /// The product space: generators of `self` followed by those of
    /// `other`, which Poisson-commute with each other.
    pub fn product(&self, other: &PoissonModel) -> Result<PoissonModel> {
        let (na, nb) = (self.len(), other.len());
        let names: Vec<String> = self.names().iter().chain(other.names()).cloned().collect();
        let mut unique = names.clone();
        unique.sort();
        unique.dedup();
        if unique.len() != names.len() {
            return Err(Error::Invalid("factor generator names collide".into()));
        }
        let vars = VarSet::new(names);
        let left = |p: &RationalPolynomial| p.embed(&vars, 0);
        let right = |p: &RationalPolynomial| p.embed(&vars, na);
        let zero = RationalPolynomial::zero(&vars);
        let mut brackets = vec![vec![zero; na + nb]; na + nb];
        for i in 0..na {
            for j in 0..na {
                brackets[i][j] = left(&self.brackets[i][j]);
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                brackets[na + i][na + j] = right(&other.brackets[i][j]);
            }
        }
        let lift = match (&self.lift, &other.lift) {
            (Some(a), Some(b)) => Some(product_lift(a, b)?),
            _ => None,
        };
        PoissonModel::new(
            ModelKind::Product(Box::new(self.kind.clone()), Box::new(other.kind.clone())),
            Arc::clone(&vars),
            self.relations.iter().map(left).chain(other.relations.iter().map(right)).collect(),
            self.inequalities.iter().map(left).chain(other.inequalities.iter().map(right)).collect(),
            brackets,
            lift,
        )
    }

    /// A random point of the top stratum, in generator values.
    pub fn sample_top_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        sample_kind(&self.kind, rng)
    }
}

fn product_lift(a: &Lift, b: &Lift) -> Result<Lift> {
    let (pa, pb) = (a.pairs, b.pairs);
    let mut names = Vec::with_capacity(2 * (pa + pb));
    names.extend(a.vars.names()[..pa].iter().cloned());
    names.extend(b.vars.names()[..pb].iter().cloned());
    names.extend(a.vars.names()[pa..].iter().cloned());
    names.extend(b.vars.names()[pb..].iter().cloned());
    let mut unique = names.clone();
    unique.sort();
    unique.dedup();
    if unique.len() != names.len() {
        return Err(Error::Invalid("factor ambient names collide".into()));
    }
    let vars = VarSet::new(names);
    let map_a: Vec<usize> = (0..2 * pa).map(|i| if i < pa { i } else { pb + i }).collect();
    let map_b: Vec<usize> = (0..2 * pb)
        .map(|i| if i < pb { pa + i } else { 2 * pa + i })
        .collect();
    let images = a
        .images
        .iter()
        .map(|g| g.remap(&vars, &map_a))
        .chain(b.images.iter().map(|g| g.remap(&vars, &map_b)))
        .collect();
    Ok(Lift {
        vars,
        pairs: pa + pb,
        images,
    })
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn sample_kind<R: Rng + ?Sized>(kind: &ModelKind, rng: &mut R) -> Result<Vec<f64>> {
    match kind {
        ModelKind::Darboux { pairs } => Ok((0..2 * pairs).map(|_| gaussian(rng)).collect()),
        ModelKind::Product(a, b) => {
            let mut first = sample_kind(a, rng)?;
            first.extend(sample_kind(b, rng)?);
            Ok(first)
        }
        ModelKind::Cone => {
            let (a, b, t) = (gaussian(rng), gaussian(rng), gaussian(rng));
            let u = [t.cos(), t.sin()];
            let lifted = cone_model();
            lifted.point_from_ambient(&[a * u[0], a * u[1], b * u[0], b * u[1]])
        }
        ModelKind::Planar { particles } => {
            let n = *particles;
            let mut q: Vec<[f64; 2]> = (0..n).map(|_| [gaussian(rng), gaussian(rng)]).collect();
            let mut p: Vec<[f64; 2]> = (0..n).map(|_| [gaussian(rng), gaussian(rng)]).collect();
            // make the total determinant vanish through the last momentum
            let s: f64 = (0..n - 1).map(|i| q[i][0] * p[i][1] - q[i][1] * p[i][0]).sum();
            let last = q[n - 1];
            let c = -s / (last[0] * last[0] + last[1] * last[1]);
            p[n - 1] = [-c * last[1], c * last[0]];
            let mut ambient = Vec::with_capacity(4 * n);
            for v in q.iter_mut() {
                ambient.extend_from_slice(v);
            }
            for v in &p {
                ambient.extend_from_slice(v);
            }
            planar_model(n)?.point_from_ambient(&ambient)
        }
        ModelKind::Spatial { particles } => {
            let n = *particles;
            let v3 = |rng: &mut R| [gaussian(rng), gaussian(rng), gaussian(rng)];
            let mut q: Vec<[f64; 3]> = (0..n).map(|_| v3(rng)).collect();
            let mut p: Vec<[f64; 3]> = (0..n).map(|_| v3(rng)).collect();
            let cross = |a: [f64; 3], b: [f64; 3]| {
                [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
            };
            let mut total = [0.0; 3];
            for i in 0..n - 1 {
                let c = cross(q[i], p[i]);
                for k in 0..3 {
                    total[k] -= c[k];
                }
            }
            // last particle carries the opposite angular momentum: q ⊥ L, p = L × q / |q|²
            let mut last = q[n - 1];
            let l2: f64 = total.iter().map(|x| x * x).sum();
            if l2 > 0.0 {
                let along: f64 = (0..3).map(|k| last[k] * total[k]).sum::<f64>() / l2;
                for k in 0..3 {
                    last[k] -= along * total[k];
                }
            }
            let q2: f64 = last.iter().map(|x| x * x).sum();
            let lq = cross(total, last);
            q[n - 1] = last;
            p[n - 1] = [lq[0] / q2, lq[1] / q2, lq[2] / q2];
            let mut ambient = Vec::with_capacity(6 * n);
            for v in q.iter().chain(&p) {
                ambient.extend_from_slice(v);
            }
            spatial_model(n)?.point_from_ambient(&ambient)
        }
    }
}

/// `2·pairs` free generators `q1, …, p1, …` with `{q_i, p_i} = −1`.
pub fn darboux_model(pairs: usize) -> PoissonModel {
    let names: Vec<String> = (1..=pairs)
        .map(|i| format!("q{i}"))
        .chain((1..=pairs).map(|i| format!("p{i}")))
        .collect();
    let vars = VarSet::new(names);
    let n = 2 * pairs;
    let mut brackets = vec![vec![RationalPolynomial::zero(&vars); n]; n];
    for i in 0..pairs {
        brackets[i][pairs + i] = RationalPolynomial::constant(&vars, int(-1));
        brackets[pairs + i][i] = RationalPolynomial::constant(&vars, int(1));
    }
    let images = (0..n).map(|i| RationalPolynomial::var_index(&vars, i)).collect();
    let lift = Lift {
        vars: Arc::clone(&vars),
        pairs,
        images,
    };
    PoissonModel::new(ModelKind::Darboux { pairs }, vars, vec![], vec![], brackets, Some(lift))
        .expect("consistent by construction")
}

/// The reduced single planar particle: `x1² + x2² = rho²`, `rho ≥ 0`.
pub fn cone_model() -> PoissonModel {
    let full = planar_invariants();
    let set = full.subset(&["x1", "x2", "rho"]).expect("generators exist");
    let table = set.bracket_table().expect("same space");
    let vars = Arc::clone(&table.generator_vars);
    let brackets = table.in_generators.expect("the cone generators close");
    let v = |n: &str| RationalPolynomial::var(&vars, n).expect("known");
    let relation = &(&(&v("x1") * &v("x1")) + &(&v("x2") * &v("x2"))) - &(&v("rho") * &v("rho"));
    let lift = Lift {
        vars: Arc::clone(set.space.vars()),
        pairs: set.space.pairs(),
        images: set.generators.clone(),
    };
    PoissonModel::new(ModelKind::Cone, vars.clone(), vec![relation], vec![v("rho")], brackets, Some(lift))
        .expect("consistent by construction")
}

/// The reduced space of `n` planar particles at zero total momentum.
///
/// One particle gives the cone. For more, the generators are all dot
/// products and determinants of the `2n` vectors, cut by the vanishing
/// momentum and the identities `(u.v)² + (u^v)² = (u.u)(v.v)`.
pub fn planar_model(n: usize) -> Result<PoissonModel> {
    if n == 1 {
        return Ok(cone_model());
    }
    let set = planar_invariants_n(n)?;
    let table = set.bracket_table()?;
    let vars = Arc::clone(&table.generator_vars);
    let brackets = table
        .in_generators
        .ok_or_else(|| Error::Invalid("planar invariants do not close".into()))?;
    let space = &set.space;
    let v = |name: String| RationalPolynomial::var(&vars, &name);
    let m = 2 * n;
    let vn = |a: usize| space.vector_name(a);
    let mut relations = Vec::new();
    let mut momentum = RationalPolynomial::zero(&vars);
    for i in 0..n {
        momentum = &momentum + &v(format!("{}^{}", vn(i), vn(n + i)))?;
    }
    relations.push(momentum);
    for a in 0..m {
        for b in a + 1..m {
            let uv = v(format!("{}.{}", vn(a), vn(b)))?;
            let det = v(format!("{}^{}", vn(a), vn(b)))?;
            let uu = v(format!("{}.{}", vn(a), vn(a)))?;
            let vv = v(format!("{}.{}", vn(b), vn(b)))?;
            relations.push(&(&(&uv * &uv) + &(&det * &det)) - &(&uu * &vv));
        }
    }
    let inequalities = (0..m)
        .map(|a| v(format!("{}.{}", vn(a), vn(a))))
        .collect::<Result<Vec<_>>>()?;
    let lift = Lift {
        vars: Arc::clone(space.vars()),
        pairs: space.pairs(),
        images: set.generators.clone(),
    };
    PoissonModel::new(
        ModelKind::Planar { particles: n },
        Arc::clone(&vars),
        relations,
        inequalities,
        brackets,
        Some(lift),
    )
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant of a small square matrix of polynomials by cofactor
/// expansion.
fn poly_det(m: &[Vec<RationalPolynomial>]) -> RationalPolynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut out = RationalPolynomial::zero(m[0][0].vars());
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<_>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * &poly_det(&minor);
        out = if c % 2 == 0 { &out + &term } else { &out - &term };
    }
    out
}

/// The reduced space of `n` particles in 3-space at zero total angular
/// momentum, in rotation invariants.
///
/// Generators are the dot products of `q_1, …, q_n, p_1, …, p_n`, plus their
/// triple products when `n ≥ 3` (for `n = 2` those vanish on the zero level,
/// since all four vectors are then coplanar). Relations: the 4×4 Gram
/// minors; for `n = 2` also the 3×3 minors; the quadratic identities
/// `Σ_i (q_i.u)(p_i.v) − (q_i.v)(p_i.u) = 0`; and, with triple products,
/// `Σ_i [q_i,p_i,w] = 0` and `[a,b,c][d,e,f] = det Gram(abc; def)`.
pub fn spatial_model(n: usize) -> Result<PoissonModel> {
    let alg = SpatialAlgebra::new(n, n >= 3)?;
    let space = alg.phase_space();
    let vars = Arc::clone(alg.vars());
    let brackets = alg.table()?;
    let m = 2 * n;
    let gram = |rows: &[usize], cols: &[usize]| -> RationalPolynomial {
        let mat: Vec<Vec<_>> = rows
            .iter()
            .map(|&a| cols.iter().map(|&b| alg.dot_var(a, b)).collect())
            .collect();
        poly_det(&mat)
    };
    let mut relations = Vec::new();
    let minor_sizes: &[usize] = if n == 2 { &[3, 4] } else { &[4] };
    for &k in minor_sizes {
        let sets = subsets(m, k);
        for (i, rows) in sets.iter().enumerate() {
            for cols in &sets[i..] {
                relations.push(gram(rows, cols));
            }
        }
    }
    for u in 0..m {
        for v in u + 1..m {
            let mut r = RationalPolynomial::zero(&vars);
            for i in 0..n {
                let (q, p) = (i, n + i);
                r = &r + &(&alg.dot_var(q, u) * &alg.dot_var(p, v));
                r = &r - &(&alg.dot_var(q, v) * &alg.dot_var(p, u));
            }
            relations.push(r);
        }
    }
    if n >= 3 {
        for w in 0..m {
            let mut r = RationalPolynomial::zero(&vars);
            for i in 0..n {
                r = &r + &alg.triple_var(i, n + i, w)?;
            }
            relations.push(r);
        }
        let triples = subsets(m, 3);
        for (i, a) in triples.iter().enumerate() {
            for b in &triples[i..] {
                let lhs = &alg.triple_var(a[0], a[1], a[2])? * &alg.triple_var(b[0], b[1], b[2])?;
                relations.push(&lhs - &gram(a, b));
            }
        }
    }
    relations.retain(|r| !r.is_zero());
    let inequalities = (0..m).map(|a| alg.dot_var(a, a)).collect();
    let lift = Lift {
        vars: Arc::clone(space.vars()),
        pairs: space.pairs(),
        images: (0..alg.len()).map(|i| alg.ambient(&space, i)).collect(),
    };
    PoissonModel::new(
        ModelKind::Spatial { particles: n },
        vars,
        relations,
        inequalities,
        brackets,
        Some(lift),
    )
}

/// The Poisson model of a neighbourhood of a stratum point.
#[derive(Clone, Debug)]
pub struct LocalModelSpec {
    pub genus: usize,
    pub stratum: StratumLabel,
    pub model: PoissonModel,
    /// Dimension of the symplectic vector space being reduced; equals
    /// `dim H¹` at a point of the stratum.
    pub ambient_dim: usize,
    /// Dimension of the top stratum, `6ℓ − 6`.
    pub top_dim: usize,
}

impl LocalModelSpec {
    /// The point corresponding to the stratum point itself.
    pub fn base_point(&self) -> Vec<f64> {
        self.model.origin()
    }
}

pub fn local_model(genus: usize, stratum: StratumLabel) -> Result<LocalModelSpec> {
    if genus < 2 {
        return Err(Error::Genus {
            genus,
            stratum,
            reason: "local models need genus at least 2",
        });
    }
    let (model, ambient_dim) = match stratum {
        StratumLabel::Z => (darboux_model(3 * (genus - 1)), 6 * genus - 6),
        StratumLabel::T => (darboux_model(genus).product(&planar_model(genus - 1)?)?, 6 * genus - 4),
        StratumLabel::G => (spatial_model(genus)?, 6 * genus),
    };
    Ok(LocalModelSpec {
        genus,
        stratum,
        model,
        ambient_dim,
        top_dim: 6 * genus - 6,
    })
}

/// One line of the stratum report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumRow {
    pub genus: usize,
    pub stratum: StratumLabel,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub lambda_kernel: usize,
    pub lambda_image: usize,
    pub poisson_rank: usize,
    pub tangent_dim: usize,
}

pub fn stratum_row(genus: usize, stratum: StratumLabel, seed: u64) -> Result<StratumRow> {
    let rep = solve_flat(genus, stratum, seed)?;
    let data = cohomology(&rep)?;
    let spec = local_model(genus, stratum)?;
    let base = spec.base_point();
    Ok(StratumRow {
        genus,
        stratum,
        h0: data.h0_dim,
        h1: data.h1_dim,
        h2: data.h2_dim,
        lambda_kernel: data.lambda.kernel,
        lambda_image: data.lambda.image,
        poisson_rank: spec.model.poisson_rank_at(&base)?,
        tangent_dim: spec.model.zariski_tangent_dim(&base)?,
    })
}

/// Rows for the three strata of one genus, in the order Z, T, G.
pub fn stratum_report(genus: usize, seed: u64) -> Result<Vec<StratumRow>> {
    StratumLabel::ALL.iter().map(|&s| stratum_row(genus, s, seed)).collect()
}

/// Rows for several genera, computed on `jobs` threads. Output order does
/// not depend on `jobs`.
pub fn stratum_report_many(genera: &[usize], seed: u64, jobs: usize) -> Result<Vec<StratumRow>> {
    use rayon::prelude::*;
    let tasks: Vec<(usize, StratumLabel)> = genera
        .iter()
        .flat_map(|&g| StratumLabel::ALL.iter().map(move |&s| (g, s)))
        .collect();
    if jobs <= 1 {
        return tasks.iter().map(|&(g, s)| stratum_row(g, s, seed)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    pool.install(|| tasks.par_iter().map(|&(g, s)| stratum_row(g, s, seed)).collect())
}

pub fn rows_to_csv(rows: &[StratumRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cone_detectors() {
        let cone = cone_model();
        assert_eq!(cone.poisson_rank_at(&[0.0, 0.0, 0.0]).unwrap(), 0);
        assert_eq!(cone.zariski_tangent_dim(&[0.0, 0.0, 0.0]).unwrap(), 3);
        assert_eq!(cone.poisson_rank_at(&[1.0, 0.0, 1.0]).unwrap(), 2);
        assert_eq!(cone.zariski_tangent_dim(&[1.0, 0.0, 1.0]).unwrap(), 2);
        assert!(cone.semialgebraic_member(&[1.0, 0.0, 1.0]));
        assert!(!cone.semialgebraic_member(&[1.0, 0.0, -1.0]));
        assert!(!cone.semialgebraic_member(&[1.0, 1.0, 1.0]));
        assert!(matches!(cone.poisson_rank_at(&[1.0, 1.0, 1.0]), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn base_point_dimensions_genus_two() {
        let z = local_model(2, StratumLabel::Z).unwrap();
        let t = local_model(2, StratumLabel::T).unwrap();
        let g = local_model(2, StratumLabel::G).unwrap();
        assert_eq!(z.model.len(), 6);
        assert_eq!(t.model.len(), 7);
        assert_eq!(g.model.len(), 10);
        let check = |s: &LocalModelSpec| {
            let b = s.base_point();
            (s.model.poisson_rank_at(&b).unwrap(), s.model.zariski_tangent_dim(&b).unwrap())
        };
        assert_eq!(check(&z), (6, 6));
        assert_eq!(check(&t), (4, 7));
        assert_eq!(check(&g), (0, 10));
    }

    #[test]
    fn top_stratum_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for genus in 2..=3 {
            for s in StratumLabel::ALL {
                let spec = local_model(genus, s).unwrap();
                let x = spec.model.sample_top_point(&mut rng).unwrap();
                assert!(spec.model.semialgebraic_member(&x), "{genus} {s}");
                assert_eq!(spec.model.poisson_rank_at(&x).unwrap(), spec.top_dim, "{genus} {s}");
            }
        }
    }

    #[test]
    fn tables_match_lifts() {
        for model in [cone_model(), planar_model(2).unwrap(), spatial_model(2).unwrap()] {
            assert!(model.lift_is_consistent().unwrap());
        }
        let t = local_model(2, StratumLabel::T).unwrap();
        assert!(t.model.lift_is_consistent().unwrap());
    }

    #[test]
    fn genus_one_rejected() {
        assert!(matches!(local_model(1, StratumLabel::T), Err(Error::Genus { .. })));
    }
}
