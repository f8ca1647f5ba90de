//! The surface-group word map `r: G^{2ℓ} → G`, its Fox-calculus
//! derivative, a solver for `r(φ) = e`, and orbit-type classification.
//!
//! Generators are ordered `a1, b1, …, aℓ, bℓ` (index `2i` and `2i + 1`) and
//! the relator is `[a1,b1]···[aℓ,bℓ]` with `[a,b] = a b a⁻¹ b⁻¹`.
//! Perturbations act on the left, `φ(x_i) ↦ exp(u_i) φ(x_i)`, and the
//! derivative is right-trivialized; at a solution this is the Fox
//! derivative map whose kernel is the space of 1-cocycles.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, GroupElement};
use crate::linalg::RealMatrix;

/// Commutation tolerance used by [`orbit_type`].
pub const CLASSIFY_TOL: f64 = 1e-8;

/// Residual a solved representation must reach.
pub const SOLVE_TOL: f64 = 1e-10;

/// One letter `x_generator^exponent` of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i8,
}

/// The standard one-relator presentation of a closed orientable surface
/// group of genus `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    genus: usize,
    relator: Vec<Letter>,
}

impl Presentation {
    pub fn new(genus: usize) -> Self {
        let mut relator = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            let (a, b) = (2 * i, 2 * i + 1);
            relator.push(Letter { generator: a, exponent: 1 });
            relator.push(Letter { generator: b, exponent: 1 });
            relator.push(Letter { generator: a, exponent: -1 });
            relator.push(Letter { generator: b, exponent: -1 });
        }
        Presentation { genus, relator }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus
    }

    pub fn relator(&self) -> &[Letter] {
        &self.relator
    }

    /// Images of every prefix `w_0 = e, w_1, …, w_N` of the relator.
    pub fn prefixes(&self, images: &[GroupElement]) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(self.relator.len() + 1);
        let mut acc = GroupElement::IDENTITY;
        out.push(acc);
        for l in &self.relator {
            acc = acc * letter_image(images, *l);
            out.push(acc);
        }
        out
    }

    /// Fox derivative terms: for each letter `k`, `(generator, sign, element)`
    /// where the element is the image of `w_{k-1}` for a positive letter and
    /// of `w_{k-1} x⁻¹ = w_k` for an inverse letter.
    pub fn fox_terms(&self, images: &[GroupElement]) -> Vec<(usize, f64, GroupElement)> {
        let prefixes = self.prefixes(images);
        self.relator
            .iter()
            .enumerate()
            .map(|(k, l)| {
                if l.exponent > 0 {
                    (l.generator, 1.0, prefixes[k])
                } else {
                    (l.generator, -1.0, prefixes[k + 1])
                }
            })
            .collect()
    }
}

pub(crate) fn letter_image(images: &[GroupElement], l: Letter) -> GroupElement {
    let g = images[l.generator];
    if l.exponent > 0 {
        g
    } else {
        g.inverse()
    }
}

/// Conjugacy class of the stabilizer of a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StratumLabel {
    /// Stabilizer is the center: irreducible, top stratum.
    Z,
    /// Stabilizer is a maximal torus.
    T,
    /// Stabilizer is all of SU(2): central representations.
    G,
}

impl StratumLabel {
    pub const ALL: [StratumLabel; 3] = [StratumLabel::Z, StratumLabel::T, StratumLabel::G];

    pub fn as_str(self) -> &'static str {
        match self {
            StratumLabel::Z => "Z",
            StratumLabel::T => "T",
            StratumLabel::G => "G",
        }
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StratumLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(StratumLabel::Z),
            "T" | "t" => Ok(StratumLabel::T),
            "G" | "g" => Ok(StratumLabel::G),
            other => Err(Error::Invalid(format!("unknown stratum `{other}`"))),
        }
    }
}

/// A homomorphism from the surface group, given by the images of
/// `a1, b1, …, aℓ, bℓ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    pub genus: usize,
    pub images: Vec<GroupElement>,
    /// `|r(φ) − e|` in quaternion norm.
    pub residual: f64,
}

impl Representation {
    pub fn new(genus: usize, images: Vec<GroupElement>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::Invalid("genus must be positive".into()));
        }
        if images.len() != 2 * genus {
            return Err(Error::Dimension {
                expected: 2 * genus,
                got: images.len(),
            });
        }
        let mut rep = Representation {
            genus,
            images,
            residual: 0.0,
        };
        rep.residual = evaluate_relator(&rep).distance_to_identity();
        Ok(rep)
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::new(self.genus)
    }

    /// Recomputes the residual, e.g. after deserializing a file whose
    /// `residual` field cannot be trusted.
    pub fn refresh(mut self) -> Result<Self> {
        if self.images.len() != 2 * self.genus || self.genus == 0 {
            return Err(Error::Dimension {
                expected: 2 * self.genus,
                got: self.images.len(),
            });
        }
        self.residual = evaluate_relator(&self).distance_to_identity();
        Ok(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "genus": self.genus,
            "images": self.images.iter().map(|g| g.to_array().to_vec()).collect::<Vec<_>>(),
            "residual": self.residual,
        })
    }
}

/// `[A1,B1]···[Aℓ,Bℓ]`.
pub fn evaluate_relator(rep: &Representation) -> GroupElement {
    rep.images
        .chunks(2)
        .fold(GroupElement::IDENTITY, |acc, pair| acc * pair[0].commutator(pair[1]))
}

/// Right-trivialized differential of the word map, `3 × 6ℓ`.
///
/// Column block `i` is `Σ_k ε_k Ad(ρ(prefix_k))` over the occurrences of
/// generator `i`, i.e. the Fox derivative `∂r/∂x_i` pushed through `Ad ∘ φ`.
pub fn relator_derivative(rep: &Representation) -> RealMatrix {
    let pres = rep.presentation();
    let mut m = RealMatrix::zeros(3, 3 * pres.generator_count());
    for (gen, sign, elem) in pres.fox_terms(&rep.images) {
        let ad = elem.adjoint_matrix();
        for (r, row) in ad.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let col = 3 * gen + c;
                m.set(r, col, m.get(r, col) + sign * v);
            }
        }
    }
    m
}

/// Conjugates every image by `g`.
pub fn conjugate(rep: &Representation, g: GroupElement) -> Representation {
    let images = rep.images.iter().map(|&x| g * x * g.inverse()).collect();
    Representation::new(rep.genus, images).expect("same shape")
}

/// All `2^{2ℓ}` assignments of `±e` to the generators.
pub fn enumerate_central(genus: usize) -> Vec<Representation> {
    let n = 2 * genus;
    (0..1usize << n).map(|bits| central_representation(genus, bits)).collect()
}

/// Central representation whose generator `k` maps to `−e` iff bit `k` of
/// `pattern` is set.
pub fn central_representation(genus: usize, pattern: usize) -> Representation {
    let images = (0..2 * genus)
        .map(|k| {
            if pattern >> k & 1 == 1 {
                GroupElement::MINUS_IDENTITY
            } else {
                GroupElement::IDENTITY
            }
        })
        .collect();
    Representation::new(genus, images).expect("valid shape")
}

/// Stratum of a (solved) representation.
pub fn orbit_type(rep: &Representation) -> StratumLabel {
    orbit_type_with(rep, CLASSIFY_TOL)
}

pub fn orbit_type_with(rep: &Representation, tol: f64) -> StratumLabel {
    if rep.images.iter().all(|g| g.distance_to_center() <= tol) {
        return StratumLabel::G;
    }
    let n = rep.images.len();
    for i in 0..n {
        for j in i + 1..n {
            if rep.images[i].commutator(rep.images[j]).distance_to_identity() > tol {
                return StratumLabel::Z;
            }
        }
    }
    StratumLabel::T
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub step_budget: usize,
    pub tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            step_budget: 100_000,
            tolerance: SOLVE_TOL,
        }
    }
}

/// Produces a representation in the requested stratum.
pub fn solve_flat(genus: usize, target: StratumLabel, seed: u64) -> Result<Representation> {
    solve_flat_with(genus, target, seed, SolveOptions::default())
}

pub fn solve_flat_with(
    genus: usize,
    target: StratumLabel,
    seed: u64,
    opts: SolveOptions,
) -> Result<Representation> {
    if genus == 0 {
        return Err(Error::Invalid("genus must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match target {
        StratumLabel::G => {
            let pattern = rng.random_range(0..1usize << (2 * genus));
            Ok(central_representation(genus, pattern))
        }
        StratumLabel::T => {
            if genus < 2 {
                return Err(Error::Genus {
                    genus,
                    stratum: target,
                    reason: "torus witnesses are built for genus >= 2",
                });
            }
            torus_representation(genus, &mut rng)
        }
        StratumLabel::Z => {
            if genus < 2 {
                return Err(Error::Genus {
                    genus,
                    stratum: target,
                    reason: "genus 1 has no irreducible representations",
                });
            }
            let start: Vec<GroupElement> =
                (0..2 * genus).map(|_| GroupElement::random(&mut rng)).collect();
            let rep = descend(genus, start, opts)?;
            if orbit_type(&rep) != StratumLabel::Z {
                return Err(Error::NoConvergence {
                    steps: opts.step_budget,
                    residual: rep.residual,
                });
            }
            Ok(rep)
        }
    }
}

fn torus_representation(genus: usize, rng: &mut ChaCha8Rng) -> Result<Representation> {
    let axis = AlgebraVector::basis(2);
    loop {
        let images: Vec<GroupElement> = (0..2 * genus)
            .map(|_| GroupElement::exp(axis * rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        // keep away from the central points so the witness is unambiguous
        if images.iter().any(|g| g.distance_to_center() > 1e-2) {
            let rep = Representation::new(genus, images)?;
            debug_assert_eq!(orbit_type(&rep), StratumLabel::T);
            return Ok(rep);
        }
    }
}

/// Squared-residual objective `½|r(φ) − e|²`, computed without the
/// cancellation in `1 − w`.
fn objective(r: GroupElement) -> f64 {
    0.5 * ((r.w - 1.0).powi(2) + r.x * r.x + r.y * r.y + r.z * r.z)
}

/// Projected gradient descent on `½|r(φ) − e|²` over `(S³)^{2ℓ}`, with
/// Armijo backtracking and the exponential retraction.
fn descend(genus: usize, start: Vec<GroupElement>, opts: SolveOptions) -> Result<Representation> {
    let mut rep = Representation::new(genus, start)?;
    let mut f = objective(evaluate_relator(&rep));
    let mut step = 1.0;
    for _ in 0..opts.step_budget {
        if rep.residual <= opts.tolerance {
            return Ok(rep);
        }
        let r = evaluate_relator(&rep);
        // d F(exp(u)φ) = ⟨Im r, J u⟩, so the gradient is Jᵀ Im r
        let jac = relator_derivative(&rep);
        let im = r.imaginary().0;
        let grad: Vec<f64> = (0..jac.cols())
            .map(|c| (0..3).map(|k| jac.get(k, c) * im[k]).sum())
            .collect();
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if gnorm2 == 0.0 {
            break;
        }
        loop {
            let trial_images: Vec<GroupElement> = rep
                .images
                .iter()
                .enumerate()
                .map(|(i, &g)| {
                    let u = AlgebraVector([grad[3 * i], grad[3 * i + 1], grad[3 * i + 2]]);
                    GroupElement::exp(u * -step) * g
                })
                .collect();
            let trial = Representation::new(genus, trial_images)?;
            let ft = objective(evaluate_relator(&trial));
            if ft <= f - 1e-4 * step * gnorm2 {
                rep = trial;
                f = ft;
                step = (step * 2.0).min(1e3);
                break;
            }
            step *= 0.5;
            if step < 1e-14 {
                return Err(Error::NoConvergence {
                    steps: opts.step_budget,
                    residual: rep.residual,
                });
            }
        }
    }
    if rep.residual <= opts.tolerance {
        Ok(rep)
    } else {
        Err(Error::NoConvergence {
            steps: opts.step_budget,
            residual: rep.residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::numeric_rank;

    fn rep_of(genus: usize, images: Vec<GroupElement>) -> Representation {
        Representation::new(genus, images).unwrap()
    }

    #[test]
    fn relator_shape() {
        let p = Presentation::new(3);
        assert_eq!(p.relator().len(), 12);
        assert_eq!(p.generator_count(), 6);
    }

    #[test]
    fn relator_at_identity_and_commuting_pair() {
        let r = rep_of(2, vec![GroupElement::IDENTITY; 4]);
        assert_eq!(evaluate_relator(&r), GroupElement::IDENTITY);
        let a = GroupElement::exp(AlgebraVector::basis(0) * 0.7);
        let b = GroupElement::exp(AlgebraVector::basis(0) * -1.3);
        let r = rep_of(1, vec![a, b]);
        assert!(evaluate_relator(&r).distance_to_identity() < 1e-15);
    }

    #[test]
    fn commutator_of_i_and_j() {
        let i = GroupElement::new(0.0, 1.0, 0.0, 0.0);
        let j = GroupElement::new(0.0, 0.0, 1.0, 0.0);
        let r = rep_of(1, vec![i, j]);
        assert_eq!(evaluate_relator(&r).to_array(), [-1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn central_enumeration_counts() {
        for (genus, n) in [(1, 4), (2, 16), (3, 64)] {
            let all = enumerate_central(genus);
            assert_eq!(all.len(), n);
            assert!(all.iter().all(|r| r.residual == 0.0));
            assert!(all.iter().all(|r| orbit_type(r) == StratumLabel::G));
        }
    }

    #[test]
    fn derivative_vanishes_at_central_points() {
        for r in enumerate_central(2) {
            let d = relator_derivative(&r);
            assert_eq!(d.max_abs(), 0.0);
        }
    }

    #[test]
    fn torus_witness_rank_two() {
        let r = solve_flat(2, StratumLabel::T, 3).unwrap();
        assert_eq!(orbit_type(&r), StratumLabel::T);
        assert!(r.residual <= 1e-14);
        assert_eq!(numeric_rank(&relator_derivative(&r), 1e-8).unwrap(), 2);
    }

    #[test]
    fn classification_cases() {
        let minus = rep_of(2, vec![GroupElement::MINUS_IDENTITY; 4]);
        assert_eq!(orbit_type(&minus), StratumLabel::G);
        let t = |th: f64| GroupElement::exp(AlgebraVector::basis(2) * th);
        let torus = rep_of(2, vec![t(0.3), t(0.0), t(1.1), t(std::f64::consts::FRAC_PI_2)]);
        assert_eq!(orbit_type(&torus), StratumLabel::T);
    }

    #[test]
    fn genus_preconditions() {
        assert!(matches!(
            solve_flat(1, StratumLabel::Z, 0),
            Err(Error::Genus { .. })
        ));
        assert!(matches!(
            solve_flat(1, StratumLabel::T, 0),
            Err(Error::Genus { .. })
        ));
        let g = solve_flat(1, StratumLabel::G, 0).unwrap();
        assert_eq!(g.residual, 0.0);
    }

    #[test]
    fn irreducible_solution() {
        let r = solve_flat(2, StratumLabel::Z, 42).unwrap();
        assert!(r.residual <= SOLVE_TOL);
        assert_eq!(orbit_type(&r), StratumLabel::Z);
        assert_eq!(numeric_rank(&relator_derivative(&r), 1e-8).unwrap(), 3);
    }

    #[test]
    fn wrong_image_count_rejected() {
        assert!(matches!(
            Representation::new(2, vec![GroupElement::IDENTITY; 3]),
            Err(Error::Dimension { .. })
        ));
    }
}
