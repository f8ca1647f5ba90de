use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repspace::error::Error;
use repspace::lie::{AlgebraVector, GroupElement};
use repspace::linalg::numeric_rank;
use repspace::words::{
    conjugate, enumerate_central, evaluate_relator, orbit_type, relator_derivative, solve_flat,
    Representation, StratumLabel, SOLVE_TOL,
};

fn random_rep(genus: usize, seed: u64) -> Representation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images = (0..2 * genus).map(|_| GroupElement::random(&mut rng)).collect();
    Representation::new(genus, images).unwrap()
}

fn perturbed(rep: &Representation, u: &[f64], t: f64) -> Representation {
    let images = rep
        .images
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let v = AlgebraVector([u[3 * i], u[3 * i + 1], u[3 * i + 2]]) * t;
            GroupElement::exp(v) * g
        })
        .collect();
    Representation::new(rep.genus, images).unwrap()
}

#[test]
fn derivative_matches_finite_differences() {
    let h = 1e-6;
    for genus in 1..=3 {
        for seed in 0..5 {
            let rep = random_rep(genus, seed);
            let j = relator_derivative(&rep);
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let u: Vec<f64> = (0..6 * genus).map(|_| rng.random_range(-1.0..1.0)).collect();
            let r0 = evaluate_relator(&rep);
            let plus = evaluate_relator(&perturbed(&rep, &u, h));
            let minus = evaluate_relator(&perturbed(&rep, &u, -h));
            // central difference of the right-trivialized curve
            let fd = (plus * r0.inverse()).log().unwrap() + -(minus * r0.inverse()).log().unwrap();
            let fd = fd * (0.5 / h);
            let exact = j.apply(&u);
            let err: f64 = (0..3).map(|k| (fd.0[k] - exact[k]).powi(2)).sum::<f64>().sqrt();
            let size: f64 = exact.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(err <= 1e-5 * size.max(1.0), "genus {genus} seed {seed}: {err} vs {size}");
        }
    }
}

#[test]
fn derivative_ranks_by_stratum() {
    for genus in 2..=3 {
        let rank = |s| numeric_rank(&relator_derivative(&solve_flat(genus, s, 3).unwrap()), 1e-8).unwrap();
        assert_eq!(rank(StratumLabel::Z), 3);
        assert_eq!(rank(StratumLabel::T), 2);
        assert_eq!(rank(StratumLabel::G), 0);
    }
}

#[test]
fn central_enumeration_is_exact() {
    for genus in 1..=4 {
        let reps = enumerate_central(genus);
        assert_eq!(reps.len(), 1 << (2 * genus));
        assert!(reps.iter().all(|r| r.residual == 0.0 && orbit_type(r) == StratumLabel::G));
    }
}

#[test]
fn solver_reaches_each_stratum() {
    for genus in 2..=3 {
        for seed in 0..5 {
            let z = solve_flat(genus, StratumLabel::Z, seed).unwrap();
            assert!(z.residual <= SOLVE_TOL);
            assert_eq!(orbit_type(&z), StratumLabel::Z);
        }
        assert_eq!(orbit_type(&solve_flat(genus, StratumLabel::T, 0).unwrap()), StratumLabel::T);
        assert_eq!(orbit_type(&solve_flat(genus, StratumLabel::G, 0).unwrap()), StratumLabel::G);
    }
}

#[test]
fn solver_is_deterministic() {
    let a = solve_flat(2, StratumLabel::Z, 9).unwrap();
    let b = solve_flat(2, StratumLabel::Z, 9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn genus_preconditions() {
    assert!(matches!(solve_flat(1, StratumLabel::Z, 0), Err(Error::Genus { .. })));
    assert!(matches!(solve_flat(1, StratumLabel::T, 0), Err(Error::Genus { .. })));
    assert_eq!(solve_flat(1, StratumLabel::G, 0).unwrap().residual, 0.0);
}

#[test]
fn log_of_minus_identity_is_an_error() {
    assert!(matches!(GroupElement::MINUS_IDENTITY.log(), Err(Error::LogBranch)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relator_is_conjugation_equivariant(seed in any::<u64>(), genus in 1usize..4) {
        let rep = random_rep(genus, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let g = GroupElement::random(&mut rng);
        let lhs = evaluate_relator(&conjugate(&rep, g));
        let rhs = g * evaluate_relator(&rep) * g.inverse();
        prop_assert!(lhs.distance(rhs) < 1e-12);
    }

    #[test]
    fn conjugation_preserves_stratum(seed in 0u64..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GroupElement::random(&mut rng);
        for s in StratumLabel::ALL {
            let rep = solve_flat(2, s, seed % 7).unwrap();
            let c = conjugate(&rep, g);
            prop_assert!(c.residual <= 1e-9);
            prop_assert_eq!(orbit_type(&c), s);
        }
    }
}
