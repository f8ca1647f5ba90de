use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repspace::cohomology::{
    coboundary_of, cohomology, group_action, symplectic_pairing, theta, CohomologyData,
};
use repspace::error::Error;
use repspace::lie::{AlgebraVector, GroupElement};
use repspace::words::{conjugate, solve_flat, Representation, StratumLabel};

fn combo(data: &CohomologyData, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let cols = data.h1_basis.columns();
    let mut u = vec![0.0; data.h1_basis.rows()];
    for c in &cols {
        let a: f64 = rng.random_range(-1.0..1.0);
        for (x, y) in u.iter_mut().zip(c) {
            *x += a * y;
        }
    }
    u
}

fn witnesses(genus: usize) -> Vec<Representation> {
    StratumLabel::ALL
        .iter()
        .map(|&s| solve_flat(genus, s, 1).unwrap())
        .collect()
}

#[test]
fn pairing_is_skew_and_nondegenerate_on_h1() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for rep in witnesses(2) {
        let data = cohomology(&rep).unwrap();
        assert_eq!(data.pairing.rank, data.h1_dim);
        assert!(data.pairing.skew_defect < 1e-10);
        for _ in 0..5 {
            let u = combo(&data, &mut rng);
            let v = combo(&data, &mut rng);
            let uv = symplectic_pairing(&rep, &u, &v).unwrap();
            let vu = symplectic_pairing(&rep, &v, &u).unwrap();
            assert!((uv + vu).abs() < 1e-10);
        }
    }
}

#[test]
fn pairing_vanishes_on_coboundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for rep in witnesses(2) {
        let data = cohomology(&rep).unwrap();
        for _ in 0..5 {
            let w = coboundary_of(&rep, AlgebraVector::random(&mut rng));
            let u = combo(&data, &mut rng);
            assert!(symplectic_pairing(&rep, &w, &u).unwrap().abs() < 1e-10);
        }
    }
}

#[test]
fn theta_is_quadratic_and_kills_coboundaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for rep in witnesses(2) {
        let data = cohomology(&rep).unwrap();
        let u = combo(&data, &mut rng);
        let t = theta(&rep, &u).unwrap();
        let doubled: Vec<f64> = u.iter().map(|x| 2.0 * x).collect();
        let t2 = theta(&rep, &doubled).unwrap();
        assert!((t2 + -(t * 4.0)).norm() < 1e-10);
        let w = coboundary_of(&rep, AlgebraVector::random(&mut rng));
        assert!(theta(&rep, &w).unwrap().norm() < 1e-10);
    }
}

#[test]
fn theta_is_equivariant_at_central_points() {
    let rep = solve_flat(2, StratumLabel::G, 0).unwrap();
    let data = cohomology(&rep).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let u = combo(&data, &mut rng);
        let g = GroupElement::random(&mut rng);
        let lhs = theta(&rep, &group_action(g, &u)).unwrap();
        let rhs = g.adjoint(theta(&rep, &u).unwrap());
        assert!((lhs + -rhs).norm() < 1e-10);
    }
}

#[test]
fn theta_is_equivariant_at_torus_points() {
    let rep = solve_flat(2, StratumLabel::T, 0).unwrap();
    let data = cohomology(&rep).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..5 {
        let u = combo(&data, &mut rng);
        let g = GroupElement::exp(AlgebraVector::basis(2) * rng.random_range(0.0..6.0));
        let lhs = theta(&rep, &group_action(g, &u)).unwrap();
        let rhs = g.adjoint(theta(&rep, &u).unwrap());
        assert!((lhs + -rhs).norm() < 1e-10);
    }
}

#[test]
fn euler_characteristic_and_h1_by_genus() {
    for genus in 2..=4usize {
        let chi = 3 * (2 - 2 * genus as i64);
        for (s, h1) in [
            (StratumLabel::Z, 6 * genus - 6),
            (StratumLabel::T, 6 * genus - 4),
            (StratumLabel::G, 6 * genus),
        ] {
            for seed in 0..3 {
                let d = cohomology(&solve_flat(genus, s, seed).unwrap()).unwrap();
                assert_eq!(d.h1_dim, h1, "genus {genus} {s}");
                assert_eq!(d.euler_characteristic(), chi);
                assert!(d.min_gap_log10() >= 3.0);
            }
        }
    }
}

#[test]
fn dimensions_are_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for rep in witnesses(3) {
        let a = cohomology(&rep).unwrap();
        let b = cohomology(&conjugate(&rep, GroupElement::random(&mut rng))).unwrap();
        assert_eq!((a.h0_dim, a.h1_dim, a.h2_dim), (b.h0_dim, b.h1_dim, b.h2_dim));
        assert_eq!(a.lambda, b.lambda);
    }
}

#[test]
fn lambda_by_stratum() {
    let l = |s| cohomology(&solve_flat(2, s, 0).unwrap()).unwrap().lambda;
    let z = l(StratumLabel::Z);
    let t = l(StratumLabel::T);
    let g = l(StratumLabel::G);
    assert_eq!((z.kernel, z.image, z.isomorphism), (0, 6, true));
    assert_eq!((t.kernel, t.image, t.isomorphism), (4, 4, false));
    assert_eq!((g.kernel, g.image, g.isomorphism), (12, 0, false));
}

#[test]
fn off_locus_points_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let images = (0..4).map(|_| GroupElement::random(&mut rng)).collect();
    let rep = Representation::new(2, images).unwrap();
    assert!(matches!(cohomology(&rep), Err(Error::Residual { .. })));
}
