use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use repspace::strata::{
    cone_model, local_model, rows_to_csv, spatial_model, stratum_report, stratum_report_many,
};
use repspace::words::StratumLabel;

#[test]
fn cone_smooth_points_are_symplectic() {
    let cone = cone_model();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let x = cone.sample_top_point(&mut rng).unwrap();
        assert!(x[2] > 0.0);
        assert_eq!(cone.poisson_rank_at(&x).unwrap(), 2);
        assert_eq!(cone.zariski_tangent_dim(&x).unwrap(), 2);
    }
}

#[test]
fn spatial_generic_and_collinear_points() {
    let g = spatial_model(2).unwrap();
    // q1 = e1, p1 = e2, q2 = e2, p2 = e1 has zero angular momentum
    let generic = g
        .point_from_ambient(&[1., 0., 0., 0., 1., 0., 0., 1., 0., 1., 0., 0.])
        .unwrap();
    assert_eq!(g.poisson_rank_at(&generic).unwrap(), 6);
    assert_eq!(g.zariski_tangent_dim(&generic).unwrap(), 6);
    let collinear = g
        .point_from_ambient(&[1., 0., 0., 2., 0., 0., 3., 0., 0., -1., 0., 0.])
        .unwrap();
    assert_eq!(g.poisson_rank_at(&collinear).unwrap(), 4);
    assert_eq!(g.poisson_rank_at(&g.origin()).unwrap(), 0);
}

#[test]
fn relabeling_preserves_detectors() {
    let g = spatial_model(2).unwrap();
    let x = g
        .point_from_ambient(&[1., 0., 0., 0., 1., 0., 0., 1., 0., 1., 0., 0.])
        .unwrap();
    let order = [3, 7, 0, 9, 1, 5, 2, 8, 6, 4];
    let r = g.relabel(&order).unwrap();
    let y: Vec<f64> = order.iter().map(|&i| x[i]).collect();
    assert_eq!(g.zariski_tangent_dim(&x).unwrap(), r.zariski_tangent_dim(&y).unwrap());
    assert_eq!(g.poisson_rank_at(&x).unwrap(), r.poisson_rank_at(&y).unwrap());
    assert_eq!(g.zariski_tangent_dim(&g.origin()).unwrap(), r.zariski_tangent_dim(&r.origin()).unwrap());
}

#[test]
fn jacobi_modulo_relations_on_sampled_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for genus in 2..=3 {
        for s in StratumLabel::ALL {
            let m = local_model(genus, s).unwrap().model;
            let n = m.len();
            for _ in 0..40 {
                use rand::Rng;
                let (i, j, k) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                assert!(m.jacobi_holds(i, j, k).unwrap(), "{genus} {s} ({i},{j},{k})");
            }
        }
    }
}

#[test]
fn higher_genus_base_points() {
    for genus in 2..=4 {
        let z = local_model(genus, StratumLabel::Z).unwrap();
        let t = local_model(genus, StratumLabel::T).unwrap();
        let g = local_model(genus, StratumLabel::G).unwrap();
        let base = |s: &repspace::strata::LocalModelSpec| {
            let b = s.base_point();
            (
                s.model.poisson_rank_at(&b).unwrap(),
                s.model.zariski_tangent_dim(&b).unwrap(),
            )
        };
        assert_eq!(base(&z), (6 * genus - 6, 6 * genus - 6));
        let (rank, tangent) = base(&t);
        assert_eq!(rank, 2 * genus);
        let m = 2 * (genus - 1);
        let planar = if genus == 2 { 3 } else { m * m - 1 };
        assert_eq!(tangent, 2 * genus + planar);
        let (rank, tangent) = base(&g);
        assert_eq!(rank, 0);
        let dots = genus * (2 * genus + 1);
        let expected = if genus == 2 {
            dots
        } else {
            let m = 2 * genus;
            dots + m * (m - 1) * (m - 2) / 6 - m
        };
        assert_eq!(tangent, expected, "genus {genus}");
    }
}

#[test]
fn report_rows_genus_two() {
    let rows = stratum_report(2, 0).unwrap();
    let t = &rows[1];
    assert_eq!((t.h1, t.lambda_image, t.tangent_dim), (8, 4, 7));
    let g = &rows[2];
    assert_eq!((g.h1, g.lambda_image, g.tangent_dim, g.poisson_rank), (12, 0, 10, 0));
    let z = &rows[0];
    assert_eq!((z.h0, z.h1, z.h2, z.lambda_kernel), (0, 6, 0, 0));
    let csv = rows_to_csv(&rows).unwrap();
    assert!(csv.starts_with(
        "genus,stratum,h0,h1,h2,lambda_kernel,lambda_image,poisson_rank,tangent_dim\n"
    ));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn report_matches_model_dimensions_and_is_job_independent() {
    let serial = stratum_report_many(&[2, 3], 1, 1).unwrap();
    let parallel = stratum_report_many(&[2, 3], 1, 4).unwrap();
    assert_eq!(serial, parallel);
    for row in &serial {
        let spec = local_model(row.genus, row.stratum).unwrap();
        assert_eq!(row.h1, spec.ambient_dim);
    }
    let z3 = &serial[3];
    assert_eq!((z3.genus, z3.h1, z3.lambda_kernel, z3.tangent_dim), (3, 12, 0, 12));
}
