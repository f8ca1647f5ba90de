//! The verification suite: every claim the library makes, each checked by
//! a self-contained routine and collected into a deterministic manifest.
//!
//! The manifest carries no timings so that repeated runs are byte
//! identical; callers that care about runtime time the individual checks.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::canonical::to_canonical_json;
use crate::cohomology::cohomology;
use crate::error::Result;
use crate::poisson::kempf_ness::sample_pairs;
use crate::poisson::moment::{generic_configs, is_in_sp4, matmul, zero_momentum_configs};
use crate::poisson::{
    canonical_bracket, closure_to_lie_algebra, cone_reference_table, jacobiator, kempf_ness_check,
    planar_invariants, proportionality_constant, sp4_moment, spatial_invariants, InvariantSet,
};
use crate::poly::{int, rat, Rational};
use crate::strata::{cone_model, local_model};
use crate::words::{enumerate_central, orbit_type, solve_flat, StratumLabel, SOLVE_TOL};

/// The check identifiers, in manifest order.
pub const CRITERIA: [(u8, &str); 12] = [
    (1, "bracket-table"),
    (2, "cone-relation"),
    (3, "jacobi"),
    (4, "cohomology"),
    (5, "central"),
    (6, "solver"),
    (7, "lambda"),
    (8, "poisson-rank"),
    (9, "tangent"),
    (10, "sp4"),
    (11, "kempf-ness"),
    (12, "determinism"),
];

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Run only checks whose key contains this text (or whose number equals it).
    pub only: Option<String>,
    /// Expected constant relating the computed cone table to the reference.
    pub cone_constant: Rational,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            only: None,
            cone_constant: rat(-1, 2),
            seed: 0,
        }
    }
}

impl VerifyOptions {
    pub fn selects(&self, id: u8, key: &str) -> bool {
        match &self.only {
            None => true,
            Some(f) => match f.parse::<u8>() {
                Ok(n) => n == id,
                Err(_) => key.contains(f.as_str()),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub key: &'static str,
    pub passed: bool,
    pub detail: Value,
}

impl CriterionResult {
    pub fn to_json(&self) -> Value {
        json!({"id": self.id, "key": self.key, "passed": self.passed, "detail": self.detail})
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.key
        )
    }
}

#[derive(Clone, Debug)]
pub struct Manifest {
    pub results: Vec<CriterionResult>,
}

impl Manifest {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "criteria": self.results.iter().map(CriterionResult::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn to_canonical(&self) -> String {
        to_canonical_json(&self.to_json())
    }
}

/// Runs one check. Internal errors count as failures and are reported in
/// the detail.
pub fn run_criterion(id: u8, opts: &VerifyOptions) -> CriterionResult {
    let key = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, k)| *k)
        .unwrap_or("unknown");
    let outcome = match id {
        1 => bracket_table(opts),
        2 => cone_relation(),
        3 => jacobi(),
        4 => cohomology_dims(opts),
        5 => central(),
        6 => solver(opts),
        7 => lambda(opts),
        8 => poisson_rank(opts),
        9 => tangent(),
        10 => sp4(opts),
        11 => kempf_ness(opts),
        12 => determinism(opts),
        _ => Ok((false, json!("no such check"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, json!({"error": e.to_string()})));
    CriterionResult {
        id,
        key,
        passed,
        detail,
    }
}

pub fn run_verify(opts: &VerifyOptions) -> Manifest {
    let results = CRITERIA
        .iter()
        .filter(|(id, key)| opts.selects(*id, key))
        .map(|(id, _)| run_criterion(*id, opts))
        .collect();
    Manifest { results }
}

/// As [`run_verify`], with independent checks spread over `jobs` threads.
/// The manifest is identical to the serial one.
pub fn run_verify_parallel(opts: &VerifyOptions, jobs: usize) -> Manifest {
    use rayon::prelude::*;
    if jobs <= 1 {
        return run_verify(opts);
    }
    let ids: Vec<u8> = CRITERIA
        .iter()
        .filter(|(id, key)| opts.selects(*id, key))
        .map(|(id, _)| *id)
        .collect();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(_) => return run_verify(opts),
    };
    let results = pool.install(|| ids.par_iter().map(|&id| run_criterion(id, opts)).collect());
    Manifest { results }
}

type Outcome = Result<(bool, Value)>;

fn bracket_table(opts: &VerifyOptions) -> Outcome {
    let set = planar_invariants().subset(&["x1", "x2", "rho"])?;
    let table = set.bracket_table()?;
    let reference = cone_reference_table(&table.generator_vars)?;
    let measured = proportionality_constant(&table, &reference)?;
    let passed = measured.as_ref() == Some(&opts.cone_constant);
    Ok((
        passed,
        json!({
            "measured": measured.map(|c| c.to_string()),
            "expected": opts.cone_constant.to_string(),
            "table": table.to_text(),
        }),
    ))
}

fn cone_relation() -> Outcome {
    let set = planar_invariants();
    let g = |n| set.generator(n);
    let (x1, x2, rho, mu) = (g("x1")?, g("x2")?, g("rho")?, g("mu")?);
    let lhs = &(&(rho * rho) - &(x1 * x1)) - &(x2 * x2);
    let rhs = (mu * mu).scale(&int(4));
    let passed = lhs == rhs;
    Ok((passed, json!({"difference": (&lhs - &rhs).to_canonical_string()})))
}

fn jacobi_exact(set: &InvariantSet) -> Result<(usize, usize)> {
    let n = set.len();
    let (mut antisym_failures, mut jacobi_failures) = (0, 0);
    for i in 0..n {
        for j in i..n {
            let a = canonical_bracket(&set.space, &set.generators[i], &set.generators[j])?;
            let b = canonical_bracket(&set.space, &set.generators[j], &set.generators[i])?;
            if !(&a + &b).is_zero() {
                antisym_failures += 1;
            }
            for k in j..n {
                let (f, g, h) = (&set.generators[i], &set.generators[j], &set.generators[k]);
                if !jacobiator(&set.space, f, g, h)?.is_zero() {
                    jacobi_failures += 1;
                }
            }
        }
    }
    Ok((antisym_failures, jacobi_failures))
}

fn jacobi() -> Outcome {
    let planar = jacobi_exact(&planar_invariants())?;
    let spatial = jacobi_exact(&spatial_invariants(2)?)?;
    let passed = planar == (0, 0) && spatial == (0, 0);
    Ok((
        passed,
        json!({
            "planar": {"antisymmetry_failures": planar.0, "jacobi_failures": planar.1},
            "spatial": {"antisymmetry_failures": spatial.0, "jacobi_failures": spatial.1},
        }),
    ))
}

/// Smallest spectral gap (as log10) that a dimension claim may rest on.
pub const MIN_GAP_LOG10: f64 = 3.0;

fn cohomology_dims(opts: &VerifyOptions) -> Outcome {
    let mut passed = true;
    let mut rows = Vec::new();
    let expected2 = [(StratumLabel::Z, (0, 6, 0)), (StratumLabel::T, (1, 8, 1)), (StratumLabel::G, (3, 12, 3))];
    for (s, dims) in expected2 {
        let d = cohomology(&solve_flat(2, s, opts.seed)?)?;
        let ok = (d.h0_dim, d.h1_dim, d.h2_dim) == dims && d.min_gap_log10() >= MIN_GAP_LOG10;
        passed &= ok;
        rows.push(json!({"genus": 2, "stratum": s.as_str(), "dims": [d.h0_dim, d.h1_dim, d.h2_dim], "ok": ok}));
    }
    for genus in 3..=4usize {
        let target_chi = 3 * (2 - 2 * genus as i64);
        for (s, h1) in [(StratumLabel::T, 6 * genus - 4), (StratumLabel::G, 6 * genus)] {
            let d = cohomology(&solve_flat(genus, s, opts.seed)?)?;
            let ok = d.h1_dim == h1 && d.euler_characteristic() == target_chi && d.min_gap_log10() >= MIN_GAP_LOG10;
            passed &= ok;
            rows.push(json!({"genus": genus, "stratum": s.as_str(), "h1": d.h1_dim, "ok": ok}));
        }
        let mut good = 0;
        for k in 0..20u64 {
            let d = cohomology(&solve_flat(genus, StratumLabel::Z, opts.seed.wrapping_add(k))?)?;
            if d.h1_dim == 6 * genus - 6
                && d.euler_characteristic() == target_chi
                && d.min_gap_log10() >= MIN_GAP_LOG10
            {
                good += 1;
            }
        }
        passed &= good == 20;
        rows.push(json!({"genus": genus, "stratum": "Z", "samples": 20, "ok_samples": good}));
    }
    Ok((passed, json!({"rows": rows})))
}

fn central() -> Outcome {
    let mut passed = true;
    let mut counts = Vec::new();
    for genus in 1..=4usize {
        let reps = enumerate_central(genus);
        let exact = reps.iter().all(|r| r.residual == 0.0);
        passed &= reps.len() == 1 << (2 * genus) && exact;
        counts.push(json!({"genus": genus, "count": reps.len(), "exact": exact}));
    }
    Ok((passed, json!({"counts": counts})))
}

fn solver(opts: &VerifyOptions) -> Outcome {
    let mut passed = true;
    let mut rows = Vec::new();
    for genus in 2..=3usize {
        let mut good = 0;
        for k in 0..10u64 {
            let rep = solve_flat(genus, StratumLabel::Z, opts.seed.wrapping_add(k))?;
            if rep.residual <= SOLVE_TOL && orbit_type(&rep) == StratumLabel::Z {
                good += 1;
            }
        }
        let t = orbit_type(&solve_flat(genus, StratumLabel::T, opts.seed)?);
        let g = orbit_type(&solve_flat(genus, StratumLabel::G, opts.seed)?);
        let ok = good == 10 && t == StratumLabel::T && g == StratumLabel::G;
        passed &= ok;
        rows.push(json!({"genus": genus, "irreducible_ok": good, "torus": t.as_str(), "central": g.as_str()}));
    }
    Ok((passed, json!({"rows": rows})))
}

fn lambda(opts: &VerifyOptions) -> Outcome {
    let expected = [
        (StratumLabel::Z, (0, 6, true)),
        (StratumLabel::T, (4, 4, false)),
        (StratumLabel::G, (12, 0, false)),
    ];
    let mut passed = true;
    let mut rows = Vec::new();
    for (s, want) in expected {
        let l = cohomology(&solve_flat(2, s, opts.seed)?)?.lambda;
        let ok = (l.kernel, l.image, l.isomorphism) == want;
        passed &= ok;
        rows.push(json!({"stratum": s.as_str(), "kernel": l.kernel, "image": l.image, "isomorphism": l.isomorphism}));
    }
    Ok((passed, json!({"rows": rows})))
}

fn poisson_rank(opts: &VerifyOptions) -> Outcome {
    use rand::SeedableRng;
    let cone = cone_model();
    let origin = cone.poisson_rank_at(&cone.origin())?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let mut top_ok = 0;
    for _ in 0..100 {
        let x = cone.sample_top_point(&mut rng)?;
        if x[2] > 0.0 && cone.poisson_rank_at(&x)? == 2 {
            top_ok += 1;
        }
    }
    let spatial = local_model(2, StratumLabel::G)?;
    let spatial_origin = spatial.model.poisson_rank_at(&spatial.base_point())?;
    let passed = origin == 0 && top_ok == 100 && spatial_origin == 0;
    Ok((
        passed,
        json!({"cone_origin": origin, "cone_top_ok": top_ok, "spatial_origin": spatial_origin}),
    ))
}

fn tangent() -> Outcome {
    let cone = cone_model();
    let at_vertex = cone.zariski_tangent_dim(&[0.0, 0.0, 0.0])?;
    let off_vertex = cone.zariski_tangent_dim(&[1.0, 0.0, 1.0])?;
    let t = local_model(2, StratumLabel::T)?;
    let g = local_model(2, StratumLabel::G)?;
    let t_dim = t.model.zariski_tangent_dim(&t.base_point())?;
    let g_dim = g.model.zariski_tangent_dim(&g.base_point())?;
    let passed = (at_vertex, off_vertex, t_dim, g_dim) == (3, 2, 7, 10);
    Ok((
        passed,
        json!({"cone_vertex": at_vertex, "cone_smooth": off_vertex, "torus_base": t_dim, "central_base": g_dim}),
    ))
}

fn sp4(opts: &VerifyOptions) -> Outcome {
    let sc = closure_to_lie_algebra(&spatial_invariants(2)?)?;
    let jacobi = sc.satisfies_jacobi();
    let signature = sc.killing_signature();
    let mut nilpotent_ok = 0;
    for c in zero_momentum_configs(opts.seed, 200) {
        let m = sp4_moment(&c)?;
        if is_in_sp4(&m) && matmul(&m, &m).iter().flatten().all(Zero::is_zero) {
            nilpotent_ok += 1;
        }
    }
    let mut generic_ok = 0;
    for c in generic_configs(opts.seed.wrapping_add(1), 200) {
        let m = sp4_moment(&c)?;
        if is_in_sp4(&m) && !matmul(&m, &m).iter().flatten().all(Zero::is_zero) {
            generic_ok += 1;
        }
    }
    let passed = sc.dim() == 10 && jacobi && signature == (6, 4, 0) && nilpotent_ok == 200 && generic_ok == 200;
    Ok((
        passed,
        json!({
            "dimension": sc.dim(),
            "jacobi": jacobi,
            "killing_signature": [signature.0, signature.1, signature.2],
            "zero_momentum_nilpotent": nilpotent_ok,
            "generic_not_nilpotent": generic_ok,
        }),
    ))
}

/// Rotation recovery tolerance.
pub const KEMPF_NESS_TOL: f64 = 1e-9;

fn kempf_ness(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    let mut exact = 0;
    let pairs = sample_pairs(opts.seed, 100);
    for (a, b) in &pairs {
        let r = kempf_ness_check(a, b)?;
        worst = worst.max(r.error);
        if r.on_cone && r.same_invariants {
            exact += 1;
        }
    }
    let passed = worst <= KEMPF_NESS_TOL && exact == pairs.len();
    Ok((
        passed,
        json!({"pairs": pairs.len(), "exact_invariants": exact, "within_tolerance": worst <= KEMPF_NESS_TOL}),
    ))
}

fn determinism(opts: &VerifyOptions) -> Outcome {
    let inner = VerifyOptions {
        only: None,
        ..opts.clone()
    };
    let run = || {
        let results = CRITERIA
            .iter()
            .filter(|(id, _)| *id != 12)
            .map(|(id, _)| run_criterion(*id, &inner))
            .collect();
        Manifest { results }.to_canonical()
    };
    let (a, b) = (run(), run());
    Ok((a == b, json!({"bytes": a.len(), "identical": a == b})))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_by_key_and_number() {
        let opts = VerifyOptions {
            only: Some("tangent".into()),
            ..Default::default()
        };
        assert!(opts.selects(9, "tangent"));
        assert!(!opts.selects(1, "bracket-table"));
        let opts = VerifyOptions {
            only: Some("2".into()),
            ..Default::default()
        };
        assert!(opts.selects(2, "cone-relation"));
    }

    #[test]
    fn mutated_constant_fails() {
        let opts = VerifyOptions {
            cone_constant: rat(1, 2),
            ..Default::default()
        };
        assert!(!run_criterion(1, &opts).passed);
        assert!(run_criterion(1, &VerifyOptions::default()).passed);
    }
}
