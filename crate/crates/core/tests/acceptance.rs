//! One line per acceptance criterion, with the tolerance it is judged by
//! and a wall-clock bound.

use std::time::{Duration, Instant};

use repspace::verify::{run_criterion, run_verify, VerifyOptions, CRITERIA};

/// (id, tolerance description, runtime bound in seconds)
const PINNED: [(u8, &str, u64); 12] = [
    (1, "exact rational; constant must equal -1/2", 1),
    (2, "exact polynomial identity", 1),
    (3, "exact, all generator triples", 10),
    (4, "relative rank threshold 1e-8, spectral gap >= 1e3", 30),
    (5, "residual exactly 0", 5),
    (6, "residual <= 1e-10, commutation tolerance 1e-8", 60),
    (7, "relative rank threshold 1e-8", 10),
    (8, "relative rank threshold 1e-8, feasibility 1e-10", 10),
    (9, "relative rank threshold 1e-8, feasibility 1e-10", 10),
    (10, "exact rational", 30),
    (11, "rotation error <= 1e-9, cone identity exact", 5),
    (12, "byte-identical canonical manifests", 120),
];

#[test]
fn acceptance() {
    let opts = VerifyOptions::default();
    let mut failures = Vec::new();
    for ((id, key), (pid, tolerance, bound)) in CRITERIA.iter().zip(PINNED) {
        assert_eq!(*id, pid);
        let start = Instant::now();
        let result = run_criterion(*id, &opts);
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(bound);
        let ok = result.passed && in_time;
        println!(
            "criterion {id:>2} {key:<14} {} | {tolerance} | {:.3}s (bound {bound}s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !ok {
            failures.push((*id, result.detail.to_string()));
        }
    }
    // the full manifest twice, as a user would run it
    let first = run_verify(&opts).to_canonical();
    let second = run_verify(&opts).to_canonical();
    let same = first == second;
    println!("manifest rerun             {} | byte-identical", if same { "PASS" } else { "FAIL" });
    assert!(same);
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
