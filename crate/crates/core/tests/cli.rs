use std::path::PathBuf;
use std::process::{Command, Output};

fn repspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("repspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn solve_then_cohomology() {
    let path = scratch("z.json");
    let out = repspace(&["solve", "--genus", "2", "--stratum", "Z", "--seed", "42", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rep["stratum"], "Z");
    assert!(rep["residual"].as_f64().unwrap() <= 1e-10);
    let out = repspace(&["cohomology", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64(), v["h2"].as_u64()), (Some(0), Some(6), Some(0)));
    assert_eq!(v["lambda"]["isomorphism"], true);
}

#[test]
fn central_solve_is_a_sign_pattern() {
    let out = repspace(&["solve", "--genus", "2", "--stratum", "G"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["stratum"], "G");
    assert_eq!(v["residual"].as_f64(), Some(0.0));
    for img in v["images"].as_array().unwrap() {
        let w = img[0].as_f64().unwrap();
        assert_eq!(w.abs(), 1.0);
    }
}

#[test]
fn genus_one_irreducible_is_a_solver_failure() {
    assert_eq!(repspace(&["solve", "--genus", "1", "--stratum", "Z"]).status.code(), Some(2));
}

#[test]
fn perturbed_identity_is_rejected() {
    let path = scratch("bad.json");
    let body = r#"{"genus": 2, "images": [[0.9,0.1,0.0,0.0],[0.8,0,0.2,0],[1,0,0,0],[1,0,0,0]], "residual": 0.0}"#;
    std::fs::write(&path, body).unwrap();
    assert_eq!(repspace(&["cohomology", path.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(repspace(&["cohomology", "/nonexistent/rep.json"]).status.code(), Some(3));
}

#[test]
fn bracket_tables() {
    let cone = json(&repspace(&["bracket-table", "--model", "cone"]));
    assert_eq!(cone["reference_constant"], "-1/2");
    assert_eq!(cone["brackets"]["{x1,x2}"]["generators"], "-4*rho");
    let spatial = json(&repspace(&["bracket-table", "--model", "spatial"]));
    assert_eq!(spatial["size"], 10);
    assert_eq!(spatial["closes_linearly"], true);
    let planar = json(&repspace(&["bracket-table", "--model", "planar"]));
    assert_eq!(planar["momentum_commutes"], true);
    assert_eq!(planar["brackets"]["{x1,mu}"]["ambient"], "0");
}

#[test]
fn report_csv_and_json() {
    let out = repspace(&["report", "--genus", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "genus,stratum,h0,h1,h2,lambda_kernel,lambda_image,poisson_rank,tangent_dim\n\
         2,Z,0,6,0,0,6,6,6\n2,T,1,8,1,4,4,4,7\n2,G,3,12,3,12,0,0,10\n"
    );
    let v = json(&repspace(&["report", "--genus", "3", "--jobs", "2"]));
    assert_eq!(v["rows"][0]["h1"], 12);
    assert_eq!(v["rows"][0]["tangent_dim"], 12);
    assert_eq!(repspace(&["report", "--genus", "5"]).status.code(), Some(3));
}

#[test]
fn verify_filter_and_mutation() {
    let out = repspace(&["verify", "--only", "tangent"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let crit = v["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 1);
    assert_eq!(crit[0]["key"], "tangent");
    let bad = repspace(&["verify", "--only", "bracket-table", "--cone-constant", "1/2"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["passed"], false);
}

#[test]
fn verify_manifest_is_byte_identical() {
    let a = repspace(&["verify", "--jobs", "3"]);
    let b = repspace(&["verify"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_arguments_exit_three() {
    assert_eq!(repspace(&["solve", "--genus", "2", "--stratum", "X"]).status.code(), Some(3));
    assert_eq!(repspace(&["verify", "--cone-constant", "abc"]).status.code(), Some(3));
}
