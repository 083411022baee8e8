use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardylab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn verify_disc_convex_improved() {
    let out = run(&["verify", "--domain", "disc:R=1", "--ineq", "convex-improved", "--p", "2", "--band", "0.1,0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["version"], "hardy-lab/1");
    assert_eq!(r["passed"], true);
    assert!(r["results"][0]["ratio"].as_f64().unwrap() >= 1.0);
    assert_eq!(r["environment"]["seed"], 0);
}

#[test]
fn geometry_check_torus() {
    let out = run(&["geometry-check", "--domain", "torus:R=3,r=1", "--samples", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"][0];
    assert_eq!(r["negative"], 1000);
    assert_eq!(r["sign_violations"], 0);
}

#[test]
fn invariance_under_inversion() {
    let out = run(&["invariance", "--map", "sqrt-quadratic:rho=0.5,R=2", "--transform", "inversion"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"][0]["report"];
    assert!(r["max_rel_deviation"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn disc_sweep_gives_ten_rows() {
    let out = run(&[
        "sweep",
        "--domain",
        "disc:R=1",
        "--ineq",
        "convex-improved",
        "--bands",
        "0.05,0.3;0.1,0.4;0.1,0.6;0.2,0.7;0.3,0.9",
        "--profiles",
        "smooth-bump;power-bump:q=0.5,ramp=10",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "domain", "ineq", "p", "band_a", "band_b", "profile", "resolution", "lhs", "rhs", "ratio", "min_weight",
            "converged"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    for row in rows {
        assert!(row[9].parse::<f64>().unwrap() >= 1.0);
    }
}

#[test]
fn empty_range_is_a_config_error() {
    let out = run(&["sweep", "--domain", "disc:R=1", "--ineq", "convex-improved", "--bands", ""]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn fmt_compare_sweep() {
    let out = run(&["sweep", "--domain", "disc:R=1", "--ineq", "fmt-compare", "--alphas=-1.5,-1,0,1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row[4].parse::<f64>().unwrap() >= 0.0);
        assert_eq!(&row[5], "0");
    }
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["verify", "--domain", "disc:R=-1", "--band", "0.1,0.5"][..],
        &["verify", "--domain", "annulus:rho=1,R=3", "--ineq", "convex-improved", "--band", "0.1,0.5"],
        &["verify", "--domain", "disc:R=1", "--p", "1", "--band", "0.1,0.5"],
        &["constant", "--domain", "exterior-disc:rho=1"],
        &["invariance", "--map", "sqrt-quadratic:rho=0.5,R=2", "--transform", "scale:s=0"],
        &["geometry-check", "--domain", "disc:R=1", "--format", "csv"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn thread_cap_must_be_positive() {
    let out = Command::new(env!("CARGO_BIN_EXE_hardylab"))
        .args(["invariance", "--map", "identity-annulus:rho=1,R=3", "--transform", "inversion"])
        .env("HARDYLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["verify", "--domain", "ellipse:a=2,b=1", "--ineq", "convex-improved", "--band", "0.05,0.4"];
    let stdout = run(&args).stdout;
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let out = run(&with_file);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    // only the config echo differs
    let mut a: Value = serde_json::from_slice(&written).unwrap();
    let mut b: Value = serde_json::from_slice(&stdout).unwrap();
    a["config"] = Value::Null;
    b["config"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn pullback_through_the_cli() {
    let out = run(&["verify", "--map", "sqrt-quadratic:rho=1.5,R=3", "--band", "0.1,0.4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"][0];
    assert!(r["ratio"].as_f64().unwrap() >= 1.0);
    assert_eq!(r["identity_holds"], true);
}

#[test]
fn hyperboloid_sign_claim_is_reported() {
    let out = run(&["geometry-check", "--domain", "hyperboloid:s_max=2", "--samples", "500"]);
    let r = json(&out);
    let res = &r["results"][0];
    assert_eq!(res["expected_sign"], "both-signs");
    // the distance Laplacian stays non-positive on the hyperboloid
    assert_eq!(res["positive"], 0);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(r["passed"], false);
}
