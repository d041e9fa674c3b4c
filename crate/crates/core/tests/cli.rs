use std::process::Command;

use octabasic::cli::{run, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("octabasic").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const PROFILE: &str = "run=n-run; op=2,1; clos=2,1; cont=2,1; sing=2,1";

#[test]
fn moments_text_and_json() {
    let (code, out, _) = call(&["moments", "--family", "octabasic", "--n", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "mu_0 = 1\nmu_1 = a\nmu_2 = a*b + a^2\n");

    let (code, out, _) = call(&["moments", "--family", "octabasic", "--n", "2", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let mu2 = &doc["moments"][2]["poly"];
    assert_eq!(mu2.as_array().unwrap().len(), 2);
    assert_eq!(mu2[0]["exps"], serde_json::json!({"a": 1, "b": 1}));
    assert_eq!(mu2[1]["exps"], serde_json::json!({"a": 2}));
}

#[test]
fn specialized_moments() {
    let (code, out, _) = call(&["moments", "--family", "octabasic", "--spec", "t3", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("mu_3 = q + 2*q^2 + 2*q^3 + q^4\n"), "{out}");
    let (_, out, _) = call(&["moments", "--family", "qjacobi", "--alpha", "0", "--n", "3"]);
    assert!(out.ends_with("mu_3 = q^-3 + 2*q^-2 + 2*q^-1 + 1\n"), "{out}");
}

#[test]
fn polys_explicit_agrees() {
    for family in ["qjacobi", "sum2", "qlaguerre"] {
        let (code, out, err) = call(&["polys", "--family", family, "--n", "4", "--explicit"]);
        assert_eq!(code, EXIT_OK, "{family}: {out}{err}");
        assert!(!out.contains("FAIL"), "{family}: {out}");
    }
    let (_, out, _) = call(&["polys", "--family", "octabasic", "--n", "1"]);
    assert_eq!(out, "p_0 = 1\np_1 = x - a\n");
}

#[test]
fn stats_reports_verdicts() {
    let (code, out, _) = call(&["stats", "--n", "3", "--profile", PROFILE]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("sum over S_3: 1 + 2*q + 2*q^2 + q^3"));
    assert!(out.contains("equals 3!_q: PASS"));

    let (code, out, _) = call(&["stats", "--n", "3", "--profile", "run=n-run; op=0,0; clos=0,0; cont=0,0; sing=0,0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("equals 3!_q: FAIL"));

    let (_, out, _) = call(&["stats", "--n", "3", "--profile", PROFILE, "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let counts: Vec<(i64, u64)> = rdr.deserialize().map(Result::unwrap).collect();
    assert_eq!(counts, [(0, 1), (1, 2), (2, 2), (3, 1)]);
}

#[test]
fn verify_tables() {
    for check in ["theorem2", "theorem3", "identity35", "prop1", "odd-moments", "restricted-count"] {
        let (code, out, err) = call(&["verify", check, "--max-n", "4"]);
        assert_eq!(code, EXIT_OK, "{check}: {out}{err}");
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some(check));
        assert_eq!(lines.next(), Some("n\tresult"));
        let rows: Vec<_> = lines.collect();
        assert!(!rows.is_empty() && rows.iter().all(|r| r.ends_with("\tPASS")), "{check}: {out}");
    }
}

#[test]
fn bijection_round_trip() {
    let perm = "10 8 9 11 1 3 7 5 4 6 2";
    let (code, path, _) = call(&["bijection", "decode", "--perm", perm]);
    assert_eq!(code, EXIT_OK);
    let (code, back, _) = call(&["bijection", "encode", "--path", path.trim()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(back.trim(), perm);

    let (code, out, _) = call(&["bijection", "encode", "--path", "NE(0,0),SE(0,0)"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "1 2\n");
}

#[test]
fn measure_json() {
    let (code, out, _) = call(&["measure", "prop1", "--q", "0.5", "--max-n", "3"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["family"], "prop1");
    assert_eq!(doc["pass"], true);
    assert!(doc["max_rel_error"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn usage_errors() {
    for args in [
        &["moments", "--family", "sum2", "--spec", "t2", "--n", "2"][..],
        &["moments", "--family", "nope", "--n", "2"],
        &["bijection", "decode", "--perm", "1 1"],
        &["bijection", "encode", "--path", "SE(0,0)"],
        &["verify", "theorem1", "--max-n", "99"],
        &["stats", "--n", "3", "--profile", "garbage"],
        &[],
    ] {
        let (code, _, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_octabasic");
    let ok = Command::new(bin).args(["moments", "--family", "octabasic", "--n", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("a*b + a^2"));
    let bad = Command::new(bin).args(["moments", "--family", "sum2", "--spec", "ql", "--n", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}
