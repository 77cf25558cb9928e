use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simapprox")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn put(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, v.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn worked() -> Value {
    json!({"problem": "svp", "norm": "inf", "alpha": "1", "matrix": [["1", "1"], ["2", "1"]]})
}

#[test]
fn solve_examples() {
    let dir = TempDir::new().unwrap();
    let svp = put(&dir, "svp.json", &json!({"problem": "svp", "norm": "2", "matrix": [[1, 0], [0, 5]]}));
    let out = run(&["solve", "--input", s(&svp)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["q"], json!(["1", "0"]));

    let sap = put(&dir, "sap.json", &json!({"problem": "sap", "norm": "inf", "x": ["1/3", "1/3"]}));
    let out = run(&["solve", "--input", s(&sap)]);
    assert_eq!(stdout_json(&out)["q"], "1");
    assert_eq!(stdout_json(&out)["value"], "1/3");

    let gda = put(&dir, "gda.json", &json!({"problem": "gda", "norm": "inf", "x": ["1/4", "3/4"], "N": "2"}));
    let out = run(&["solve", "--input", s(&gda)]);
    assert_eq!(stdout_json(&out)["q"], "1");
}

#[test]
fn gen_solve_verify_roundtrip() {
    let dir = TempDir::new().unwrap();
    for (problem, bound) in [("svp", "6"), ("sap", "40"), ("gda", "40")] {
        for norm in ["1", "2", "inf"] {
            let inst = dir.path().join(format!("{problem}{norm}.json"));
            let sol = dir.path().join(format!("{problem}{norm}.sol.json"));
            let gen = run(&[
                "gen", "--problem", problem, "-n", "3", "--bound", bound, "--norm", norm, "--seed", "11", "--count", "12",
                "--output", s(&inst),
            ]);
            assert_eq!(code(&gen), 0);
            let solve = run(&["solve", "-i", s(&inst), "--jobs", "4", "-o", s(&sol)]);
            assert_eq!(code(&solve), 0, "{}", String::from_utf8_lossy(&solve.stderr));
            let verify = run(&["verify", "-i", s(&inst), "-s", s(&sol)]);
            assert_eq!(code(&verify), 0);
            let text = String::from_utf8(verify.stdout).unwrap();
            assert_eq!(text.lines().filter(|l| l.contains("] pass")).count(), 12, "{text}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let gen = |seed: &str| run(&["gen", "--problem", "svp", "-n", "3", "--seed", seed, "--count", "8"]).stdout;
    assert_eq!(gen("5"), gen("5"));
    assert_ne!(gen("5"), gen("6"));
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("b.json");
    fs::write(&inst, gen("5")).unwrap();
    let one = run(&["solve", "-i", s(&inst), "--jobs", "1"]).stdout;
    let four = run(&["solve", "-i", s(&inst), "--jobs", "4"]).stdout;
    assert_eq!(one, four);
}

#[test]
fn reduce_worked_instance_and_replay() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "w.json", &worked());
    let cert = dir.path().join("c.json");
    let out = run(&["reduce", "-i", s(&inst), "--route", "svp-to-sap", "--oracle", "brute", "-o", s(&cert)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let im = &v["intermediates"];
    assert_eq!((&im["p"], &im["row_exponents"], &im["c"], &im["j"]), (&json!("3"), &json!([1]), &json!("4"), &json!(9)));
    let replayed = run(&["verify", "--certificate", s(&cert)]);
    assert_eq!(code(&replayed), 0);
    assert!(String::from_utf8_lossy(&replayed.stdout).starts_with("replay ok, pass"));

    let mut forged = v.clone();
    forged["trace"][0]["response"] = json!("5");
    let forged = put(&dir, "forged.json", &forged);
    assert_eq!(code(&run(&["verify", "--certificate", s(&forged)])), 5);
}

#[test]
fn reduce_trace_examples() {
    let dir = TempDir::new().unwrap();
    let skipped = put(&dir, "g.json", &json!({"problem": "gda", "norm": "1", "alpha": "2", "x": ["1/2", "1/2"], "N": "3"}));
    let out = run(&["reduce", "-i", s(&skipped), "--route", "gda-to-sap"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["trace"], json!([]));

    let sap = put(&dir, "s.json", &json!({"problem": "sap", "norm": "inf", "x": ["1/3", "2/3"]}));
    let out = run(&["reduce", "-i", s(&sap), "--route", "sap-to-svp"]);
    assert_eq!(stdout_json(&out)["intermediates"]["matrix"], json!([["1", "0"], ["2", "3"]]));
}

#[test]
fn every_route_with_the_worst_oracle() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("gda-to-sap", json!({"problem": "gda", "norm": "inf", "alpha": "4", "x": ["3/17", "5/17"], "N": "4"})),
        ("gda-to-svp", json!({"problem": "gda", "norm": "inf", "alpha": "4", "x": ["3/17", "5/17"], "N": "4"})),
        ("sap-to-svp", json!({"problem": "sap", "norm": "inf", "alpha": "3/2", "x": ["2/7", "3/7"]})),
        ("sap-to-gda", json!({"problem": "sap", "norm": "inf", "alpha": "3/2", "x": ["2/7", "3/7"]})),
        ("svp-to-sap", json!({"problem": "svp", "norm": "1", "alpha": "2", "matrix": [[3, 1], [1, 4]]})),
        ("svp-to-gda", json!({"problem": "svp", "norm": "2", "alpha": "2", "matrix": [[3, 1], [1, 4]]})),
    ];
    for (route, inst) in cases {
        let inst = put(&dir, "i.json", &inst);
        let cert = dir.path().join(format!("{route}.json"));
        let out = run(&["reduce", "-i", s(&inst), "--route", route, "--oracle", "worst", "-o", s(&cert)]);
        assert_eq!(code(&out), 0, "{route}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(code(&run(&["verify", "--certificate", s(&cert)])), 0, "{route}");
    }
}

#[test]
fn verify_failures() {
    let dir = TempDir::new().unwrap();
    let svp = put(&dir, "svp.json", &json!({"problem": "svp", "norm": "2", "matrix": [[1, 0], [0, 5]]}));
    let zero = put(&dir, "zero.json", &json!(["0", "0"]));
    let out = run(&["verify", "-i", s(&svp), "-s", s(&zero)]);
    assert_eq!(code(&out), 5);
    assert!(String::from_utf8_lossy(&out.stdout).contains("zero output"));

    let gda = put(&dir, "gda.json", &json!({"problem": "gda", "norm": "inf", "x": ["1/4", "3/4"], "N": "2"}));
    let far = put(&dir, "far.json", &json!("3"));
    let report = dir.path().join("verdict.json");
    let out = run(&["verify", "-i", s(&gda), "-s", s(&far), "-o", s(&report)]);
    assert_eq!(code(&out), 5);
    let verdict: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(verdict["reason"], "range");

    let long = put(&dir, "long.json", &json!({"q": ["0", "1"]}));
    let out = run(&["verify", "-i", s(&svp), "-s", s(&long)]);
    assert_eq!(code(&out), 5);
    assert!(String::from_utf8_lossy(&out.stdout).contains("ratio^2 = 25 > alpha^2 = 1"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&run(&["solve", "-i", s(&bad)])), 2);
    assert_eq!(code(&run(&["solve", "-i", s(&dir.path().join("missing.json"))])), 2);
    assert_eq!(code(&run(&["reduce", "-i", s(&bad), "--route", "svp-to-cvp"])), 2);

    let inst = put(&dir, "w.json", &worked());
    assert_eq!(code(&run(&["reduce", "-i", s(&inst), "--route", "sap-to-svp"])), 3);
    let low = put(&dir, "low.json", &json!({"problem": "sap", "norm": "inf", "alpha": "1/2", "x": ["1/3"]}));
    assert_eq!(code(&run(&["reduce", "-i", s(&low), "--route", "sap-to-svp"])), 3);
    assert_eq!(code(&run(&["solve", "-i", s(&inst), "--max-dim", "1"])), 4);
    let big = put(&dir, "big.json", &json!({"problem": "svp", "norm": "2", "matrix": [[97, 1, 3], [2, 89, 5], [7, 11, 91]]}));
    assert_eq!(code(&run(&["solve", "-i", s(&big), "--max-points", "2"])), 4);
}

#[test]
fn relaxed_gap_flag() {
    let dir = TempDir::new().unwrap();
    let mut inst = worked();
    inst["alpha"] = json!("2");
    let inst = put(&dir, "w.json", &inst);
    let out = run(&["reduce", "-i", s(&inst), "--route", "svp-to-sap", "--alpha-prime", "1", "--oracle", "worst"]);
    assert_eq!(code(&out), 0);
    let cert = stdout_json(&out);
    assert_eq!(cert["alpha_prime"], "1");
    assert_eq!(cert["intermediates"]["j"], 3);
}
