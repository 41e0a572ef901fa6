use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adsbend")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(text.lines().last().expect("stderr line")).expect("stderr is JSON")
}

fn workspace() -> tempfile::TempDir {
    let d = tempfile::tempdir().unwrap();
    let files = [
        ("lamL.json", r#"{"leaves":[{"a":"0","b":"1/2","w":"2"}]}"#),
        ("lamR.json", r#"{"leaves":[{"a":"1/4","b":"3/4","w":"2"}]}"#),
        ("cross.json", r#"{"leaves":[{"a":"0","b":"1/2","w":"1"},{"a":"1/4","b":"3/4","w":"1"}]}"#),
        (
            "map.json",
            r#"{"points":[{"x":"0","v":"1/20"},{"x":"1/4","v":"1/4"},{"x":"1/2","v":"9/20"},{"x":"3/4","v":"3/4"},{"x":"7/8","v":"0.9"}]}"#,
        ),
        (
            "tight.json",
            r#"{"vertices":[{"pos":"0","type":"plus"},{"pos":"1/4","type":"minus"},{"pos":"1/2","type":"plus"},{"pos":"3/4","type":"minus"}],
                "edges":[{"i":0,"j":1,"kind":"equator","w":"-2"},{"i":1,"j":2,"kind":"equator","w":"0"},
                         {"i":2,"j":3,"kind":"equator","w":"-2"},{"i":3,"j":0,"kind":"equator","w":"0"},
                         {"i":0,"j":2,"kind":"plus","w":"2"},{"i":1,"j":3,"kind":"minus","w":"2"}]}"#,
        ),
    ];
    for (name, text) in files {
        std::fs::write(d.path().join(name), text).unwrap();
    }
    d
}

#[test]
fn validate_exit_codes() {
    let d = workspace();
    let ok = run(d.path(), &["lam", "validate", "lamL.json"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout_json(&ok)["valid"], true);
    let bad = run(d.path(), &["lam", "validate", "cross.json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(stderr_json(&bad)["error"], "invalid_lamination");
    let strict = run(d.path(), &["lam", "distance", "cross.json", "lamL.json"]);
    assert_eq!(strict.status.code(), Some(1));
    let loose = run(d.path(), &["--allow-invalid", "lam", "distance", "cross.json", "lamL.json"]);
    assert_eq!(loose.status.code(), Some(0));
}

#[test]
fn unknown_flags_are_rejected() {
    let d = workspace();
    let o = run(d.path(), &["lam", "validate", "lamL.json", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "usage");
}

#[test]
fn graph_check_reports_tight_gap_pair() {
    let d = workspace();
    let o = run(d.path(), &["graph", "check", "tight.json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["condition3"], true);
    assert_eq!(v["condition4"], false);
    assert_eq!(v["gap_violations"], serde_json::json!([[0, 2]]));
}

#[test]
fn fixpoint_on_square_diagonals() {
    let d = workspace();
    let o = run(d.path(), &["quake", "fixpoint", "lamL.json", "lamR.json", "--map-out", "ur.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout_json(&o)["residual"].as_f64().unwrap() < 1e-6);
    let q = run(d.path(), &["qs", "constant", "ur.json"]);
    assert_eq!(q.status.code(), Some(0));
}

#[test]
fn pipeline_artifacts_reparse() {
    let d = workspace();
    let steps: [&[&str]; 6] = [
        &["graph", "build", "lamR.json", "lamL.json", "--k", "4", "-o", "g.json"],
        &["graph", "check", "g.json"],
        &["poly", "realize", "g.json", "-o", "p.json"],
        &["poly", "bend", "p.json", "--minus-out", "bm.json", "--plus-out", "bp.json"],
        &["lam", "validate", "bp.json"],
        &["mess", "check22", "p.json"],
    ];
    for s in steps {
        let o = run(d.path(), s);
        assert_eq!(o.status.code(), Some(0), "{s:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let w = stdout_json(&run(d.path(), &["poly", "width", "p.json"]))["width"].as_f64().unwrap();
    assert!(w > 0.0 && w < std::f64::consts::FRAC_PI_2);
    let a = stdout_json(&run(d.path(), &["poly", "angles", "p.json"]));
    assert_eq!(a["angles"].as_array().unwrap().len(), 6);
}

#[test]
fn outputs_are_reproducible() {
    let d = workspace();
    let args = ["poly", "realize", "tight.json", "--seed", "5"];
    let g = run(d.path(), &["graph", "build", "lamR.json", "lamL.json", "--k", "4", "-o", "g.json"]);
    assert!(g.status.success());
    let args2 = ["poly", "realize", "g.json", "--seed", "5"];
    let (a, b) = (run(d.path(), &args2), run(d.path(), &args2));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run(d.path(), &args).status.code(), Some(1));
}

#[test]
fn solver_failure_exits_two() {
    let d = workspace();
    assert!(run(d.path(), &["graph", "build", "lamR.json", "lamL.json", "--k", "4", "-o", "g.json"]).status.success());
    let o = run(d.path(), &["poly", "realize", "g.json", "--tol", "1e-300", "--starts", "1", "--max-iter", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "non_convergence");
}

#[test]
fn hull_quake_and_qs_commands() {
    let d = workspace();
    assert!(run(d.path(), &["poly", "hull", "map.json", "-o", "h.json"]).status.success());
    assert!(run(d.path(), &["mess", "check23", "h.json"]).status.success());
    let n = run(d.path(), &["qs", "normalize", "map.json", "-o", "n.json"]);
    assert!(n.status.success());
    let k1 = stdout_json(&run(d.path(), &["qs", "constant", "map.json"]))["k"].as_f64().unwrap();
    let k2 = stdout_json(&run(d.path(), &["qs", "constant", "n.json", "--eps", "1/2"]))["k"].as_f64().unwrap();
    assert!((k1 - k2).abs() < 1e-9);
    let e = run(d.path(), &["quake", "eval", "lamL.json", "--side", "left", "--base", "3/4", "--at", "1/4", "5/8"]);
    assert!(e.status.success());
    let pts = stdout_json(&e)["points"].as_array().unwrap().clone();
    assert_eq!(pts[0]["x"], "1/4");
    assert!(run(d.path(), &["quake", "op", "lamL.json", "map.json", "-o", "op.json"]).status.success());
    assert!(run(d.path(), &["quake", "flowcheck", "lamL.json", "--side", "right", "--samples", "50"]).status.success());
    let unfilled = run(d.path(), &["quake", "fixpoint", "lamL.json", "lamL.json"]);
    assert_eq!(stderr_json(&unfilled)["error"], "not_weakly_filling");
}

#[test]
fn plots_are_svg() {
    let d = workspace();
    assert!(run(d.path(), &["poly", "hull", "map.json", "-o", "h.json"]).status.success());
    for args in [
        &["plot", "lam", "lamL.json", "--with", "lamR.json", "-o", "l.svg"][..],
        &["plot", "circle", "map.json", "-o", "c.svg"],
        &["plot", "poly", "h.json", "-o", "p.svg"],
    ] {
        let o = run(d.path(), args);
        assert!(o.status.success(), "{args:?}");
        let text = std::fs::read_to_string(d.path().join(args[args.len() - 1])).unwrap();
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn thread_cap_is_validated() {
    let d = workspace();
    let o = Command::new(env!("CARGO_BIN_EXE_adsbend"))
        .current_dir(d.path())
        .env("ADSBEND_THREADS", "2")
        .args(["poly", "hull", "map.json"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_adsbend")).current_dir(d.path()).env("ADSBEND_THREADS", "0").args(["poly", "hull", "map.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
