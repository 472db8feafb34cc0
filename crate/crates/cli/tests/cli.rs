use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anisoperim"))
        .args(args)
        .env_remove("ANISOPERIM_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn dual_of_l1() {
    let o = run(&["norm", "--config", &fixture("l1.json"), "--dual", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1.000000000000");
}

#[test]
fn eval_with_infinite_exponent() {
    let o = run(&["norm", "--config", &fixture("linf.json"), "--eval", "1,-2"]);
    assert_eq!(stdout(&o).trim(), "2.000000000000");
}

#[test]
fn emitted_descriptor_parses_back() {
    let o = run(&["norm", "--config", &fixture("cyl_euclid.json"), "--dim", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("n.json");
    std::fs::write(&p, stdout(&o)).unwrap();
    let o = run(&["norm", "--config", p.to_str().unwrap(), "--dual", "3,4,-1"]);
    assert_eq!(stdout(&o).trim(), "6.000000000000");
}

#[test]
fn malformed_json_reports_position() {
    let o = run(&["norm", "--config", &fixture("bad.json"), "--eval", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2 column 10"), "{}", stderr(&o));
}

#[test]
fn unknown_keys_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("n.json");
    std::fs::write(&p, r#"{"kind":"pnorm","q":1}"#).unwrap();
    let o = run(&["norm", "--config", p.to_str().unwrap(), "--eval", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown field"));
}

#[test]
fn dimension_mismatch_names_both() {
    let o = run(&["perim", "--set", &fixture("cube.json"), "--norm", &fixture("l1.json"), "--window", "-1,-1:1,1"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("dimension 3") && e.contains("dimension 2"), "{e}");
}

#[test]
fn cube_perimeters() {
    let o = run(&["perim", "--set", &fixture("cube.json"), "--norm", &fixture("linf.json")]);
    assert_eq!(stdout(&o).trim(), "6.000000000000");
    let o = run(&["slice", "--set", &fixture("cube.json"), "--norm", &fixture("cyl_euclid.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("horizontal 4.000000000000 4.000000000000"));
}

#[test]
fn slab_counterexample_on_wide_window() {
    let args = |w| {
        run(&[
            "verify",
            "--candidate",
            &fixture("slab.json"),
            "--norm",
            &fixture("cyl_euclid.json"),
            "--windows",
            w,
            "--method",
            "relaxed",
        ])
    };
    let o = args("0,2,8,8");
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "counterexample");
    assert!(!v["flips"].as_array().unwrap().is_empty());
    let o = args("0,2,2,8");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn gmin_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.csv");
    let o = run(&["gmin", "--scenario", &fixture("linear.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,u"));
    // linear data with ζ = (1, 0): u = x everywhere
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((v[2] - v[0]).abs() < 2.0 * 0.0625, "{line}");
    }
}

#[test]
fn casebook_subset_and_errors() {
    let o = run(&["casebook", "--list"]);
    assert!(stdout(&o).lines().count() >= 12);
    let o = run(&["casebook", "--run", "ex2.2-parallelogram", "--format", "json", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[0]["status"], "pass");
    let o = run(&["casebook", "--run", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["casebook", "--format", "xml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn threads_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_anisoperim"))
        .args(["norm", "--config", &fixture("l1.json"), "--eval", "1,1"])
        .env("ANISOPERIM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_and_version() {
    let o = run(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("anisoperim "));
    let o = run(&["--help"]);
    let h = stdout(&o);
    for sub in ["norm", "perim", "slice", "gmin", "verify", "casebook"] {
        assert!(h.contains(sub), "{sub}");
    }
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}
