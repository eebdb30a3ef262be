use std::path::PathBuf;
use std::process::{Command, Output};

fn vbetti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vbetti"))
        .args(args)
        .output()
        .expect("spawn vbetti")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_json(o: &Output) -> serde_json::Value {
    let err = String::from_utf8(o.stderr.clone()).expect("utf-8 stderr");
    let line = err.lines().last().expect("an error line");
    serde_json::from_str(line).expect("structured error")
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vbetti-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn betti_tables() {
    for (name, expected) in [("surface-443", "b: 1 1 8"), ("circle", "b: 1 1"), ("torus", "b: 1 2 1")] {
        let o = vbetti(&["betti", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert_eq!(stdout(&o).trim(), expected, "{name}");
    }
}

#[test]
fn virtual_poincare_polynomials() {
    for (name, expected) in [
        ("ellipses", "beta: -2 + 2*t"),
        ("surface-443", "beta: 4 - t + 3*t^2"),
        ("empty", "beta: 0"),
    ] {
        let o = vbetti(&["vbetti", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert_eq!(stdout(&o).lines().next(), Some(expected), "{name}");
    }
}

#[test]
fn chi_c_flag_reports_both_sides() {
    let o = vbetti(&["vbetti", "circle-minus-point", "--chi-c"]);
    let out = stdout(&o);
    assert!(out.contains("beta(-1): -1"), "{out}");
    assert!(out.contains("chi_c: -1 (agrees)"), "{out}");
}

#[test]
fn section_restricts_lookup() {
    let o = vbetti(&["vbetti", "surface-443", "--section", "stratification"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("beta: 4 - t + 3*t^2"));
    let o = vbetti(&["vbetti", "surface-443-fine", "--section", "cover"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn surface_spectral_sequence_tables() {
    let o = vbetti(&["mvss", "surface-443"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let expected_pages = [
        "E_1:\n  q=2: 3\n  q=1: 2 3\n  q=0: 3 3 4\n",
        "E_2:\n  q=2: 3\n  q=1: 2 3\n  q=0: 1 0 3\n",
        "E_3:\n  q=2: 3\n  q=1: 1 3\n  q=0: 1 0 2\n",
    ];
    for page in expected_pages {
        assert!(out.contains(page), "missing\n{page}\nin\n{out}");
    }
    assert!(out.contains("d_2: (0,1)->(2,0) rank 1"), "{out}");
    assert!(out.contains("E_infinity = E_3"), "{out}");
    assert!(out.contains("row sums: 3 -2 3 (!= beta 4 -1 3)"), "{out}");
    assert!(out.contains("virtual Betti condition: fails (row 0: 3 != 4"), "{out}");
    assert!(!out.contains("E_4:"));
}

#[test]
fn mvss_pages_flag_repeats_infinity() {
    let o = vbetti(&["mvss", "surface-443", "--pages", "4"]);
    let out = stdout(&o);
    assert!(out.contains("E_4:\n  q=2: 3\n  q=1: 1 3\n  q=0: 1 0 2\n"), "{out}");
    let o = vbetti(&["mvss", "surface-443", "--pages", "1"]);
    assert!(!stdout(&o).contains("E_2:"));
}

#[test]
fn mvss_json_and_tangent_circles() {
    let o = vbetti(&["--json", "mvss", "two-tangent-circles"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["b"], serde_json::json!([1, 3]));
    assert_eq!(v["pages"][0]["rows"], serde_json::json!([[2, 2], [2]]));
}

#[test]
fn single_piece_has_one_column() {
    let scene = r#"{
        "schema_version": 1,
        "complexes": {"circle": {"vertices": ["a","b","c"], "maximal_simplices": [["a","b"],["b","c"],["a","c"]]}},
        "arrangements": {"one": {"total": "circle", "pieces": [{"name": "X", "simplices": [["a","b"],["b","c"],["a","c"]]}]}}
    }"#;
    let path = scratch_file("single.json", scene);
    let o = vbetti(&["--scene", path.to_str().unwrap(), "mvss", "one"]);
    assert_eq!(o.status.code(), Some(0), "{:?}", o);
    let out = stdout(&o);
    assert!(out.contains("E_1:\n  q=1: 1\n  q=0: 1\n"), "{out}");
}

#[test]
fn weights_solutions_and_infeasibility() {
    let o = vbetti(&["weights", "surface-443"]);
    let out = stdout(&o);
    assert!(out.contains("2 solutions"));
    assert!(out.contains("solution 1: w00=1 w10=0 w11=1 w20=3 w21=2 w22=3\n  3\n  1 2\n  1 0 3"), "{out}");

    let o = vbetti(&["weights", "surface-443-rank"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("INFEASIBLE (violates: w21 >= 3)"));

    let o = vbetti(&["weights", "torus"]);
    assert!(stdout(&o).contains("1 solution\nsolution 1: w00=1 w10=0 w11=2 w20=0 w21=0 w22=1"));
}

#[test]
fn weights_constraints_file() {
    let path = scratch_file("c.txt", "w21 >= 3 # independent classes\n");
    let o = vbetti(&["weights", "surface-443", "--constraints", path.to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("eliminated by w21 >= 3 (independent classes)"), "{out}");
    assert!(out.contains("INFEASIBLE (violates: w21 >= 3)"));

    let path = scratch_file("survive.txt", "w10 = 0\n");
    let o = vbetti(&["weights", "surface-443", "--constraints", path.to_str().unwrap()]);
    assert!(stdout(&o).contains("1 surviving: w00=1 w10=0 w11=1 w20=3 w21=2 w22=3"));

    let path = scratch_file("bad.txt", "w99 >= 1\n");
    let o = vbetti(&["weights", "surface-443", "--constraints", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["code"], "validation");
}

#[test]
fn fixture_suite() {
    let o = vbetti(&["fixtures", "--run", "ellipses"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS ellipses"));
    let o = vbetti(&["fixtures", "--run", "figure-eights"]);
    assert!(stdout(&o).starts_with("PASS figure-eights"));

    let o = vbetti(&["fixtures"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" passed, 0 failed"));

    let o = vbetti(&["fixtures", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("surface-443-mvss")));
}

#[test]
fn error_contract() {
    let o = vbetti(&["betti", "no-such-complex"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["code"], "unknown-name");
    assert_eq!(e["context"]["name"], "no-such-complex");
    assert!(e["message"].is_string());

    let o = vbetti(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["code"], "usage");

    let o = vbetti(&["fixtures", "--run", "no-such-fixture"]);
    assert_eq!(o.status.code(), Some(2));

    let bad = scratch_file("bad-ref.json", r#"{"schema_version": 1, "pairs": {"p": {"total": "missing"}}}"#);
    let o = vbetti(&["--scene", bad.to_str().unwrap(), "betti", "p"]);
    assert!(matches!(o.status.code(), Some(2) | Some(3)), "{:?}", o.status);

    let bad = scratch_file("version.json", r#"{"schema_version": 7}"#);
    let o = vbetti(&["--scene", bad.to_str().unwrap(), "betti", "x"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["code"], "validation");
}

#[test]
fn strict_mode_turns_dimension_warnings_into_errors() {
    // a stratum declared 0-dimensional whose model is a circle
    let scene = r#"{
        "schema_version": 1,
        "complexes": {"circle": {"vertices": ["a","b","c"], "maximal_simplices": [["a","b"],["b","c"],["a","c"]]}},
        "stratifications": {"s": {"strata": [{"name": "c", "dim": 0, "model": {"compact": "circle"}}]}}
    }"#;
    let path = scratch_file("strict.json", scene);
    let lax = vbetti(&["--scene", path.to_str().unwrap(), "vbetti", "s"]);
    assert_eq!(lax.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&lax.stderr).contains("warning"));
    let quiet = vbetti(&["--quiet", "--scene", path.to_str().unwrap(), "vbetti", "s"]);
    assert!(quiet.stderr.is_empty());
    let strict = vbetti(&["--strict", "--scene", path.to_str().unwrap(), "vbetti", "s"]);
    assert_eq!(strict.status.code(), Some(3));
}

#[test]
fn export_round_trips_and_output_is_deterministic() {
    let exported = vbetti(&["export"]);
    assert_eq!(exported.status.code(), Some(0));
    let path = scratch_file("builtin.json", &stdout(&exported));
    let again = vbetti(&["--scene", path.to_str().unwrap(), "export"]);
    assert_eq!(stdout(&exported), stdout(&again));

    let a = vbetti(&["--scene", path.to_str().unwrap(), "mvss", "surface-443"]);
    let b = vbetti(&["mvss", "surface-443"]);
    assert_eq!(a.stdout, b.stdout);
}
