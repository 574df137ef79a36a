//! End-to-end runs of the binary: exit codes, report shape, and the
//! documented command examples.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isoparam"))
}

fn doc(name: &str) -> String {
    format!("{}/../../docs/examples/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

#[test]
fn classify_b3_symbol_and_orbits() {
    let out = run(&["classify", &doc("b3.json"), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "classify");
    assert_eq!(v["results"][0]["detail"], "B~3");
    assert_eq!(v["results"][1]["detail"], 2);
    // Report shape per the shipped schema.
    assert!(v["inputs_digest"].as_str().unwrap().len() == 64);
    for r in v["results"].as_array().unwrap() {
        assert!(r["pass"].is_boolean());
        assert!(r["exact"].is_boolean());
        assert!(r["name"].is_string());
    }
}

#[test]
fn classify_reducible_c2_is_nonreduced_symbol() {
    let out = run(&["classify", &doc("c2_reducible.json"), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["results"][0]["detail"], "(C~2v,C~2)");
}

#[test]
fn malformed_rational_is_usage_error() {
    let tmp = std::env::temp_dir().join("isoparam-bad-doc.json");
    std::fs::write(
        &tmp,
        r#"{"dim":2,"families":[{"label":"x","direction":["1","0"],"spacing":"1/0","phase":"0"}],
           "basepoint":["0","0"],"window_radius":"2"}"#,
    )
    .unwrap();
    let out = run(&["classify", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_a2_exits_zero_and_embeds_seed() {
    let out = run(&[
        "verify", "--model", "a2", "--trials", "40", "--seed", "7", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["seed"], 7);
    assert!(v["results"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["pass"] == true));
    assert!(v["results"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["name"] == "gamma-reconstruction"));
}

#[test]
fn verify_bc2_reports_reducible_blocks() {
    let out = run(&["verify", "--model", "bc2", "--trials", "10", "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("orthogonal-pair-vanishing"));
    assert!(text.contains("same-sphere-blocks"));
}

#[test]
fn verify_unknown_model_is_usage_error() {
    let out = run(&["verify", "--model", "g2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("unknown model"), "{err}");
}

#[test]
fn support_examples() {
    let out = run(&["support", "A~3", "0", "7", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["results"][0]["detail"]["components"]
            .as_array()
            .unwrap()
            .len(),
        0
    );

    let out = run(&["support", "C~3", "0", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let comps: Vec<String> = v["results"][0]["detail"]["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().to_string())
        .collect();
    assert_eq!(comps, vec!["(-1)", "(2)"]);

    let out = run(&[
        "support",
        "C~3",
        "0",
        "2",
        "--reducible",
        "--block",
        "double-primed",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["results"][0]["detail"]["components"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
    assert_eq!(v["results"][0]["detail"]["zero"], true);

    let out = run(&["support", "C~3", "1", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn restrict_b3_span_gives_c2() {
    let out = run(&[
        "restrict",
        &doc("b3.json"),
        "--span",
        "m12,s2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["results"][1]["detail"], "C~2");
}

#[test]
fn diagram_dot_output() {
    let out = run(&["diagram", &doc("c2_reducible.json"), "--format", "dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("digraph"));
    assert!(text.contains("peripheries=2"));
    assert!(text.contains("multiplicity=2"));
}

#[test]
fn normal_sum_command() {
    let out = run(&[
        "normal-sum",
        "--d0",
        "1/2",
        "--d",
        "1",
        "--precision",
        "1/1000000",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let lo = v["results"][0]["detail"]["lo_f64"].as_f64().unwrap();
    let hi = v["results"][0]["detail"]["hi_f64"].as_f64().unwrap();
    assert!(lo <= 9.869604401089358 && 9.869604401089359 <= hi);
}

#[test]
fn euclid_scan_small_grid() {
    let out = run(&[
        "euclid-scan",
        "--max-line",
        "3",
        "--max-denom",
        "2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["pass"], true);
        assert_eq!(r["detail"]["violations"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn byte_identical_reports_for_same_inputs() {
    let a = run(&[
        "verify", "--model", "b2", "--trials", "25", "--seed", "3", "--format", "json",
    ]);
    let b = run(&[
        "verify", "--model", "b2", "--trials", "25", "--seed", "3", "--format", "json",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
    let c = run(&[
        "verify", "--model", "b2", "--trials", "25", "--seed", "4", "--format", "json",
    ]);
    assert!(stdout(&a) != stdout(&c));
}

#[test]
fn axioms_command_passes_for_c2() {
    let out = run(&["axioms", &doc("c2_reducible.json"), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
    assert!(v["results"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["pass"] == true));
}
