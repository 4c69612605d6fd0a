use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nse-sym"))
        .args(args)
        .env_remove("BOUTON_FORMS_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = run(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn classify_leray_exponents() {
    let (code, v) = json(&["classify", "--ax", "1", "--at", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "supercritical");
    assert_eq!(v["energy_exponent"], "1");
    assert_eq!(v["velocity_exponent"], "-1");
    for key in ["scenario", "blowup_excluded", "severity_verdict"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn negative_rational_exponents_parse() {
    let (code, v) = json(&["scenario", "--ax", "-20", "--at", "-40"]);
    assert_eq!(code, 0);
    assert_eq!(v["scenario"], 4);
    assert_eq!(v["blowup_excluded"], true);
    let (_, v) = json(&["classify", "--ax", "3/2", "--at", "-1/3"]);
    assert_eq!(v["alpha_x"], "3/2");
}

#[test]
fn speed_squared_weight() {
    let (code, v) = json(&["weights", "--expr", "u^2+v^2+w^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["weight"], serde_json::json!(["2", "-2"]));
    let (code, v) = json(&["weights", "--expr", "u+x"]);
    assert_eq!(code, 1);
    assert_eq!(v["isobaric"], false);
}

#[test]
fn top_form_verifies() {
    let (code, v) = json(&["verify-form", "--k", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    assert_eq!(v["generators"], 5);
}

#[test]
fn failing_form_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    std::fs::write(&path, "dx /\\ dp\n").unwrap();
    let (code, v) = json(&["verify-form", "--form", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let x = v["checks"].as_array().unwrap().iter().find(|c| c["generator"] == "X").unwrap();
    assert_eq!(x["passed"], false);
    assert!(x["failures"][0]["witness"]["point"].is_object());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["classify", "--ax", "1", "--at", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["verify-form", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--ax", "0", "--at", "0"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--ax", "1/0", "--at", "1"]).status.code(), Some(2));
    assert_eq!(run(&["weights", "--expr", "u^"]).status.code(), Some(2));
    assert_eq!(run(&["apply", "--generator", "Q", "--expr", "x"]).status.code(), Some(2));
    let out = run(&["verify-form", "--k", "1"]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert_eq!(msg.lines().count(), 1, "{msg}");
}

#[test]
fn solution_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.txt");
    std::fs::write(&path, "u = x/(t+tau)\nv = -y/(t+tau)\nw = 0\np = -y^2/(t+tau)^2\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = json(&["residual", "--file", p]);
    assert_eq!(code, 0);
    assert_eq!(v["all_structural"], true);
    let (code, v) = json(&["euler", "--file", p]);
    assert_eq!(code, 0);
    assert_eq!(v["time_independent"], true);
    std::fs::write(&path, "u = x\nv = 0\nw = 0\np = 0\n").unwrap();
    assert_eq!(run(&["residual", "--file", p]).status.code(), Some(1));
}

#[test]
fn solve_forms_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = run(&["solve-forms", "--k", "1", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for key in ["k", "unknowns", "rows", "singular_values", "nullspace_dim", "forms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["nullspace_dim"], 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("nullspace dimension 0"));
}

#[test]
fn solve_three_forms() {
    let (code, v) = json(&["solve-forms", "--k", "3", "--samples", "auto", "--threads", "2"]);
    assert_eq!(code, 0);
    let forms = v["forms"].as_array().unwrap();
    assert_eq!(forms.len(), 2);
    assert!(forms.iter().all(|f| f["verified"] == true && f["terms"].is_array() && f["residual"].is_number()));
    assert_eq!(v["comparison"]["status"], "in span");
}

#[test]
fn seeded_runs_are_identical() {
    let a = run(&["reproduce", "--suite", "properties", "--seed", "7", "--json"]);
    let b = run(&["reproduce", "--suite", "properties", "--seed", "7", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_nse-sym"))
        .args(["reproduce", "--suite", "properties", "--json"])
        .env("BOUTON_FORMS_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_nse-sym"))
        .args(["classify", "--ax", "1", "--at", "2"])
        .env("BOUTON_FORMS_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn table_suite_passes() {
    let (code, v) = json(&["reproduce", "--suite", "paper-table"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn generator_application_and_lie() {
    let (_, v) = json(&["apply", "--generator", "X1", "--expr", "y/x"]);
    assert_eq!(v["annihilated"], true);
    let (_, v) = json(&["apply", "--transform", "scale:ax=1,at=2", "--expr", "u^2+v^2+w^2"]);
    assert_eq!(v["covariance"]["verdict"]["Covariant"]["exponent"], "-2");
    let (code, v) = json(&["lie", "--generator", "X", "--form", "dx /\\ dp"]);
    assert_eq!(code, 0);
    assert_eq!(v["terms"][0]["tuple"], "dx^dp");
}

#[test]
fn ansatz_checks() {
    let (code, v) = json(&["ansatz", "--ax", "1", "--at", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["covariance"][3]["exponent"], "-2");
    let (code, _) = json(&["ansatz", "--family", "classical", "--system", "separate"]);
    assert_eq!(code, 0);
    assert_eq!(run(&["ansatz", "--ax", "1", "--at", "0"]).status.code(), Some(2));
}
