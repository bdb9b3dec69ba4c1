//! The binary's contract: JSON shape, exit status, determinism.

use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_semistable-lab");

fn run(args: &[&str]) -> (Value, Option<i32>, Vec<u8>) {
    let out = Command::new(BIN).args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code(), out.stdout)
}

#[test]
fn report_shape() {
    let (r, code, _) = run(&["class-number", "--d", "-164"]);
    assert_eq!(code, Some(0));
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "class-number");
    assert_eq!(r["inputs"]["d"], -164);
    assert!(r.get("meta").is_none());
    for c in r["checks"].as_array().unwrap() {
        for key in ["name", "expected", "actual", "pass", "provenance"] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
        assert!(["paper", "trivial", "derived"].contains(&c["provenance"].as_str().unwrap()));
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["ns-enumerate", "--bound", "3000"]).2;
    let b = run(&["ns-enumerate", "--bound", "3000"]).2;
    assert_eq!(a, b);
    let (m, _, _) = run(&["ns-enumerate", "--bound", "3000", "--meta"]);
    assert!(m["meta"]["elapsed_ms"].is_u64());
    let mut stripped = m.clone();
    stripped.as_object_mut().unwrap().remove("meta");
    assert_eq!(stripped, serde_json::from_slice::<Value>(&a).unwrap());
}

#[test]
fn large_integers_are_strings() {
    // Δ = −16·(4·10¹⁸ + 27·10²⁴) = −432000064·10¹⁸, far past 2⁵³
    let (r, code, _) = run(&[
        "curve-info",
        "--curve",
        "0,0,0,1000000,1000000000000",
        "--max-prime",
        "5",
    ]);
    assert_eq!(code, Some(0));
    let d = &r["results"]["discriminant"];
    assert!(d.is_string(), "{d}");
    assert_eq!(d.as_str().unwrap(), "-432000064000000000000000000");
    assert!(r["results"]["c4"].is_number());
}

#[test]
fn failing_check_sets_exit_status() {
    // x⁵ − x: odd part of the discriminant is −1, not a power of 3
    let (r, code, _) = run(&[
        "genus2-disc",
        "--p",
        "0,-1,0,0,0,1",
        "--q",
        "0",
        "--prime",
        "3",
    ]);
    assert_eq!(code, Some(1));
    assert_eq!(r["checks"][0]["pass"], false);
}

#[test]
fn bad_input_is_rejected() {
    let out = Command::new(BIN).arg("no-such-command").output().unwrap();
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let (_, code, _) = run(&["class-number", "--d", "-12"]);
    assert_eq!(code, Some(2));
    let (_, code, _) = run(&["verify-identities", "--ell", "7"]);
    assert_eq!(code, Some(2));
}

#[test]
fn thread_cap_is_honoured() {
    let out = Command::new(BIN)
        .args(["controlled-degree", "--p", "41", "--meta"])
        .env("SEMISTABLE_LAB_THREADS", "1")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["meta"]["threads"], 1);
}

#[test]
fn ramification_reports_breakpoints() {
    let (r, code, _) = run(&["ramification", "--orders", "6,3,3,1", "--ell", "3"]);
    assert_eq!(code, Some(0));
    let res = &r["results"];
    assert_eq!(res["phi_breakpoints"][1], serde_json::json!([1, "1/2"]));
    assert_eq!(res["conductor_exponent"], "2");
    assert_eq!(res["l4"], false);
}
