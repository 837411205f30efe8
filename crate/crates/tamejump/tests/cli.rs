//! End-to-end runs of the `tamejump` binary.

use std::process::{Command, Output};

use serde_json::Value;
use tamejump::dto::{GroupJson, ZetaInputJson};

fn tamejump(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamejump")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = tamejump(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

#[test]
fn jumps_render_as_exact_fractions() {
    assert_eq!(ok(&["jumps", "induced", "--e", "2", "--f", "3"]), "0:3, 1/2:3\n");
    assert_eq!(ok(&["jumps", "nu1", "--r", "2", "--p", "3"]), "0:2, 1/3:3, 2/3:3\n");
    assert_eq!(ok(&["jumps", "induced", "--e", "1", "--f", "1"]), "0:1\n");
    assert_eq!(ok(&["--format", "csv", "jumps", "corpus", "t1"]), "jump,multiplicity\n1/4,1\n3/4,1\n");
    assert_eq!(ok(&["--format", "tex", "jumps", "corpus", "t2"]), "$\\{\\tfrac{1}{2}^{(1)}\\}$\n");
}

#[test]
fn errors_are_json_on_stderr() {
    let out = tamejump(&["jumps", "json", "{\"kind\": \"induced_torus\", \"e\": 2}"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "descriptor");
    assert_eq!(err["exit_code"], 2);

    let out = tamejump(&["ord", "--d", "2", "--q", "1", "induced", "--e", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "below_threshold");
    assert!(out.stdout.is_empty());
}

#[test]
fn json_output_round_trips() {
    let text = ok(&["--format", "json", "jumps", "corpus", "sum_induced_nu1"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let group: GroupJson = serde_json::from_value(v["group"].clone()).unwrap();
    let again = ok(&["--p", "2", "jumps", "json", &serde_json::to_string(&group).unwrap()]);
    assert_eq!(again, ok(&["jumps", "corpus", "sum_induced_nu1"]));

    let text = ok(&["--format", "json", "zeta", "--closed-form", "corpus", "twisted_tate_curve"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let input: ZetaInputJson = serde_json::from_value(v["input"].clone()).unwrap();
    let again = ok(&["--format", "json", "zeta", "--closed-form", "json", &serde_json::to_string(&input).unwrap()]);
    assert_eq!(again, text);
}

#[test]
fn zeta_truncation_and_verification() {
    assert_eq!(
        ok(&["zeta", "--terms", "10", "--p", "2", "split"]),
        "(𝐋−1)x + (𝐋−1)x³ + (𝐋−1)x⁵ + (𝐋−1)x⁷ + (𝐋−1)x⁹ + …\n"
    );
    let out = ok(&["zeta", "--closed-form", "--verify", "--p", "3", "induced", "--e", "2"]);
    assert!(out.ends_with("verified to 60 terms\n"), "{out}");
    assert!(out.starts_with("(𝐋−1)𝐋x + (𝐋−1)²𝐋x²"), "{out}");
}

#[test]
fn golden_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().join("induced_2_1.json");
    let golden_arg = golden.to_str().unwrap();
    ok(&["--format", "json", "--out", golden_arg, "zeta", "--closed-form", "corpus", "induced_2_1"]);
    ok(&["zeta", "--closed-form", "--golden", golden_arg, "corpus", "induced_2_1"]);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&golden).unwrap()).unwrap();
    let a = v["closed_form"]["tails"][0]["a"].as_u64().unwrap();
    v["closed_form"]["tails"][0]["a"] = Value::from(a + 1);
    std::fs::write(&golden, serde_json::to_string(&v).unwrap()).unwrap();
    let out = tamejump(&["zeta", "--closed-form", "--golden", golden_arg, "corpus", "induced_2_1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "mismatch");
}

#[test]
fn oracle_grid_reports() {
    let out = tamejump(&["oracle", "--e-max", "1", "--f-max", "1", "--d-max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("summary: 5 PASS, 0 FAIL, 0 SKIPPED\n"));

    let out = tamejump(&["oracle", "--e-max", "4", "--f-max", "1", "--d-max", "9", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("e=2 f=1 d=3 q=- SKIPPED"), "{text}");
    assert!(!text.contains("FAIL ") && !text.contains(" FAIL\n"));

    let args = ["--format", "json", "--seed", "11", "oracle", "--e-max", "3", "--f-max", "2", "--d-max", "20", "--all-d"];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn precision_policy_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tamejump"))
        .args(["oracle", "--e-max", "2", "--f-max", "1", "--d-max", "5"])
        .env("TAMEJUMP_PRECISION_FACTOR", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_and_weight_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.json");
    std::fs::write(
        &path,
        r#"{"group": {"kind": "symmetric", "n": 3}, "lattice": {"kind": "augmentation_ideal", "subgroup": [0]}}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = ok(&["--format", "json", "lattice", "flasque-resolve", "--input", p]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["rank_m"], 5);
    let out = ok(&["lattice", "tate-cohomology", "--degree", "0", "--input", p]);
    assert_eq!(out.lines().count(), 6);
    assert_eq!(ok(&["lattice", "invariant-rank", "--subgroup", "0", "--input", p]).trim(), "H = {0}: rank A^H = 5");
    assert_eq!(
        ok(&["weights", "apply-scale", "--d", "5", "--weights", "1,2", "--scale", "1,0", "--p", "2"]),
        "2:2\n"
    );
}
