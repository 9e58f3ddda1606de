//! End-to-end tests driving the compiled `commlab` binary: the documented
//! command lines, report round trips, exit-code contract, and byte-stable
//! output across worker counts.

use std::process::{Command, Output};

use serde_json::Value;

fn commlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn normal_form_of_the_twisted_conjugate() {
    let out = commlab(&["nf", "--group", "ex3", "--word", "t^-1 x^2 t"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "x^4\n");
}

#[test]
fn coset_graph_renders_dot() {
    let out = commlab(&[
        "coset-graph",
        "--group",
        "bs:1,2",
        "--subgroup",
        "cyclic-span:x",
        "--radius",
        "6",
        "--format",
        "dot",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("digraph window {"), "not DOT: {text}");
    assert!(text.contains("dist=6"));
}

#[test]
fn free_group_profile_grows_linearly() {
    let out = commlab(&[
        "hausdorff",
        "--group",
        "free:2",
        "--subgroup",
        "cyclic-span:x",
        "--g",
        "y",
        "--rmax",
        "6",
        "--R",
        "12",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "growing");
    let lb: Vec<u64> = v["lower_bounds"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(lb, vec![1, 2, 3, 4, 5, 6, 7]);
}

#[test]
fn witness_report_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    let out = commlab(&[
        "witness",
        "search",
        "--group",
        "bs:1,2",
        "--subgroup",
        "cyclic-span:x",
        "--g",
        "t",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["a"], serde_json::json!(["t"]));
    assert!(saved["alpha"].as_array().unwrap().len() > 1);

    let out = commlab(&[
        "witness",
        "verify",
        "--in",
        path.to_str().unwrap(),
        "--radius",
        "10",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["verify"]["outcome"], "verified");
    assert_eq!(v["verify"]["radius"], 10);
}

#[test]
fn corrupted_witness_is_refuted_conclusively() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    let out = commlab(&[
        "witness",
        "search",
        "--group",
        "bs:1,2",
        "--subgroup",
        "cyclic-span:x",
        "--g",
        "t",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    // Drop the odd-power value from B: x can no longer be handled.
    let mut saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    saved["b"] = serde_json::json!(["t^-1"]);
    std::fs::write(&path, serde_json::to_string(&saved).unwrap()).unwrap();

    let out = commlab(&["witness", "verify", "--in", path.to_str().unwrap()]);
    // A concrete counterexample is a conclusive result: exit 0, not 2.
    let v = stdout_json(&out);
    assert_eq!(v["verify"]["outcome"], "counterexample");
    assert_eq!(v["verify"]["element"], "x");
    assert_eq!(v["alpha"], Value::Null);
}

#[test]
fn exported_ball_re_renders_as_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.json");
    let out = commlab(&[
        "ball",
        "--group",
        "cyclic:6",
        "--radius",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = commlab(&["export", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("digraph window {"));
}

#[test]
fn reports_are_byte_identical_across_worker_counts() {
    let args = [
        "hausdorff",
        "--group",
        "bs:1,2",
        "--subgroup",
        "cyclic-span:x",
        "--g",
        "t",
        "--rmax",
        "5",
        "--R",
        "12",
    ];
    let seq = commlab(&[&args[..], &["--workers", "1"]].concat());
    let par = commlab(&[&args[..], &["--workers", "3"]].concat());
    assert_eq!(seq.status.code(), par.status.code());
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(commlab(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(commlab(&["nf", "--group", "bs:1,2"]).status.code(), Some(1));
    assert_eq!(
        commlab(&["paper-example", "9"]).status.code(),
        Some(1),
        "out-of-range example number is a spec error"
    );
}

#[test]
fn unstabilized_profile_exits_two() {
    let out = commlab(&[
        "lemma18",
        "--group",
        "free:2",
        "--subgroup",
        "cyclic-span:x",
        "--ball",
        "1",
        "--rmax",
        "6",
        "--R",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not stabilize"));
}

#[test]
fn vertex_cap_env_is_validated_and_enforced() {
    let bad = Command::new(env!("CARGO_BIN_EXE_commlab"))
        .args(["ball", "--group", "cyclic:6", "--radius", "2"])
        .env("COMMLAB_MAX_VERTICES", "banana")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));

    let tiny = Command::new(env!("CARGO_BIN_EXE_commlab"))
        .args(["ball", "--group", "free:2", "--radius", "5"])
        .env("COMMLAB_MAX_VERTICES", "10")
        .output()
        .unwrap();
    assert_eq!(tiny.status.code(), Some(2), "budget overrun is inconclusive");
}

#[test]
fn stable_letter_displacement_constant_is_three() {
    let out = commlab(&[
        "lemma18",
        "--group",
        "bs:1,2",
        "--subgroup",
        "cyclic-span:x",
        "--ball",
        "2",
        "--rmax",
        "6",
        "--R",
        "14",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["k"], 3);
    assert_eq!(v["all_hold"], true);
}

#[test]
fn scripted_example_bundles_all_pass() {
    for n in ["1", "2", "3", "4"] {
        let out = commlab(&["paper-example", n]);
        let v = stdout_json(&out);
        assert_eq!(v["all_pass"], true, "example {n} failed: {v}");
        assert_eq!(v["tainted"], false, "example {n} tainted");
    }
}
