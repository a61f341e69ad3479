use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn vab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vab")).args(args).output().expect("run vab")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vab-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn exact_k(out: &Output) -> u64 {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let e = v["exponent"].as_array().unwrap();
    let exact = e.iter().find(|c| c["mode"] == "exact").unwrap();
    exact["k"].as_u64().unwrap()
}

#[test]
fn example_runs() {
    let out = vab(&["examples", "diag3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(exact_k(&out), 3);

    let out = vab(&["--text", "examples", "h0h0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("naive bound: 2"), "{text}");
    assert!(text.contains("exponent (Exact): k = 1"), "{text}");
}

#[test]
fn output_is_reproducible() {
    let a = vab(&["--seed", "7", "examples", "dihedral-line"]);
    let b = vab(&["--seed", "7", "examples", "dihedral-line"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = vab(&["growth", "swap", "--n-max", "2", "--format", "csv"]);
    let d = vab(&["growth", "swap", "--n-max", "2", "--format", "csv"]);
    assert!(c.status.success());
    assert_eq!(c.stdout, d.stdout);
    assert!(String::from_utf8(c.stdout).unwrap().starts_with("n,pairs_checked,max_min_index,witness,budget_hit\n"));
}

#[test]
fn input_files() {
    let good = scratch(
        "line.json",
        r#"{"group": {"cayley": [[0, 1], [1, 0]]}, "dim": 1, "rho": [[[1]], [[-1]]], "cocycle": [[0], [0]]}"#,
    );
    let out = vab(&["analyze", good.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["group_order"], 2);

    let out = vab(&["conj", good.to_str().unwrap(), "2;0", "-2;0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["conjugacy"][0]["conjugate"], true);

    let bad = scratch("bad.json", "{\"group\": ");
    let out = vab(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1"), "{err}");

    let out = vab(&["analyze", "no-such-thing"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn partial_results_exit_two() {
    let out = vab(&["exponent", "six-dim", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exponent"][0]["complete"], false);
}
