use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn scenario(name: &str) -> PathBuf {
    root().join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxlogic"))
        .args(args)
        .output()
        .unwrap()
}

fn run_paths(args: &[&str], paths: &[PathBuf]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_boxlogic"));
    cmd.args(args);
    cmd.args(paths);
    cmd.output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("boxlogic-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn build_summarizes_chsh() {
    let out = run_paths(&["build"], &[scenario("chsh.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["logic"]["atoms"], 16);
    assert_eq!(v["logic"]["sample_points"], 16);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["tool"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["scenario"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn invalid_scenario_exits_2() {
    let out = run_paths(&["build"], &[scenario("bad-duplicate-label.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("repeats"));
    let missing = run(&["build", "/nonexistent/scenario.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn caps_exit_3() {
    let out = run_paths(&["--cap-closure", "20", "build"], &[scenario("chsh.json")]);
    assert_eq!(out.status.code(), Some(3));
    let out = run_paths(&["--cap-gamma", "8", "build"], &[scenario("chsh.json")]);
    assert_eq!(out.status.code(), Some(3));
    let out = run_paths(&["--cap-vars", "10", "states", "vertices"], &[scenario("chsh.json")]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["fixtures", "even-set", "--k", "9"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn zero_caps_are_rejected() {
    let out = run_paths(&["--cap-gamma", "0", "build"], &[scenario("chsh.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chsh_vertices_csv() {
    let out = run_paths(&["states", "vertices"], &[scenario("chsh.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 25);
    assert!(lines[0].ends_with(",class"));
    assert_eq!(lines.iter().filter(|l| l.ends_with(",deterministic")).count(), 16);
    assert_eq!(lines.iter().filter(|l| l.ends_with(",nondeterministic")).count(), 8);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 17));
}

#[test]
fn table_checks() {
    let out = run_paths(&["states", "check"], &[scenario("pr-box.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["state"]["well_defined"], true);

    let out = run_paths(&["states", "check"], &[scenario("signalling.json")]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    let kinds: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.iter().all(|k| k.starts_with("signalling")));

    let out = run_paths(
        &["states", "check", "--scenario"],
        &[scenario("mixed.json"), scenario("pr-box.json")],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exports_write_files() {
    let dir = tmp("export");
    let d = dir.to_str().unwrap();
    for format in ["json", "dot", "csv"] {
        let out = run_paths(&["--out", d, "export", format], &[scenario("chsh.json")]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in [
        "logic.json",
        "hasse.dot",
        "pasting-left.dot",
        "pasting-right.json",
        "vertices.csv",
        "hrep.json",
    ] {
        assert!(dir.join(f).is_file(), "{f}");
    }
    let logic: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("logic.json")).unwrap()).unwrap();
    assert_eq!(logic["atoms"].as_array().unwrap().len(), 16);
    let pasting: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("pasting-left.json")).unwrap()).unwrap();
    assert_eq!(pasting["element_count"], 6);
    let hrep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("hrep.json")).unwrap()).unwrap();
    assert_eq!(hrep["equalities"].as_array().unwrap().len(), 12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_reports_every_check() {
    let out = run_paths(&["--seed", "5", "verify"], &[scenario("chsh.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 5);
    let checks = v["report"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 19);
    assert!(checks
        .iter()
        .all(|c| c["passed"] == true && c.get("counterexample").is_some()));
    assert_eq!(v["report"]["polytope"]["vertices"], 24);
}

#[test]
fn fixtures_match_their_classification() {
    for (k, elements, lattice, boolean) in [(1, 2, true, true), (2, 8, true, false), (3, 32, false, false)] {
        let out = run(&["fixtures", "even-set", "--k", &k.to_string()]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        let r = &v["report"];
        assert_eq!(r["logic"]["elements"], elements);
        assert_eq!(r["logic"]["lattice"], lattice);
        assert_eq!(r["logic"]["boolean"], boolean);
        assert_eq!(r["orthomodular"], true);
        assert_eq!(r["pair_without_join"].is_null(), k < 3);
    }
}
