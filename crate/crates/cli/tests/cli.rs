use std::process::{Command, Output};

fn xc01(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xc01")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bounds_of_the_hard_class() {
    let o = xc01(&["bounds", "--id", "27606"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "8 9 10");
}

#[test]
fn xc_prints_a_checked_certificate() {
    let o = xc01(&["xc", "--id", "27606"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["xcs"], 10);
    assert_eq!(v["certificate"]["bound"], 10);
}

#[test]
fn usage_errors_exit_with_three() {
    assert_eq!(xc01(&["bounds", "--id", "0"]).status.code(), Some(3));
    assert_eq!(xc01(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(xc01(&["run-all", "--dim", "2", "--format", "yaml"]).status.code(), Some(3));
    assert_eq!(xc01(&["--help"]).status.code(), Some(0));
}

#[test]
fn small_run_as_csv() {
    let o = xc01(&["run-all", "--dim", "2", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("15,2,4,4,")));
}

#[test]
fn verify_flags_a_perturbed_run() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("run.json");
    let saved_str = saved.to_str().unwrap();
    let o = xc01(&["run-all", "--skip-certificates", "--format", "csv", "--save", saved_str]);
    assert!(o.status.success());
    assert_eq!(xc01(&["verify", "--run", saved_str]).status.code(), Some(0));

    let mut run: serde_json::Value = serde_json::from_slice(&std::fs::read(&saved).unwrap()).unwrap();
    let record = run["records"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|r| r["rep_id"] == 27606)
        .unwrap();
    record["rc"] = serde_json::json!(10);
    std::fs::write(&saved, serde_json::to_vec(&run).unwrap()).unwrap();

    let o = xc01(&["verify", "--run", saved_str]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("27606") || String::from_utf8_lossy(&o.stderr).contains("27606"));
}
