use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ixlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ixlab"))
        .current_dir(dir)
        .env_remove("IXLAB_BUDGET")
        .args(args)
        .output()
        .expect("spawn ixlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn only_run(dir: &Path, sub: &str) -> PathBuf {
    let runs: Vec<_> = fs::read_dir(dir.join("reports").join(sub))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(runs.len(), 1, "{runs:?}");
    runs.into_iter().next().unwrap()
}

#[test]
fn formula_prints_exact_value() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ixlab(tmp.path(), &["formula", "--fn", "h1", "--d", "1", "--k", "2", "--c", "3", "--n", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn formula_accepts_k1_k2_aliases() {
    let tmp = tempfile::tempdir().unwrap();
    let a = ixlab(tmp.path(), &["formula", "--fn", "g1", "--k", "3", "--l", "2", "--n", "8", "--t", "1"]);
    let b = ixlab(tmp.path(), &["formula", "--fn", "g1", "--k1", "3", "--k2", "2", "--n", "8", "--t", "1"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn missing_argument_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ixlab(tmp.path(), &["formula", "--fn", "h1", "--d", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ixlab(tmp.path(), &["formula", "--fn", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ixlab(tmp.path(), &["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn construct_then_verify_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ixlab(
        tmp.path(),
        &["construct", "--name", "H", "--n", "7", "--k", "3", "--d", "1", "--X", "1", "--M", "1,2,3,4"],
    );
    assert!(o.status.success());
    let fam = tmp.path().join("h.fam");
    fs::write(&fam, stdout(&o)).unwrap();

    let o = ixlab(tmp.path(), &["verify", "h.fam", "--r", "2", "--t", "1"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["property"], "r-wise-t-intersecting");
    assert_eq!(v["verdict"], true);
    assert!(v["conventions_used"].as_array().unwrap().is_empty());

    let o = ixlab(tmp.path(), &["verify", "h.fam", "--t", "1", "--property", "nontrivial"]);
    assert!(o.status.success());

    let o = ixlab(tmp.path(), &["verify", "h.fam", "--t", "1", "--property", "cover"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tau"], 2);
    assert_eq!(v["certificate"]["size"], 2);

    let o = ixlab(tmp.path(), &["verify", "h.fam", "--r", "3", "--t", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], false);
}

#[test]
fn verify_pair_reports_empty_convention() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("f.fam"), "5 2\n1,2\n1,3\n").unwrap();
    fs::write(tmp.path().join("g.fam"), "5 2\n").unwrap();
    let o = ixlab(tmp.path(), &["verify", "f.fam", "--t", "1", "--pair", "g.fam"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["property"], "cross-t-intersecting");
    assert_eq!(v["conventions_used"][0], "empty-intersection-is-universe");
}

#[test]
fn search_rwise_small_optimum_and_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ixlab(tmp.path(), &["search", "rwise", "--n", "5", "--k", "2", "--t", "1", "--r", "2", "--no-timing"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["optimum"], "3");
    assert_eq!(v["wall_ms"], 0);
    assert!(v["nodes"].as_u64().unwrap() > 0);
    assert!(v["prune_counters"].is_object());

    let run = only_run(tmp.path(), "search");
    let saved: Value = serde_json::from_str(&fs::read_to_string(run.join("report.json")).unwrap()).unwrap();
    assert_eq!(saved, v);
    let rows = fs::read_to_string(run.join("rows.csv")).unwrap();
    let n_witnesses = v["witnesses"].as_array().unwrap().len();
    assert_eq!(rows.lines().count(), n_witnesses + 1);
    assert_eq!(fs::read_dir(run.join("witnesses")).unwrap().count(), n_witnesses);
}

#[test]
fn search_is_byte_stable_without_timing() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["search", "rwise", "--n", "6", "--k", "3", "--t", "1", "--r", "2", "--no-timing"];
    let a = ixlab(tmp.path(), &args);
    let b = ixlab(tmp.path(), &args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn prune_switches_do_not_change_optimum() {
    let tmp = tempfile::tempdir().unwrap();
    let base = ["search", "rwise", "--n", "6", "--k", "3", "--t", "1", "--r", "3", "--no-timing"];
    let full: Value = serde_json::from_slice(&ixlab(tmp.path(), &base).stdout).unwrap();
    for sw in ["--no-bound-prune", "--no-pairwise-prune", "--no-rwise-prune", "--no-triviality-prune"] {
        let mut args = base.to_vec();
        args.push(sw);
        let v: Value = serde_json::from_slice(&ixlab(tmp.path(), &args).stdout).unwrap();
        assert_eq!(v["optimum"], full["optimum"], "{sw}");
        assert_eq!(v["witnesses"], full["witnesses"], "{sw}");
    }
}

#[test]
fn budget_from_environment_refuses() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ixlab"))
        .current_dir(tmp.path())
        .env("IXLAB_BUDGET", "1")
        .args(["search", "rwise", "--n", "7", "--k", "3", "--t", "1", "--r", "2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("refused"));
}

#[test]
fn search_cross_with_census() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ixlab(
        tmp.path(),
        &["search", "cross", "--n", "5", "--k1", "2", "--k2", "2", "--t", "1", "--census", "--no-timing"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["pair_scan"]["pairs"].as_u64().unwrap() > 0);
    assert_eq!(v["pair_scan"]["bound_failures"], 0);
    assert!(v["optimum_census"].is_array());
    let run = only_run(tmp.path(), "search");
    let fams = fs::read_dir(run.join("witnesses")).unwrap().count();
    assert_eq!(fams, 2 * v["witnesses"].as_array().unwrap().len());
}

#[test]
fn sweep_empty_grid_is_empty_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ixlab(tmp.path(), &["sweep", "--target", "h-size", "--grid", ""]);
    assert!(o.status.success());
    let run = only_run(tmp.path(), "sweep");
    let v: Value = serde_json::from_str(&fs::read_to_string(run.join("report.json")).unwrap()).unwrap();
    assert!(v["rows"].as_array().unwrap().is_empty());
    assert_eq!(v["summary"]["pass"], 0);
    let csv = fs::read_to_string(run.join("rows.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn sweep_rows_follow_grid_order() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ixlab(tmp.path(), &["sweep", "--target", "h-size", "--grid", "k=2..3,n=2*k..8,d=1..k-1", "--jobs", "2"]);
    assert!(o.status.success());
    let run = only_run(tmp.path(), "sweep");
    let v: Value = serde_json::from_str(&fs::read_to_string(run.join("report.json")).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r["index"], i);
        assert_eq!(r["status"], "pass");
    }
}

#[test]
fn sweep_unknown_target_and_missing_axis() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(ixlab(tmp.path(), &["sweep", "--target", "nope", "--grid", "n=1"]).status.code(), Some(2));
    assert_eq!(ixlab(tmp.path(), &["sweep", "--target", "h-size", "--grid", "n=5"]).status.code(), Some(2));
}

#[test]
fn check_lemma_table_and_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ixlab(tmp.path(), &["check-lemma", "--lemma", "4.8", "--grid", "t=1,k2=2..3,k1=k2..4,n=thr..thr+1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("index,t,k2,k1,n,status"));
    assert_eq!(out.lines().count(), 1 + 10);

    let o = ixlab(tmp.path(), &["check-lemma", "--lemma", "4.1", "--grid", "t=1,k2=2,k1=2,n=thr"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",fail,"));

    let o = ixlab(tmp.path(), &["check-lemma", "--lemma", "9.9", "--grid", "t=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trace_quick_writes_evidence() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ixlab(tmp.path(), &["trace", "--suite", "quick", "--no-timing"]);
    let code = o.status.code().unwrap();
    let out = stdout(&o);
    assert!(out.contains("Lemma 2.4"));
    let run = only_run(tmp.path(), "trace");
    let report: Value = serde_json::from_str(&fs::read_to_string(run.join("report.json")).unwrap()).unwrap();
    let entries = report["entries"].as_array().unwrap();
    for e in entries {
        assert!(run.join(e["evidence"].as_str().unwrap()).exists());
    }
    let fails = entries.iter().filter(|e| e["status"] == "fail").count();
    assert_eq!(code, if fails == 0 { 0 } else { 1 });
    let csv = fs::read_to_string(run.join("rows.csv")).unwrap();
    assert_eq!(csv.lines().count(), entries.len() + 1);
}
