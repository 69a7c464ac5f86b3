use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swapsensus"))
        .args(args)
        .env_remove("SWAPSENSUS_ORACLE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn swap_radius_with_trace() {
    let o = run(&["consensus", "--distance", "swap", "--objective", "radius", "-d", "4", "--trace", &data("long_example.txt")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("feasible: "), "{out}");
    assert!(out.contains("10000001000000000"), "{out}");

    let o = run(&[
        "consensus", "--distance", "swap", "--objective", "radius", "-d", "4", "--trace", "--format", "json",
        &data("long_example.txt"),
    ]);
    let v = json(&o);
    assert_eq!(v["status"], "feasible");
    assert_eq!(v["max_distance"], 4);
    assert_eq!(v["trace"]["steps"].as_array().unwrap().len(), 8);
}

#[test]
fn swap_radius_too_small_is_infeasible() {
    let o = run(&["consensus", "--distance", "swap", "--objective", "radius", "-d", "2", &data("long_example.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("infeasible"));
}

#[test]
fn sh_radius_sum_is_rejected() {
    let o = run(&["consensus", "--distance", "swap-hamming", "--objective", "radius-sum", "-d", "1", "-D", "1", &data("pair.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unsupported: open problem"), "{}", stderr(&o));
}

#[test]
fn swap_sum_without_common_match() {
    let o = run(&["consensus", "--distance", "swap", "--objective", "sum", "--format", "json", &data("no_match.txt")]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["status"], "infeasible");
    assert!(v["reason"].as_str().unwrap().contains("no common matching word"));
}

#[test]
fn ragged_input_names_the_line() {
    let o = run(&["consensus", "--distance", "hamming", "--objective", "sum", &data("ragged.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn dump_table() {
    let o = run(&[
        "consensus", "--distance", "swap-hamming", "--objective", "sum", "--dump-table", "--format", "json",
        &data("table.txt"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["sum_distance"], 4);
    let states: usize = v["table"]["rows"].as_array().unwrap().iter().map(|r| r.as_array().unwrap().len()).sum();
    assert_eq!(states, 12);

    let o = run(&["consensus", "--distance", "swap-hamming", "--objective", "sum", "--dump-table", &data("table.txt")]);
    assert!(stdout(&o).contains("T[1,"), "{}", stdout(&o));

    let o = run(&["consensus", "--distance", "hamming", "--objective", "sum", "--dump-table", &data("table.txt")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn distances() {
    let o = run(&["distance", "--metric", "swap", "abab", "baba"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("2"));

    let o = run(&["distance", "--metric", "swap", "abc", "abd"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().next(), Some("inf"));

    let o = run(&["distance", "--metric", "swap-hamming", "--format", "json", "abc", "bad"]);
    assert_eq!(json(&o)["distance"], 2);

    let o = run(&["distance", "--metric", "hamming", "ab", "abc"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn disentangle_json() {
    let o = run(&["disentangle", &data("long_example.txt")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "feasible");
    assert_eq!(v["budgets"], serde_json::json!([2, 3, 2]));

    let o = run(&["disentangle", &data("no_match.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["status"], "infeasible");
}

#[test]
fn oracle_with_budgets() {
    let args = ["--distance", "hamming", "--objective", "radius", "-d", "1", "--format", "json"];
    let budgets = data("pair_budgets.txt");
    let pair = data("pair.txt");

    let mut a: Vec<&str> = vec!["oracle"];
    a.extend(args);
    a.extend(["--budgets", budgets.as_str(), pair.as_str()]);
    let o = run(&a);
    let oracle = json(&o);

    let mut a: Vec<&str> = vec!["consensus"];
    a.extend(args);
    a.extend(["--budgets", budgets.as_str(), pair.as_str()]);
    let solver = json(&run(&a));
    assert_eq!(oracle["status"], solver["status"]);
    assert_eq!(oracle["status"], "infeasible");

    let o = run(&["oracle", "--distance", "swap-hamming", "--objective", "sum", "--cap", "1", &data("table.txt")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_swapsensus"))
        .args(["oracle", "--distance", "hamming", "--objective", "sum", &data("long_example.txt")])
        .env("SWAPSENSUS_ORACLE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["oracle", "--distance", "swap", "--objective", "sum", &data("three_words.txt")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = run(&["gen", "--seed", "9", "--n", "15", "--k", "4", "--ops", "2", "--swaps-only", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let ta = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ta, std::fs::read_to_string(&b).unwrap());
    assert_eq!(ta.lines().count(), 4);

    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.txt.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 9);
    let center = meta["center"].as_str().unwrap();
    for w in ta.lines() {
        let o = run(&["distance", "--metric", "swap", center, w]);
        let d: usize = stdout(&o).lines().next().unwrap().parse().unwrap();
        assert!(d <= 2);
    }
}
