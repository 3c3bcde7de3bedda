use std::path::Path;
use std::process::{Command, Output};

use pcnlab::graph::named;
use pcnlab::MultiGraph;

fn pcnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcnlab")).args(args).env("PCNLAB_THREADS", "2").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_graph(dir: &Path, name: &str, g: &MultiGraph) -> String {
    let path = dir.join(name);
    std::fs::write(&path, g.to_text()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn constants_pass() {
    let o = pcnlab(&["constants"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#pcnlab v1"));
    assert_eq!(lines.next(), Some("function,k,color,x,value,cap,pass"));
    let rows: Vec<_> = lines.filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn chip_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "k4.txt", &named::complete(4));
    let o = pcnlab(&["chip", "--in", &input, "--kmax", "6", "--certify"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["chi_p"], 4);
    assert_eq!(v["witness_coloring"].as_array().unwrap().len(), 4);
    assert_eq!(v["certificate_ledger"]["verdict"], "inconclusive");

    let o = pcnlab(&["chip", "--in", &input, "--kmax", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["greater_than"], 3);
}

#[test]
fn sample_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let o = pcnlab(&["sample", "--n", "30", "--girth", "4", "--seed", "5", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let g = MultiGraph::parse(&text).unwrap();
    assert!(g.is_simple_cubic() && g.has_girth_at_least(4));
    assert_eq!(MultiGraph::parse(&g.to_text()).unwrap(), g);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 2, "no temporary files remain: {leftovers:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(pcnlab(&["sample", "--n", "5", "--girth", "3"]).status.code(), Some(1));
    assert_eq!(pcnlab(&["sample", "--n", "4", "--girth", "2"]).status.code(), Some(1));
    assert_eq!(pcnlab(&["bogus"]).status.code(), Some(1));
    assert_eq!(pcnlab(&["profile", "--in", "/nonexistent/graph", "--imax", "2"]).status.code(), Some(1));
    let o = pcnlab(&["sample", "--n", "4", "--girth", "5", "--max-tries", "200"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("200 tries"));
    assert_eq!(pcnlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn montecarlo_reports_are_byte_identical() {
    let args = ["montecarlo", "--n", "200", "--girth", "3", "--trials", "300", "--seed", "11"];
    let a = pcnlab(&args);
    let b = pcnlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("#pcnlab v1\ntrial,accepted\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 301);

    let json = pcnlab(&["montecarlo", "--n", "200", "--girth", "3", "--trials", "300", "--seed", "11", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 300);
    assert_eq!(v["config"]["trials"], 300);
    let accepted = v["records"].as_array().unwrap().iter().filter(|r| r["accepted"] == 1).count() as f64;
    assert_eq!(v["aggregate"]["mean"].as_f64().unwrap(), accepted / 300.0);
}

#[test]
fn profile_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "petersen.txt", &named::petersen());
    let o = pcnlab(&["profile", "--in", &input, "--imax", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sizes: Vec<_> = v["records"].as_array().unwrap().iter().map(|r| r["c_i"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![4, 1]);

    let o = pcnlab(&["audit124", "--in", &input]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lhs"], v["rhs"]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["triple_source"], "exact");
}

#[test]
fn certify_and_ratio() {
    let o = pcnlab(&["certify", "--k-from", "12", "--k-to", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(",true")).count(), 9);

    let args = ["ratio", "--n", "30", "--girth", "5", "--trials", "4", "--seed", "2", "--format", "json"];
    let a = pcnlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, pcnlab(&args).stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
    assert_eq!(pcnlab(&["ratio", "--n", "200", "--girth", "3", "--trials", "1"]).status.code(), Some(1));
}
