use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cutpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutpath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn gen_and_count() {
    let o = cutpath(&["gen", "--family", "odd-even", "--n", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "WD1 3\n1 2 1\n");

    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.wd", &stdout(&o));
    let o = cutpath(&["count", &f]);
    assert_eq!(stdout(&o), "4\n");
    let o = cutpath(&["count", &f, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], "4");
}

#[test]
fn gen_families() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("a2.wd");
    let o = cutpath(&["gen", "--family", "ai", "--i", "2", "--out", base.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(fs::read_to_string(&base).unwrap().starts_with("WD1 40\n"));

    let o = cutpath(&[
        "gen",
        "--family",
        "stacked",
        "--n",
        "13",
        "--base",
        base.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("WD1 13\n"));

    let o = cutpath(&["gen", "--family", "bubblesort", "--n", "4"]);
    assert_eq!(stdout(&o).lines().next(), Some("WD1 4"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.wd", "WD1 3\n1 1 2\n");
    let o = cutpath(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let good = write(dir.path(), "good.wd", "WD1 3\n2 1 2\n");
    assert_eq!(cutpath(&["validate", &good]).status.code(), Some(0));

    assert_eq!(cutpath(&["count", "/nonexistent/x.wd"]).status.code(), Some(4));
    assert_eq!(cutpath(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cutpath(&["gen", "--family", "ai"]).status.code(), Some(1));
    assert_eq!(cutpath(&["enumerate", "--n", "9"]).status.code(), Some(1));
}

#[test]
fn stats_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let o = cutpath(&["gen", "--family", "odd-even", "--n", "5"]);
    let f = write(dir.path(), "five.wd", &stdout(&o));

    let o = cutpath(&["stats", &f, "--lemmas"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = cutpath(&["stats", &f, "--zones"]);
    let _: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cutpath(&["stats", &f]).status.code(), Some(1));

    let o = cutpath(&["export", &f, "--format", "svg"]);
    assert_eq!(stdout(&o).matches(r#"class="crossing""#).count(), 10);
    let o = cutpath(&["export", &f, "--format", "dot"]);
    assert!(stdout(&o).contains("digraph"));
    let o = cutpath(&["export", &f, "--format", "json"]);
    let _: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
}

#[test]
fn enumerate_and_flips() {
    let o = cutpath(&["enumerate", "--n", "5"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("5\t62"));
    let o = cutpath(&["--sequential", "enumerate", "--n", "3", "--gamma"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("3\t2\t4\t2"));

    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.wd", "WD1 3\n1 2 1\n");
    let out = dir.path().join("end.wd");
    let o = cutpath(&["flips", &f, "--greedy", "--out", out.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["steps"].as_array().unwrap().len(), 0);
    assert_eq!(fs::read_to_string(out).unwrap(), "WD1 3\n1 2 1\n");
}

#[test]
fn coarse_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let c = cert.to_str().unwrap();
    let o = cutpath(&["certify", "--threshold", "1.4", "--out", c]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = cutpath(&["verify-cert", c]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let tampered = fs::read_to_string(&cert)
        .unwrap()
        .replacen("\"leaf-pass\"", "\"split\"", 1);
    let t = write(dir.path(), "bad.json", &tampered);
    assert_eq!(cutpath(&["verify-cert", &t]).status.code(), Some(3));

    let o = cutpath(&["certify", "--threshold", "1", "--depth-cap", "1", "--out", c]);
    assert_eq!(o.status.code(), Some(3));
}
