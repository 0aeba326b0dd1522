mod common;

use std::fs;
use std::process::Command;

use anglelab::cli::{execute, reproducible_part};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_anglelab"))
}

fn record(stdout: &[u8]) -> Value {
    serde_json::from_slice(stdout).expect("stdout is one JSON record")
}

#[test]
fn exit_code_contract() {
    let dir = common::scratch("exit");
    let pts = dir.join("pts.json");
    fs::write(&pts, r#"{"points":[["0","0"],["1","0"],["0","1"],["1","1"]]}"#).unwrap();
    let out = bin().args(["angles", "--input"]).arg(&pts).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = record(&out.stdout);
    assert_eq!(v["cardinality"], 2);
    assert_eq!(v["resolved"], true);

    // arctan(1/2) + arctan(1/3) - arctan(1) = 0 is invisible to symbolic
    // forms, so enclosures can never separate the collisions it causes.
    let set = dir.join("adversarial.json");
    fs::write(&set, r#"{"kind":"arctan","terms":[[[1,"1/2"]],[[1,"1/3"]],[[1,"1"]],[[1,"0"]]]}"#).unwrap();
    let out = bin()
        .args(["sumset", "--pattern", "4,-3", "--mode", "interval", "--max-bits", "64", "--set"])
        .arg(&set)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v = record(&out.stdout);
    assert_eq!(v["resolved"], false);
    assert!(v["lower"].as_u64().unwrap() < v["upper"].as_u64().unwrap());

    let dup = dir.join("dup.json");
    fs::write(&dup, r#"{"points":[["1","1"],["1","1"]]}"#).unwrap();
    let out = bin().args(["angles", "--input"]).arg(&dup).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(record(&out.stdout)["error"], "DuplicatePoint");
}

#[test]
fn fit_and_out_file() {
    let dir = common::scratch("fit");
    let recs = dir.join("runs.json");
    fs::write(&recs, "[[2,4],[4,16],[8,64]]").unwrap();
    let target = dir.join("record.json");
    let out = bin().args(["fit", "--records"]).arg(&recs).arg("--out").arg(&target).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert!((v["slope"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn sweep_writes_csv() {
    let dir = common::scratch("csv");
    let csv = dir.join("line.csv");
    let o = execute([
        "anglelab", "construct", "--family", "line", "--t", "1/10", "--sweep", "6,8", "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.text);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,count,family");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("6,") && lines[1].ends_with(",line_symmetric_pair"));
    assert!(!text.contains('\r'));
}

#[test]
fn records_are_deterministic_across_jobs() {
    let dir = common::scratch("jobs");
    let set = dir.join("s.json");
    fs::write(&set, r#"{"kind":"arctan","terms":[[[1,"1/2"]],[[1,"2/7"]],[[1,"3"]],[[2,"1/5"]]]}"#).unwrap();
    let run = |jobs: &str| {
        let o = execute([
            "anglelab", "sumset", "--pattern", "2,-2", "--jobs", jobs, "--set", set.to_str().unwrap(),
        ]);
        assert_eq!(o.code, 0, "{}", o.text);
        o.text
    };
    let (a, b) = (run("1"), run("4"));
    assert_eq!(reproducible_part(&a), reproducible_part(&b));
    let (va, vb) = (record(a.as_bytes()), record(b.as_bytes()));
    assert_eq!(va["outputs_digest"], vb["outputs_digest"]);
    // --jobs is not an input.
    assert_eq!(va["inputs_digest"], vb["inputs_digest"]);
}

#[test]
fn every_subcommand_produces_a_record() {
    let dir = common::scratch("all");
    let w = |name: &str, body: &str| {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let pts = w("p.json", r#"{"points":[["0","0"],["2","1"],["1","3"],["3","3"]]}"#);
    let p = w("pp.json", r#"{"points":[["1","1"],["1","2"]]}"#);
    let q = w("qq.json", r#"{"points":[["3","3"],["3","4"],["4","3"],["4","4"]]}"#);
    let x = w("x.json", r#"{"values":["2","3","5","9","17"]}"#);
    let y = w("y.json", r#"{"values":["1","4","6","30"]}"#);
    let a = w("a.json", r#"{"values":["4","16","64"]}"#);
    let s = w("s.json", r#"{"kind":"rational","values":["1","2","4"]}"#);
    let runs: Vec<Vec<&str>> = vec![
        vec!["angles", "--input", &pts, "--list"],
        vec!["apex", "--input", &pts, "--apex", "0,0"],
        vec!["apex", "--input", &pts, "--apex", "0,0", "--unsigned"],
        vec!["directions", "--point", "0,0", "--input", &q],
        vec!["beck", "--p", &p, "--q", &q],
        vec!["lines", "--input", &q],
        vec!["kstats", "--p", &p, "--q", &q],
        vec!["construct", "--family", "grid", "--n", "3", "--count"],
        vec!["construct", "--family", "circle", "--n", "9"],
        vec!["construct", "--family", "random", "--n", "5", "--seed", "3", "--count"],
        vec!["construct", "--family", "base", "--base-kind", "geometric", "--ratio", "3", "--n", "4"],
        vec!["sumset", "--pattern", "4,-3", "--set", &s],
        vec!["gap", "--x", &x, "--y", &y, "--presentation", "ratio"],
        vec!["squeeze", "--x", &x, "--y", &y],
        vec!["expander", "--a", &a, "--h", "1,2,4"],
        vec!["concavity", "--h", "-1,0,1"],
        vec!["pluennecke", "--set", &s, "--k", "2", "--l", "1"],
        vec!["pipeline", "--values", "1,2,3,4"],
    ];
    for args in runs {
        let o = execute(std::iter::once("anglelab").chain(args.iter().copied()));
        assert_eq!(o.code, 0, "{args:?}: {}", o.text);
        let v = record(o.text.as_bytes());
        assert_eq!(v["command"], args[0]);
        assert!(v["inputs_digest"].as_str().unwrap().len() == 64);
        assert!(o.text.contains("\"wall_time_ms\":") && o.text.ends_with('}'));
    }
}
