use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tmq::commands::{PrimeRow, RarefyRow, SpectrumRow};
use tmq::CliError;
use tmq_core::rareclass::rarefied_sum_direct;

fn tmq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmq")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = tmq(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&ok(&all)).unwrap()
}

#[test]
fn sequence_rows() {
    assert_eq!(ok(&["sequence", "--limit", "3"]), "n,s,eta,f\n0,0,1,0\n1,1,-1,2\n2,1,-1,3\n");
    assert_eq!(csv_rows(&ok(&["sequence", "--limit", "0"])).len(), 1);
    let rows = csv_rows(&ok(&["sequence", "--limit", "3", "--a", "5/2", "--b", "1/2"]));
    assert_eq!(rows[1][3], "5/2");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(tmq(&["sequence", "--a", "x/2"]).status.code(), Some(1));
    assert_eq!(tmq(&["sequence", "--a", "1", "--b", "2"]).status.code(), Some(1));
    assert_eq!(tmq(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(tmq(&["diffract"]).status.code(), Some(1));
    assert_eq!(tmq(&["diffract", "--grid", "1/0"]).status.code(), Some(1));
    assert_eq!(tmq(&["profile", "--p", "9"]).status.code(), Some(1));
    assert_eq!(tmq(&["--help"]).status.code(), Some(0));
    assert_eq!(tmq(&["--version"]).status.code(), Some(0));
}

#[test]
fn numerical_errors_map_to_two() {
    let e: CliError = tmq_core::Error::NonIntegralClassNumber { p: 5, raw: 1.5, tol: 1e-6 }.into();
    assert_eq!(e.exit_code(), 2);
    let e: CliError = tmq_core::Error::NotOddPrime(9).into();
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn diffract_table() {
    let rows = csv_rows(&ok(&["diffract", "--grid", "0", "--sizes", "1,7,1000"]));
    for r in &rows {
        assert_eq!(r[3].parse::<f64>().unwrap(), r[2].parse::<f64>().unwrap());
    }
    assert_eq!(ok(&["diffract", "--grid", ""]), "q,k,l,nu,alpha\n");

    let rows = csv_rows(&ok(&["diffract", "--grid", "0:1/64:64", "--sizes", "16384"]));
    assert_eq!(rows.len(), 64);
    for r in &rows {
        let ratio = r[3].parse::<f64>().unwrap() / 16384.0;
        let spike = r[0] == "0" || r[0] == "1/2";
        assert_eq!(ratio > 1e-3, spike, "q={} ratio={ratio}", r[0]);
    }
}

#[test]
fn prime_table() {
    let v = json(&["classify-primes", "--limit", "200"]);
    let rows: Vec<PrimeRow> = serde_json::from_value(v).unwrap();
    let find = |p: u64| rows.iter().find(|r| r.p == p).unwrap();
    assert!((find(17).beta.unwrap() - 0.6332).abs() < 1e-3);
    assert_eq!(find(41).epsilon.as_deref(), Some("27+10ω"));
    assert_eq!(find(3).regime, "size-increasing");
    assert_eq!(find(7).regime, "size-decreasing");
    let p21: Vec<u64> = rows.iter().filter(|r| r.class == "P21").map(|r| r.p).collect();
    assert_eq!(p21, [17, 41, 97, 137, 193]);
    assert_eq!(tmq(&["classify-primes", "--limit", "2"]).status.code(), Some(1));
}

#[test]
fn spectrum_verdicts() {
    let v = json(&["spectrum", "--grid", "1/4,1/3,9/5,bad", "--a", "7", "--b", "2", "--horizon", "20"]);
    let rows: Vec<SpectrumRow> = serde_json::from_value(v).unwrap();
    assert_eq!(rows[0].verdict.as_deref(), Some("Bragg"));
    assert_eq!(rows[1].verdict.as_deref(), Some("SingularContinuous"));
    assert!((rows[1].alpha.unwrap() - 0.585).abs() < 1e-3);
    assert_eq!(rows[2].verdict.as_deref(), Some("Excluded"));
    assert!(rows[3].error.is_some() && rows[3].verdict.is_none());
}

#[test]
fn profile_samples() {
    let v = json(&["profile", "--p", "3", "--j", "0", "--horizon", "20", "--resolution", "256"]);
    let psi: Vec<f64> = v["samples"].as_array().unwrap().iter().map(|s| s["psi"].as_f64().unwrap()).collect();
    assert!(psi.iter().all(|&x| x > 0.0209 && x < 0.6710));

    let v = json(&["profile", "--p", "3", "--j", "2", "--horizon", "20", "--resolution", "256"]);
    let (lo, hi) = (v["psi_inf"].as_f64().unwrap(), v["psi_sup"].as_f64().unwrap());
    assert!(lo < -0.1 && hi > -1e-9);

    let v = json(&["profile", "--p", "3", "--j", "1", "--horizon", "4", "--resolution", "16"]);
    let beta = v["beta"].as_f64().unwrap();
    for s in v["samples"].as_array().unwrap() {
        let n = s["n"].as_u64().unwrap();
        let raw = s["raw"].as_f64().unwrap() * (n as f64).powf(beta);
        assert!((raw - rarefied_sum_direct(3, 1, n).unwrap() as f64).abs() < 1e-9);
    }
}

#[test]
fn rarefy_round_trip() {
    let text = ok(&["rarefy", "--p", "5", "--limit", "40", "--format", "json"]);
    let rows: Vec<RarefyRow> = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&rows).unwrap() + "\n", text);
    for r in &rows {
        for (j, &s) in r.sums.iter().enumerate() {
            assert_eq!(s, rarefied_sum_direct(5, j as u64, r.n).unwrap());
        }
    }
    let rows = csv_rows(&ok(&["rarefy", "--p", "3", "--grid", "10,20"]));
    assert_eq!(rows.len(), 2);
    assert_eq!(tmq(&["rarefy", "--grid", "1/2"]).status.code(), Some(1));
}

#[test]
fn marcinkiewicz_gap_shrinks() {
    let v = json(&["marcinkiewicz", "--horizon", "14"]);
    let rows = v.as_array().unwrap();
    assert!(rows.iter().all(|r| r["bound_holds"].as_bool().unwrap()));
    let gaps: Vec<f64> = rows.iter().map(|r| r["gap"].as_f64().unwrap()).collect();
    assert!(gaps.last().unwrap() < &gaps[6]);
    let v = json(&["marcinkiewicz", "--horizon", "10", "--weights", "random", "--compare", "random", "--grid", "1/3"]);
    assert!(v.as_array().unwrap().iter().all(|r| r["gap"].as_f64().unwrap() == 0.0));
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap()
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, jobs: &str| {
        let path = dir.path().join(name);
        ok(&[
            "spectrum",
            "--grid",
            "1/3,1/5,3/17,1/12,1/2",
            "--horizon",
            "16",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        read(&path)
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    let c = run("c.csv", "4");
    assert_eq!(a, b);
    assert_eq!(b, c);
    assert!(!a.is_empty());
}

#[test]
fn json_round_trips() {
    let text = ok(&["classify-primes", "--limit", "60", "--format", "json"]);
    let rows: Vec<PrimeRow> = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&rows).unwrap() + "\n", text);
    let text = ok(&["spectrum", "--grid", "1/3,1/7", "--horizon", "16", "--format", "json"]);
    let rows: Vec<SpectrumRow> = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&rows).unwrap() + "\n", text);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"a": "3", "b": "1", "limit": 2, "format": "csv"}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let rows = csv_rows(&ok(&["sequence", "--config", c]));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][3], "3");
    let rows = csv_rows(&ok(&["sequence", "--config", c, "--limit", "4", "--b", "2"]));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2][3], "5");

    std::fs::write(&cfg, r#"{"grid": ["1/3", "1/4"], "horizon": 12}"#).unwrap();
    let rows = csv_rows(&ok(&["spectrum", "--config", c]));
    assert_eq!(rows.len(), 2);

    std::fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    assert_eq!(tmq(&["sequence", "--config", c]).status.code(), Some(1));
}
