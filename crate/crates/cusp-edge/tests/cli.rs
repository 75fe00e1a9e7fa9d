use std::path::PathBuf;
use std::process::Command;

use cusp_edge::cli::{emit, run, OutputFormat, RunReport};
use serde_json::Value;

const SMALL: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/small.txt");

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cusp-edge").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_config(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("cusp-edge-{}-{name}.conf", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn json_round_trip() {
    let (code, out, _) = call(&["eta", "--modes", "400"]);
    assert_eq!(code, 0, "{out}");
    let report: RunReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.command, "eta");
    assert_eq!(emit(&report, OutputFormat::Json), out);
}

#[test]
fn same_seed_same_bytes() {
    let a = call(&["blowup", "verify", "--seed", "5"]);
    let b = call(&["blowup", "verify", "--seed", "5"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["eta", "--bogus"]).0, 1);
    assert_eq!(call(&["eta", "--k", "9"]).0, 1);
    assert_eq!(call(&["--help"]).0, 0);
    assert_eq!(call(&["eta", "--tolerance", "1e-30"]).0, 2);
    assert_eq!(call(&["spectrum", "--f", "2"]).0, 1);
    assert_eq!(call(&["indexsets", "compose"]).0, 1);
    let (code, out, _) = call(&["indexsets", "compose", "--file", SMALL]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn csv_has_constant_width() {
    let (code, out, _) = call(&["kernels", "check", "--output", "csv"]);
    assert_eq!(code, 0);
    let mut rd = csv::Reader::from_reader(out.as_bytes());
    let width = rd.headers().unwrap().len();
    assert!(width > 1);
    let mut rows = 0;
    for rec in rd.records() {
        assert_eq!(rec.unwrap().len(), width);
        rows += 1;
    }
    assert!(rows > 0);
}

#[test]
fn config_file_then_flags() {
    let good = temp_config("good", "# circle\n[eta]\ntwist = 0.1\nmodes = 400\n[spectrum]\ntwist = 0.3\n");
    let path = good.to_str().unwrap();

    let (code, out, _) = call(&["eta", "--config", path]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["twist"], 0.1);

    let (code, out, _) = call(&["eta", "--config", path, "--twist", "0.4"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["twist"], 0.4);
    assert_eq!(v["config"]["modes"], 400.0);

    let bad = temp_config("bad", "[eta]\nwobble = 3\n");
    assert_eq!(call(&["eta", "--config", bad.to_str().unwrap()]).0, 1);
    assert_eq!(call(&["eta", "--config", "/nonexistent/cusp-edge.conf"]).0, 1);

    let _ = std::fs::remove_file(good);
    let _ = std::fs::remove_file(bad);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_cusp-edge"))
        .args(["clifford", "check", "--output", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("clifford check"));
    assert!(!text.contains("FAIL"));
    assert!(String::from_utf8(out.stderr).unwrap().contains("finished in"));
}
