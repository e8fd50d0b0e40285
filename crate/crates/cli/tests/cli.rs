use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use compressim::format::{parse_circuit, write_circuit};

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], noise_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_compressim"));
    cmd.args(args).current_dir(workspace()).env_remove("COMPRESSIM_NOISE");
    if let Some(v) = noise_env {
        cmd.env("COMPRESSIM_NOISE", v);
    }
    cmd.output().unwrap()
}

fn records(out: &[u8]) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(out);
    r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("compressim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn zero_coupling_edge() {
    let out = run(&["sweep", "--points", "1", "--jmax", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = records(&out.stdout);
    assert_eq!(rows[0], ["J", "M_exact_oracle", "M_compressed"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), -1.0);
}

#[test]
fn exact_sweep_has_one_row_per_point() {
    let out = run(&["sweep", "--n", "8", "--L", "240", "--points", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = records(&out.stdout);
    assert_eq!(rows.len(), 13);
    assert!(rows.iter().all(|r| r.len() == 3));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["sweep", "--n", "5"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--mode", "noisy-shots", "--points", "2"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--n", "8", "--mode", "compiled-circuit"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["tomo", "--gate", "Q"]).status.code(), Some(1));
    assert_eq!(run(&["tomo", "--gate", "H", "--shots", "0"]).status.code(), Some(1));
    assert_eq!(run(&["compile", "--builtin", "ising-j13"]).status.code(), Some(1));
    assert_eq!(run(&["tomo", "--gate", "H", "--noise", "/nonexistent.cfg"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn depth_violation_exits_three_with_artifact() {
    let out = run(&["compile", "--builtin", "step3q"]);
    assert_eq!(out.status.code(), Some(3));
    let c = parse_circuit(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(c.depth() > 39);
    let meta: serde_json::Value =
        serde_json::from_slice(&out.stderr[..out.stderr.iter().position(|&b| b == b'}').unwrap() + 1]).unwrap();
    assert!(meta["routing_cnot_overhead"].as_u64().unwrap() > 0);
    assert_eq!(meta["over_budget"], true);
}

#[test]
fn compiled_files_round_trip() {
    let circ = tmp("j1.txt");
    let meta = tmp("j1.json");
    let out =
        run(&["compile", "--builtin", "ising-j1", "--out", circ.to_str().unwrap(), "--meta", meta.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&circ).unwrap();
    let c = parse_circuit(&text).unwrap();
    assert_eq!(write_circuit(&c), text);
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&meta).unwrap()).unwrap();
    assert_eq!(m["depth"].as_u64().unwrap() as usize, c.depth());
    assert!(c.depth() <= 39);
    assert_eq!(m["t_count"].as_u64().unwrap() as usize, c.t_count());
    assert_eq!(m["cnot_count"].as_u64().unwrap() as usize, c.cnot_count());
    assert!(m["synthesis_error"].as_f64().is_some());
}

#[test]
fn empty_input_compiles_to_empty() {
    let input = tmp("empty.txt");
    std::fs::write(&input, "# nothing\n").unwrap();
    let out = run(&["compile", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = parse_circuit(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(c.is_empty());
}

#[test]
fn noiseless_tomography_row() {
    let out = run(&["tomo", "--gate", "H", "--noise", "off"]);
    let rows = records(&out.stdout);
    assert_eq!(rows[0], ["gate", "x", "y", "z", "F"]);
    assert_eq!(rows[1][0], "H");
    assert_eq!(rows[1][4].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn table_rows_follow_gate_order() {
    let out = run(&["tomo", "--all", "--noise", "configs/default.cfg", "--shots", "8192"]);
    let names: Vec<String> = records(&out.stdout).into_iter().skip(1).map(|r| r[0].clone()).collect();
    assert_eq!(names, ["1", "H", "T", "S", "SDG", "X", "CNOT"]);
}

#[test]
fn single_row_matches_table_row() {
    let all = records(&run(&["tomo", "--all", "--noise", "configs/default.cfg"]).stdout);
    let one = records(&run(&["tomo", "--gate", "x", "--noise", "configs/default.cfg"]).stdout);
    assert_eq!(one[1], all[6]);
}

#[test]
fn noise_path_from_environment() {
    let flag = run(&["tomo", "--gate", "X", "--noise", "configs/default.cfg"]);
    let env = run_env(&["tomo", "--gate", "X"], Some("configs/default.cfg"));
    assert_eq!(flag.stdout, env.stdout);
    assert_ne!(flag.stdout, run(&["tomo", "--gate", "X"]).stdout);
}

#[test]
fn timestamp_is_opt_in() {
    let plain = run(&["sweep", "--points", "1", "--jmax", "0"]);
    let stamped = run(&["sweep", "--points", "1", "--jmax", "0", "--timestamp"]);
    let text = String::from_utf8(stamped.stdout).unwrap();
    let (first, rest) = text.split_once('\n').unwrap();
    assert!(first.starts_with("# generated"));
    assert_eq!(rest.as_bytes(), &plain.stdout[..]);
}

#[test]
fn validate_report_shape() {
    let out = run(&["validate", "--builtin", "ising-j2", "--count", "20", "--noise", "configs/default.cfg"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = records(&out.stdout);
    assert_eq!(rows[0], ["circuit_id", "y_ideal", "y_measured", "e"]);
    assert_eq!(rows.len(), 22);
    let last = rows.last().unwrap();
    assert_eq!(last[0], "mean");
    let es: Vec<f64> = rows[1..21].iter().map(|r| r[3].parse().unwrap()).collect();
    let mean = es.iter().sum::<f64>() / 20.0;
    assert!((last[3].parse::<f64>().unwrap() - mean).abs() < 1e-12);
}

#[test]
fn noiseless_analytic_validation_is_exact() {
    let out = run(&["validate", "--builtin", "ising-j3", "--count", "5", "--noise", "off", "--analytic"]);
    let rows = records(&out.stdout);
    assert_eq!(rows.last().unwrap()[3].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn parametric_base_is_refused() {
    assert_eq!(run(&["validate", "--builtin", "step2q"]).status.code(), Some(1));
}
