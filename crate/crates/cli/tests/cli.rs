use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn qfock() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qfock"));
    c.env_remove("QFOCK_OUTPUT_DIR");
    c
}

fn inputs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/inputs")
}

fn write_config(dir: &Path, config: &Value) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    path
}

fn run(config: &Path) -> Output {
    qfock().arg("run").arg(config).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let mut rows = vec![rdr.headers().unwrap().iter().map(String::from).collect()];
    rows.extend(rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()));
    rows
}

#[test]
fn list_shows_every_experiment() {
    let o = qfock().arg("list").output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() >= 10);
    assert!(text.contains("toeplitz-adjoint"));

    let o = qfock().args(["list", "--json"]).output().unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 13);
    assert!(names.contains(&"identity-suite"));
}

#[test]
fn unknown_experiment_suggests_a_name() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), &json!({"experiment": "carelson"}));
    let o = run(&cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("carleson"), "{}", stderr(&o));
}

#[test]
fn identity_suite_passes_and_writes_table() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), &json!({"experiment": "identity-suite", "seed": 3, "params": {"samples": 20}}));
    let o = run(&cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = read_csv(&dir.path().join("qfock-out/identity-suite.csv"));
    assert_eq!(rows[0], ["identity", "samples", "max_deviation", "tolerance", "pass"]);
    assert!(rows.len() > 10);
    assert!(rows[1..].iter().all(|r| r[4] == "true"));
    let verdict: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("qfock-out/identity-suite.json")).unwrap()).unwrap();
    assert_eq!(verdict["ok"], json!(true));
    assert_eq!(verdict["seed"], json!(3));
}

#[test]
fn carleson_on_lattice() {
    let dir = TempDir::new().unwrap();
    let measure = inputs().join("lattice.json");
    let cfg = write_config(
        dir.path(),
        &json!({"experiment": "carleson", "output_dir": "out", "params": {"alpha": 1.0, "r": 1.0},
                "inputs": {"measure": measure}}),
    );
    let o = run(&cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = read_csv(&dir.path().join("out/carleson.csv"));
    let head = &rows[0];
    let (ki, bi) = (head.iter().position(|h| h == "kernel_integral").unwrap(), head.iter().position(|h| h == "box_mass").unwrap());
    assert!(rows.len() > 5);
    for r in &rows[1..] {
        let (k, b): (f64, f64) = (r[ki].parse().unwrap(), r[bi].parse().unwrap());
        assert!(k.is_finite() && k >= 0.0 && b >= 0.0);
    }
    let verdict: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/carleson.json")).unwrap()).unwrap();
    assert_eq!(verdict["experiment"], json!("carleson"));
    assert!(verdict["checks"].as_array().unwrap().iter().all(|c| c["pass"] == json!(true)));
}

#[test]
fn toeplitz_adjoint_of_constant_unit() {
    let dir = TempDir::new().unwrap();
    let symbol = inputs().join("const_j.json");
    let cfg = write_config(
        dir.path(),
        &json!({"experiment": "toeplitz-adjoint", "params": {"n": 8}, "inputs": {"symbol": symbol}}),
    );
    let o = run(&cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = read_csv(&dir.path().join("qfock-out/toeplitz-adjoint.csv"));
    let d = rows[0].iter().position(|h| h == "adjoint_minus_adjoint_symbol").unwrap();
    assert_eq!(rows.len(), 1 + 64);
    for r in &rows[1..] {
        assert!(r[d].parse::<f64>().unwrap() < 1e-8);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let mut tables = Vec::new();
    for name in ["a", "b"] {
        let cfg = write_config(dir.path(), &json!({"experiment": "identity-suite", "seed": 11, "output_dir": name, "params": {"samples": 10}}));
        assert!(run(&cfg).status.success());
        tables.push(fs::read(dir.path().join(name).join("identity-suite.csv")).unwrap());
    }
    assert_eq!(tables[0], tables[1]);
}

#[test]
fn schema_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = [
        json!({"experiment": "schur", "colour": 1}),
        json!({"experiment": "schur", "params": {"radius": 2.0}}),
        json!({"experiment": "schur", "params": {"alpha": -1.0}}),
        json!({"experiment": "carleson", "inputs": {"measure": "missing.json"}}),
        json!({"experiment": "fixed-points", "inputs": {"symbol": "missing.json"}}),
    ];
    for cfg in bad {
        let o = run(&write_config(dir.path(), &cfg));
        assert_eq!(o.status.code(), Some(2), "{cfg}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    let o = qfock().args(["run", "/nonexistent/config.json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_check_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let symbol = inputs().join("cos_re.json");
    let cfg = write_config(
        dir.path(),
        &json!({"experiment": "semigroup", "params": {"alpha": 1.0, "beta": 2.0, "tolerance": 1e-300},
                "inputs": {"symbol": symbol}}),
    );
    let o = run(&cfg);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let verdict: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("qfock-out/semigroup.json")).unwrap()).unwrap();
    assert_eq!(verdict["ok"], json!(false));
}

#[test]
fn output_dir_from_environment() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("elsewhere");
    let cfg = write_config(dir.path(), &json!({"experiment": "fixed-points", "output_dir": "configured"}));
    let o = qfock().arg("run").arg(&cfg).env("QFOCK_OUTPUT_DIR", &target).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(target.join("fixed-points.csv").exists());
    assert!(!dir.path().join("configured").exists());
}

#[test]
fn bundled_configs_parse() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(configs).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
            assert!(v["experiment"].is_string(), "{}", path.display());
            seen += 1;
        }
    }
    assert_eq!(seen, 13);
}
