use std::path::Path;
use std::process::Command;

use lienard_cli::run;

fn lienard(args: &[&str], out: &Path) -> i32 {
    let mut argv = vec!["lienard"];
    argv.extend_from_slice(args);
    let out = out.to_str().unwrap();
    argv.extend_from_slice(&["--output", out]);
    run(argv)
}

#[test]
fn spectrum_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.csv");
    let code = lienard(&["spectrum", "--omega", "1", "--k", "1", "--alpha", "0", "--gamma", "0", "--n-max", "5"], &path);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,energy,hbar_omega_units"));
    let energies: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(energies, vec![0.5, 1.5, 2.5, 3.5, 4.5, 5.5]);
    assert!(dir.path().join("levels.meta.json").exists());
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    assert_eq!(lienard(&["spectrum", "--k", "1", "--alpha", "-9", "--gamma", "9", "--omega", "1"], &out), 2);
    assert_eq!(lienard(&["spectrum", "--nonsense", "1"], &out), 2);
    assert_eq!(lienard(&["spectrum", "--omega", "-1"], &out), 2);
    assert_eq!(lienard(&["wavefn", "--h-p", "0"], &out), 2);
    assert_eq!(run(["lienard", "explode"]), 2);
    let config = dir.path().join("bad.json");
    std::fs::write(&config, "{ not json").unwrap();
    assert_eq!(lienard(&["spectrum", "--config", config.to_str().unwrap()], &out), 2);
    assert!(!out.exists());
}

#[test]
fn failing_check_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.csv");
    // a coarse y grid misses the 1e-5 spectrum tolerance
    assert_eq!(lienard(&["verify", "--points", "600"], &out), 1);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("check,params,measured,expected,tolerance,passed\n"));
    assert!(text.lines().any(|l| l.starts_with("spectrum_level_0,") && l.ends_with(",false")));
}

#[test]
fn verify_example_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.json");
    let code = lienard(&["verify", "--omega", "1", "--k", "1", "--alpha", "19", "--gamma", "1", "--format", "json"], &out);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["meta"]["params"]["alpha"], 19.0);
    assert!(doc["meta"]["version"].is_string());
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.len() > 30);
    assert!(rows.iter().all(|r| r["passed"] == true));
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for command in ["classical", "wavefn", "sweep", "limit"] {
        let a = dir.path().join(format!("{command}-a.csv"));
        let b = dir.path().join(format!("{command}-b.csv"));
        assert_eq!(lienard(&[command, "--alpha", "19", "--gamma", "1"], &a), 0, "{command}");
        assert_eq!(lienard(&[command, "--alpha", "19", "--gamma", "1"], &b), 0, "{command}");
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{command}");
    }
    let header = |name: &str| std::fs::read_to_string(dir.path().join(name)).unwrap().lines().next().unwrap().to_owned();
    assert_eq!(header("classical-a.csv"), "t,x_numeric,x_analytic,abs_err");
    assert_eq!(header("wavefn-a.csv"), "p,y,psi");
}

#[test]
fn sweep_rows_are_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let args = ["sweep", "--omega-values", "2,1", "--k-values", "0.5,1,0.25", "--alpha-gamma-values", "19,0"];
    assert_eq!(lienard(&args, &out), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let keys: Vec<(f64, f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').take(3).map(|v| v.parse().unwrap()).collect();
            (f[0], f[1], f[2])
        })
        .collect();
    assert_eq!(keys.len(), 12);
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"omega": 2.0, "n_max": 2, "format": "json"}"#).unwrap();
    let out = dir.path().join("levels.json");
    let code = lienard(&["spectrum", "--config", config.to_str().unwrap(), "--n-max", "1"], &out);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["energy"], 1.0);
    assert_eq!(doc["meta"]["params"]["omega"], 2.0);
}

#[test]
fn binary_honours_output_dir_env() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_lienard"))
        .args(["spectrum", "--n-max", "2"])
        .env("LIENARD_OUTPUT_DIR", dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(dir.path().join("spectrum.csv").exists());
    assert!(dir.path().join("spectrum.meta.json").exists());
}
