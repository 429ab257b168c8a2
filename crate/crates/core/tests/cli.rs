//! The `mahlerlab` binary as a subprocess.

use std::process::{Command, Output};

fn mahlerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahlerlab"))
        .args(args)
        .env_remove("MAHLERLAB_CACHE")
        .output()
        .expect("run mahlerlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_main_theorem() {
    let o = mahlerlab(&["verify", "thm-1.1", "--precision", "128"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS thm-1.1"));
}

#[test]
fn exact_suite_as_json() {
    let o = mahlerlab(&["verify", "--all", "--filter", "exact", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        for key in ["schema", "id", "lhs", "rhs", "deviation", "tolerance", "pass", "wall_ms", "evals", "seed"] {
            assert!(row.get(key).is_some(), "{key} missing from {row}");
        }
        assert_eq!(row["tolerance"], 0.0);
    }
    // The point-count formula check fails at p = 5 and 13; every other
    // exact check has deviation exactly zero.
    let failing: Vec<&str> = rows.iter().filter(|r| r["pass"] == false).map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(failing, ["ff-4.1"]);
    assert!(rows.iter().filter(|r| r["id"] != "ff-4.1").all(|r| r["deviation"] == 0.0));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_id_suggests_neighbours() {
    let o = mahlerlab(&["verify", "eq-9.9"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("did you mean"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify"][..],
        &["verify", "--all", "--format", "xml"],
        &["verify", "thm-1.1", "--precision", "5000"],
        &["verify", "thm-1.1", "--seed", "bogus"],
        &["compute", "zeta"],
        &["compute", "nothing"],
        &["frobnicate"],
    ] {
        assert_eq!(mahlerlab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn compute_examples() {
    let o = mahlerlab(&["compute", "zeta", "3", "--digits", "30"]);
    assert_eq!(stdout(&o).lines().next(), Some("1.202056903159594285399738161511"));
    let o = mahlerlab(&["compute", "ap", "7"]);
    assert_eq!(stdout(&o).lines().next(), Some("24"));
    let o = mahlerlab(&["compute", "mRk", "1e6", "--digits", "12"]);
    let v: f64 = stdout(&o).lines().next().unwrap().parse().unwrap();
    assert!((v - 1e6f64.ln()).abs() < 1e-11);
}

#[test]
fn config_file_and_cache_environment() {
    let dir = std::env::temp_dir().join(format!("mahlerlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "precision = 96\nformat = csv\n").unwrap();
    let cache = dir.join("coeffs");
    let o = Command::new(env!("CARGO_BIN_EXE_mahlerlab"))
        .args(["verify", "lambda-symmetry-f", "--config", cfg.to_str().unwrap()])
        .env("MAHLERLAB_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("schema,id"));
    assert!(text.lines().nth(1).unwrap().contains(",96,"));
    assert!(cache.join("f.coeffs").is_file());
    // A flag beats the file.
    let o = mahlerlab(&["verify", "wz-pair-1", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert!(stdout(&o).trim_start().starts_with('['));
    std::fs::remove_dir_all(&dir).unwrap();
}
