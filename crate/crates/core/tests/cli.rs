use std::fs;
use std::process::Command;

use tempfile::tempdir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ladderlab"));
    c.env_remove("LADDERLAB_CACHE");
    c
}

#[test]
fn fermat_subcommand_emits_json() {
    let out = bin()
        .args([
            "fermat",
            "--triple",
            "1,1,1,3",
            "--variant",
            "1",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"][0]["rational"], 2.0);
}

#[test]
fn failing_checks_set_the_exit_status() {
    let out = bin()
        .args(["functional", "--x", "1", "--tau-grid", "1000,10000,30000"])
        .output()
        .unwrap();
    let v = String::from_utf8(out.stdout).unwrap();
    assert!(v.starts_with("kind,x,tau,raw,corrected,target,residual,pass"));
    // this grid does not show a strictly decreasing residual
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_configuration_exits_with_two() {
    let dir = tempdir().unwrap();
    let target = dir.path().join("x.csv");
    let out = bin()
        .args(["ladder", "--T", "10000", "--k", "0", "--out"])
        .arg(&target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`k`"));
    assert!(!target.exists());
}

#[test]
fn environment_overrides_cache_dir() {
    let env_dir = tempdir().unwrap();
    let flag_dir = tempdir().unwrap();
    let status = bin()
        .env("LADDERLAB_CACHE", env_dir.path())
        .args([
            "cache-warm",
            "--t-start",
            "100",
            "--t-end",
            "200",
            "--cache-dir",
        ])
        .arg(flag_dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(fs::read_dir(env_dir.path()).unwrap().count() > 0);
    assert_eq!(fs::read_dir(flag_dir.path()).unwrap().count(), 0);
}

#[test]
fn out_file_is_written_atomically() {
    let dir = tempdir().unwrap();
    let target = dir.path().join("sub").join("z.json");
    let status = bin()
        .args([
            "zeta-eval",
            "--T",
            "14.134725141734695,100",
            "--format",
            "json",
            "--out",
        ])
        .arg(&target)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert!(v["rows"][0]["z"].as_f64().unwrap().abs() < 1e-6);
    let leftovers: Vec<_> = fs::read_dir(target.parent().unwrap())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}
