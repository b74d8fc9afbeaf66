#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::Value;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
}

pub fn oracles() -> Value {
    let text = std::fs::read_to_string(data_dir().join("oracles.json")).expect("oracles.json");
    serde_json::from_str(&text).expect("valid json")
}

pub fn oracle_f64(v: &Value, path: &[&str]) -> f64 {
    let mut cur = v;
    for key in path {
        cur = &cur[*key];
    }
    cur.as_f64()
        .unwrap_or_else(|| panic!("missing oracle {path:?}"))
}

/// Rows (t, z) of the frozen Hardy Z sample.
pub fn hardy_points() -> Vec<(f64, f64)> {
    let mut reader = csv::Reader::from_path(data_dir().join("hardy_z_points.csv")).expect("csv");
    reader
        .records()
        .map(|r| {
            let r = r.expect("record");
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect()
}
