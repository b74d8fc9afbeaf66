use std::fs;

use ladderlab::functionals::FermatTriple;
use ladderlab::harness::{cache_warm, run, Command, OutputFormat, RunConfig};
use ladderlab::zeta::cache::{self, SampleCache};
use ladderlab::Error;
use tempfile::tempdir;

#[test]
fn ladder_csv_schema() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("ladder.csv");
    let cfg = RunConfig {
        t: vec![1e4],
        k: 3,
        out: Some(out.clone()),
        ..RunConfig::new(Command::Ladder)
    };
    let report = run(&cfg).unwrap();
    assert!(report.pass);
    assert_eq!(report.exit_code(), 0);
    let text = fs::read_to_string(&out).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(
        header,
        [
            "r",
            "T_rm1",
            "T_r",
            "gap",
            "increment",
            "increment_over_1mc_T",
            "pass"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    // 17 significant digits round-trip
    let t_r: f64 = rows[0][2].parse().unwrap();
    assert_eq!(
        Some(&ladderlab::harness::Cell::Num(t_r)),
        report.rows[0].get(2)
    );
    assert!(rows.iter().all(|r| &r[6] == "true"));
}

#[test]
fn fermat_json_row() {
    let cfg = RunConfig {
        triple: Some(FermatTriple::new(1, 1, 1, 3).unwrap()),
        variant: 1,
        format: OutputFormat::Json,
        ..RunConfig::new(Command::Fermat)
    };
    let report = run(&cfg).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(v["schema"], 1);
    let row = &v["rows"][0];
    assert_eq!(row["rational"], 2.0);
    assert!(row["estimate"].as_f64().unwrap() > 1.9);
    assert!(row["distance"].as_f64().unwrap() >= 0.9);
    assert_eq!(v["provenance"]["config"]["command"], "fermat");
    assert!(v["provenance"]["wall_time_s"].is_null());
}

#[test]
fn empty_grid_is_rejected_without_output() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let cfg = RunConfig {
        x: vec![1.0],
        tau_grid: vec![],
        out: Some(out.clone()),
        ..RunConfig::new(Command::Functional)
    };
    assert!(matches!(
        run(&cfg),
        Err(Error::Config {
            field: "tau_grid",
            ..
        })
    ));
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn index_constraints_are_revalidated() {
    let cfg = RunConfig {
        t: vec![1e4],
        k: 3,
        r: 1,
        s: 4,
        ..RunConfig::new(Command::Selberg)
    };
    assert!(matches!(run(&cfg), Err(Error::Config { .. })));
}

#[test]
fn reports_are_byte_identical() {
    for cfg in [
        RunConfig {
            t: vec![1e4],
            format: OutputFormat::Json,
            ..RunConfig::new(Command::Ladder)
        },
        RunConfig {
            t: vec![1e4],
            ..RunConfig::new(Command::Ortho)
        },
        RunConfig {
            t: vec![15.0, 1234.5, 98765.4],
            format: OutputFormat::Json,
            ..RunConfig::new(Command::ZetaEval)
        },
    ] {
        let a = run(&cfg).unwrap().render(cfg.format);
        let b = run(&cfg).unwrap().render(cfg.format);
        assert_eq!(a, b);
    }
}

#[test]
fn budget_exhaustion_is_flagged() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("partial.json");
    let cfg = RunConfig {
        t: vec![1e4],
        budget: Some(1000),
        format: OutputFormat::Json,
        out: Some(out.clone()),
        ..RunConfig::new(Command::Selberg)
    };
    let report = run(&cfg).unwrap();
    assert!(report.partial && !report.pass);
    assert_eq!(report.exit_code(), 1);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["partial"], true);
    assert!(v["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn cache_warm_is_idempotent_and_used() {
    let dir = tempdir().unwrap();
    let first = cache_warm(1e3, 1e4, 1e-6, dir.path()).unwrap();
    assert!(first > 0);
    assert_eq!(cache_warm(1e3, 1e4, 1e-6, dir.path()).unwrap(), 0);
    let cache = SampleCache::load_dir(dir.path()).unwrap();
    assert_eq!(cache.len(), first);
    // an overlapping range only adds the missing nodes
    let more = cache_warm(1e3, 1.2e4, 1e-6, dir.path()).unwrap();
    assert!(more > 0 && more < first);

    let cfg = RunConfig {
        t: vec![1e4],
        cache_dir: Some(dir.path().to_path_buf()),
        ..RunConfig::new(Command::HlIntegral)
    };
    let warm = run(&cfg).unwrap();
    let stats = warm.provenance.cache.clone().unwrap();
    assert!(stats.hit_rate > 0.9, "{stats:?}");
    let cold = run(&RunConfig {
        cache_dir: None,
        ..cfg.clone()
    })
    .unwrap();
    assert_eq!(warm.rows, cold.rows);
}

#[test]
fn corrupted_cache_is_ignored() {
    let dir = tempdir().unwrap();
    cache_warm(100.0, 200.0, 1e-6, dir.path()).unwrap();
    let good = SampleCache::load_dir(dir.path()).unwrap().len();
    let path = dir.path().join(cache::file_name(1.0, 2.0, 1e-6));
    fs::write(&path, b"LLZX not a cache file at all, padding padding").unwrap();
    let cache = SampleCache::load_dir(dir.path()).unwrap();
    assert_eq!(cache.len(), good);
    let cfg = RunConfig {
        t: vec![150.0],
        cache_dir: Some(dir.path().to_path_buf()),
        ..RunConfig::new(Command::HlIntegral)
    };
    assert!(run(&cfg).unwrap().pass);
}

#[test]
fn cache_round_trip() {
    let samples = vec![(1.5, -0.25), (2.0, 3.0e-9)];
    let dir = tempdir().unwrap();
    let path = cache::write_file(dir.path(), 1.0, 2.0, 1e-6, &samples).unwrap();
    let (header, back) = cache::read_file(&path).unwrap();
    assert_eq!(back, samples);
    assert_eq!(header.count, 2);
    assert_eq!(header.t_end, 2.0);
}
