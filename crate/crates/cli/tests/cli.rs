use std::process::{Command, Output};

use hamcomm::Check;
use hamcomm_cli::{parse_range, run, CellReport, Report, RunConfig, Suite, SuiteReport, SCHEMA_VERSION};

fn hamcomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamcomm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report_from(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("valid report json")
}

#[test]
fn kr_suite_passes() {
    let out = hamcomm(&["verify", "--d", "1..1", "--r", "3..5", "--suites", "kr"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = report_from(&out);
    assert_eq!(report.schema_version, SCHEMA_VERSION);
    let grid: Vec<(u32, u32)> = report.cells.iter().map(|c| (c.d, c.r)).collect();
    assert_eq!(grid, vec![(1, 3), (1, 4), (1, 5)]);
    for cell in &report.cells {
        assert_eq!(cell.suites.keys().collect::<Vec<_>>(), vec!["kr"]);
        assert!(cell.suites["kr"].checks.iter().all(|c| c.pass));
    }
}

#[test]
fn commutator_eigentable_h23() {
    let out = hamcomm(&["verify", "--d", "2..2", "--r", "3..3", "--suites", "commutator", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = report_from(&out);
    let table = &report.cells[0].eigentable;
    let rows: Vec<(i64, &str, u64, Option<u64>)> = table
        .iter()
        .map(|e| (e.s, e.eigenvalue.as_str(), e.predicted_dim, e.computed_dim))
        .collect();
    assert_eq!(
        rows,
        vec![
            (-2, "1/4", 1, Some(1)),
            (-1, "-1/2", 2, Some(2)),
            (0, "1", 3, Some(3)),
            (1, "-2", 2, Some(2)),
            (2, "4", 1, Some(1)),
        ]
    );
}

#[test]
fn json_round_trip() {
    let out = hamcomm(&["verify", "--d", "1..2", "--r", "3..3", "--suites", "hamming,split,tmodule"]);
    assert_eq!(out.status.code(), Some(0));
    let report = report_from(&out);
    let again: Report = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, again);
    let raw: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cell = &raw["cells"][0];
    for key in ["D", "r", "suites", "eigentable", "timing_ms"] {
        assert!(cell.get(key).is_some(), "missing {key}");
    }
    assert!(cell["suites"]["split"]["checks"][0].get("id").is_some());
    assert!(report.cells.iter().all(|c| c.tmodule_harvest.is_some()));
}

#[test]
fn csv_rows_per_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = hamcomm(&[
        "verify",
        "--d",
        "1..1",
        "--r",
        "3..3",
        "--suites",
        "kr,hamming",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        vec!["schema_version", "D", "r", "suite", "check", "pass", "detail"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert!(rows.iter().any(|r| &r[3] == "kr"));
    assert!(rows.iter().any(|r| &r[3] == "hamming"));
    assert!(rows.iter().all(|r| &r[5] == "true"));
    let ids: Vec<(&str, &str)> = rows.iter().map(|r| (r.get(3).unwrap(), r.get(4).unwrap())).collect();
    let mut unique = ids.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), ids.len(), "each check appears once per cell");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--r", "2..3"][..],
        &["verify", "--d", "4..4", "--r", "5..5"],
        &["verify", "--d", "3..1"],
        &["verify", "--suites", "nope"],
        &["verify", "--d", "1..1", "--r", "3..3", "--size-cap", "2"],
        &["eigentable", "--d", "2", "--r", "2"],
    ] {
        let out = hamcomm(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cap_boundary() {
    // 6^3 = 216 fits the default cap of 256
    let config = RunConfig {
        d_range: 3..=3,
        r_range: 6..=6,
        explicit_grid: true,
        ..RunConfig::default()
    };
    assert_eq!(config.cells().unwrap(), vec![(3, 6)]);
    let config = RunConfig {
        d_range: 4..=4,
        ..config
    };
    assert!(config.cells().is_err());
    assert_eq!(RunConfig { force: true, ..config }.cells().unwrap(), vec![(4, 6)]);
}

#[test]
fn default_grid_is_filtered() {
    let cells = RunConfig::default().cells().unwrap();
    assert!(cells.iter().all(|&(d, r)| (r as u128).pow(d) <= 256));
    assert!(cells.contains(&(4, 4)));
    assert!(!cells.contains(&(4, 5)));
    assert_eq!(cells.len(), 11);
}

#[test]
fn eigentable_command() {
    let out = hamcomm(&["eigentable", "--d", "10", "--r", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    let (body, total) = rows.split_at(rows.len() - 1);
    assert_eq!(body.len(), 21);
    let sum: u64 = body.iter().map(|r| r[2].parse::<u64>().unwrap()).sum();
    assert_eq!(sum, 5u64.pow(10));
    assert_eq!(total[0], vec!["sum", "9765625"]);
    assert_eq!(body[20], vec!["10", "1048576", "1"]);
}

#[test]
fn failing_check_sets_exit_code() {
    let mut report = run(
        &RunConfig {
            d_range: 1..=1,
            r_range: 3..=3,
            suites: vec![Suite::Kr],
            ..RunConfig::default()
        },
        1,
    )
    .unwrap();
    assert_eq!(report.exit_code(), 0);
    report.cells.push(CellReport {
        d: 9,
        r: 9,
        suites: [(
            "kr".to_string(),
            SuiteReport {
                checks: vec![Check::new("kr.synthetic", false)],
            },
        )]
        .into_iter()
        .collect(),
        eigentable: Vec::new(),
        tmodule_harvest: None,
        timing_ms: 0,
    });
    assert_eq!(report.exit_code(), 1);
    assert_eq!(report.failures(), vec!["H(9,9) kr: kr.synthetic".to_string()]);
}

#[test]
fn deterministic_order_with_workers() {
    let config = RunConfig {
        d_range: 1..=2,
        r_range: 3..=4,
        explicit_grid: true,
        suites: vec![Suite::Split, Suite::Hamming],
        ..RunConfig::default()
    };
    let a = run(&config, 3).unwrap();
    let grid: Vec<(u32, u32)> = a.cells.iter().map(|c| (c.d, c.r)).collect();
    assert_eq!(grid, vec![(1, 3), (1, 4), (2, 3), (2, 4)]);
    let b = run(&config, 1).unwrap();
    let strip = |r: &Report| -> Vec<CellReport> {
        r.cells.iter().cloned().map(|c| CellReport { timing_ms: 0, ..c }).collect()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn range_parsing() {
    assert_eq!(parse_range("1..4"), Ok(1..=4));
    assert_eq!(parse_range("2..=3"), Ok(2..=3));
    assert_eq!(parse_range("5"), Ok(5..=5));
    assert!(parse_range("4..1").is_err());
    assert!(parse_range("a..b").is_err());
}
