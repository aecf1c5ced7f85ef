use std::path::PathBuf;
use std::process::{Command as Process, Output};

use dephase::cli::{run, validate, Cell, Command, OutputFormat, RangeSpec, RunConfig};

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dephase-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn bin(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_dephase")).args(args).output().unwrap()
}

fn range(text: &str) -> Option<RangeSpec> {
    Some(text.parse().unwrap())
}

fn discord_config() -> RunConfig {
    RunConfig {
        command: Some(Command::Discord),
        s: range("1"),
        temperature: Some(0.0),
        c: Some(0.1),
        t: range("0:10:500"),
        ..Default::default()
    }
}

#[test]
fn discord_example_has_transition_at_three() {
    let report = run(&discord_config()).unwrap();
    let col = report.table.column("transition_time").unwrap();
    let t_bar = report.table.rows[0][col].as_f64().unwrap();
    assert!((t_bar - 3.0).abs() < 1e-6);
    assert_eq!(report.table.rows.len(), 500);
}

#[test]
fn frozen_region_example() {
    let cfg = RunConfig {
        command: Some(Command::FrozenRegion),
        s: range("0.5:4:200"),
        temperature: Some(0.0),
        ..Default::default()
    };
    let table = run(&cfg).unwrap().table;
    let s_col = table.column("s").unwrap();
    let c_col = table.column("c_star").unwrap();
    for row in &table.rows {
        let s = row[s_col].as_f64().unwrap();
        let c = row[c_col].as_f64().unwrap();
        if s <= 1.0 {
            assert_eq!(c, 0.0);
            assert_eq!(row[table.column("sup_Lambda").unwrap()], Cell::text("diverges"));
        } else {
            assert!(c > 0.0);
        }
    }
    let exact = run(&RunConfig { s: range("1,2"), ..cfg }).unwrap().table;
    assert_eq!(exact.rows[0][c_col].as_f64(), Some(0.0));
    assert!((exact.rows[1][c_col].as_f64().unwrap() - 0.13534).abs() < 1e-5);
}

#[test]
fn scrit_at_zero_temperature() {
    let cfg = RunConfig {
        command: Some(Command::Scrit),
        temperatures: range("0"),
        ..Default::default()
    };
    let table = run(&cfg).unwrap().table;
    assert!((table.rows[0][1].as_f64().unwrap() - 2.0).abs() < 0.02);
}

#[test]
fn json_round_trip_is_exact() {
    let report = run(&discord_config()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&report.render(OutputFormat::Json)).unwrap();
    assert_eq!(doc["meta"], report.meta);
    let rows = doc["rows"].as_array().unwrap();
    for (row, json_row) in report.table.rows.iter().zip(rows) {
        for (cell, v) in row.iter().zip(json_row.as_array().unwrap()) {
            match cell {
                Cell::Num(x) => assert_eq!(v.as_f64().unwrap().to_bits(), x.to_bits()),
                Cell::Int(n) => assert_eq!(v.as_u64(), Some(*n)),
                Cell::Text(s) => assert_eq!(v.as_str(), Some(s.as_str())),
            }
        }
    }
}

#[test]
fn csv_round_trip_is_exact() {
    let report = run(&discord_config()).unwrap();
    let csv = report.render(OutputFormat::Csv);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), report.table.columns.len());
    for (row, line) in report.table.rows.iter().zip(lines) {
        for (cell, text) in row.iter().zip(line.split(',')) {
            if let Cell::Num(x) = cell {
                assert_eq!(text.parse::<f64>().unwrap().to_bits(), x.to_bits());
            }
        }
    }
}

#[test]
fn every_command_emits_finite_tables_and_is_repeatable() {
    let base = RunConfig {
        temperature: Some(0.5),
        c: Some(0.3),
        s: range("0.5,2.5"),
        t: range("log:0.1:20:6"),
        ..Default::default()
    };
    let configs = [
        RunConfig { command: Some(Command::Rate), ..base.clone() },
        RunConfig { command: Some(Command::Factor), ..base.clone() },
        RunConfig { command: Some(Command::Discord), ..base.clone() },
        RunConfig { command: Some(Command::Landscape), ..base.clone() },
        RunConfig { command: Some(Command::FrozenRegion), ..base.clone() },
        RunConfig { command: Some(Command::Backflow), t_max: Some(30.0), ..base.clone() },
        RunConfig { command: Some(Command::Convexity), temperatures: range("0,1"), ..base.clone() },
        RunConfig { command: Some(Command::Convexity), temperatures: range("0,1"), s: None, ..base.clone() },
    ];
    for cfg in configs {
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert!(a.table.all_finite());
        assert!(!a.table.rows.is_empty());
        assert_eq!(a.render(OutputFormat::Csv), b.render(OutputFormat::Csv));
        assert_eq!(a.render(OutputFormat::Json), b.render(OutputFormat::Json));
        let one = run(&RunConfig { threads: Some(1), ..cfg.clone() }).unwrap();
        assert_eq!(one.render(OutputFormat::Json), a.render(OutputFormat::Json), "{:?}", cfg.command);
    }
}

#[test]
fn factor_reports_divergent_limits_as_text() {
    let cfg = RunConfig {
        command: Some(Command::Factor),
        s: range("1,3"),
        temperature: Some(0.0),
        t: range("1"),
        ..Default::default()
    };
    let table = run(&cfg).unwrap().table;
    let col = table.column("Lambda_inf").unwrap();
    assert_eq!(table.rows[0][col], Cell::text("diverges"));
    assert!((table.rows[1][col].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn physical_units_rescale_time_and_rate() {
    let reduced = RunConfig {
        command: Some(Command::Rate),
        s: range("1"),
        temperature: Some(0.0),
        t: range("2"),
        ..Default::default()
    };
    let physical = RunConfig { omega_c: Some(4.0), ..reduced.clone() };
    let r = run(&reduced).unwrap().table;
    let p = run(&physical).unwrap().table;
    assert_eq!(p.columns[2], "t [s]");
    assert_eq!(p.rows[0][2].as_f64().unwrap(), 0.5);
    assert_eq!(p.rows[0][3].as_f64().unwrap(), 4.0 * r.rows[0][3].as_f64().unwrap());
}

#[test]
fn validate_collects_all_problems() {
    let cfg = RunConfig {
        command: Some(Command::Discord),
        s: Some(RangeSpec::single(-1.0)),
        c: Some(1.5),
        ..Default::default()
    };
    let diags = validate(&cfg);
    assert!(diags.contains(&"s must be > 0".to_string()));
    assert!(diags.contains(&"|c| must be < 1".to_string()));
    assert!(diags.len() >= 4, "{diags:?}");
}

#[test]
fn binary_writes_table_and_meta_sidecar() {
    let dir = scratch_dir("sidecar");
    let out = dir.join("frozen.csv");
    let status = bin(&["frozen-region", "--T", "0", "--s", "1.5,2,2.5", "--out", out.to_str().unwrap()]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("s [1],sup_Lambda [1],t_peak [1/omega_c],c_star [1]\n"));
    assert_eq!(csv.lines().count(), 4);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("frozen.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["command"], "frozen-region");
    assert_eq!(meta["grids"]["s"]["count"], 3);
    assert!(meta["version"].is_string());
    assert!(meta["quadrature"]["relative_tolerance"].is_number());
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = scratch_dir("config");
    let path = dir.join("run.ini");
    std::fs::write(&path, "# discord run\ncommand = discord\ns = 1\nT = 0\nc = 0.5\nt = 0:4:5\noutput = json\n").unwrap();
    let from_file = bin(&["--config", path.to_str().unwrap()]);
    assert!(from_file.status.success(), "{}", String::from_utf8_lossy(&from_file.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    let t_bar = doc["rows"][0][8].as_f64().unwrap();
    assert!((t_bar - 1.0).abs() < 1e-9);
    let overridden = bin(&["--config", path.to_str().unwrap(), "--c", "0.25"]);
    let doc: serde_json::Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert!((doc["rows"][0][8].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-9);
    assert_eq!(doc["meta"]["parameters"]["c"], 0.25);
}

#[test]
fn tabulated_spectrum_through_the_binary() {
    let dir = scratch_dir("tabulated");
    let path = dir.join("ohmic.csv");
    let mut text = String::from("omega,J\n");
    for k in 1..=4000 {
        let w = k as f64 * 0.01;
        text.push_str(&format!("{w},{}\n", w * (-w).exp()));
    }
    std::fs::write(&path, text).unwrap();
    let out = bin(&["rate", "--spectrum-csv", path.to_str().unwrap(), "--T", "0", "--t", "1", "--output", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"][0][0], "tabulated");
    // Ohmic s = 1: γ(t) = t/(1+t²)
    let gamma = doc["rows"][0][3].as_f64().unwrap();
    assert!((gamma - 0.5).abs() < 1e-4, "{gamma}");
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["bogus"]).status.code(), Some(2));
    assert_eq!(bin(&["discord", "--s", "1", "--T", "0", "--c", "1.5", "--t", "1"]).status.code(), Some(2));
    let bad_csv = scratch_dir("badcsv").join("bad.csv");
    std::fs::write(&bad_csv, "w,J\n1,2\n").unwrap();
    assert_eq!(
        bin(&["rate", "--spectrum-csv", bad_csv.to_str().unwrap(), "--T", "0", "--t", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bin(&["rate", "--s", "1", "--T", "0", "--t", "1", "--out", "/nonexistent-dir/x.csv"]).status.code(),
        Some(4)
    );
    assert_eq!(bin(&["rate", "--spectrum-csv", "/nonexistent.csv", "--T", "0", "--t", "1"]).status.code(), Some(4));
    let missing = bin(&["landscape", "--s", "2", "--T", "0", "--t", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("missing field `c`"));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}
