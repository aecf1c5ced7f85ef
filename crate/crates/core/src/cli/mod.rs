//! Command-line front end for the `dephase` binary.
//!
//! Each run evaluates one command over its parameter grids and writes a
//! single table (CSV or JSON) together with a `meta` block recording the
//! tolerances, grids and crate version. Rows are ordered with the outer grid
//! varying slowest; parallel evaluation never changes values or order.
//!
//! Parameters come from flags and optionally from a flat `key = value` file
//! given by `--config`; flags win.

mod commands;
mod config_file;
mod range;
mod table;

pub use range::RangeSpec;
pub use table::{Cell, Table};

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::dephasing::{NEGATIVITY_FLOOR, RATE_SCAN_GRID, S_CRIT_GRID_THERMAL, S_CRIT_GRID_ZERO_T};
use crate::numerics::QuadratureSpec;
use crate::spectral::{TabulatedSpectrum, DEFAULT_CONVEXITY_GRID, DEFAULT_CONVEXITY_RANGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Command {
    /// Dephasing rate γ(t).
    Rate,
    /// Dephasing factor Λ(t), coherence and the long-time limit.
    Factor,
    /// Critical Ohmicity per temperature.
    Scrit,
    /// Convexity threshold of the thermal weight, or per-s convexity.
    Convexity,
    /// Mutual information, classical correlations and discord in time.
    Discord,
    /// Which correlations decay, on an (s, t) grid.
    Landscape,
    /// Boundary of the frozen-discord region in s.
    FrozenRegion,
    /// Negative-rate intervals and coherence backflow.
    Backflow,
}

impl Command {
    pub fn name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Raw command line. Values stay textual until merged with the config file
/// so that every malformed value can be reported at once.
#[derive(Debug, Parser)]
#[command(name = "dephase", version, about = "Pure-dephasing dynamics, non-Markovianity and frozen discord", allow_negative_numbers = true)]
pub struct Args {
    /// Command to run; may also be set as `command` in the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Ohmicity: a value, a list `a,b`, or `min:max:count` (prefix `log:` for log spacing).
    #[arg(long)]
    pub s: Option<String>,
    /// Temperature k_B T / ħω_c.
    #[arg(long = "T")]
    pub temperature: Option<String>,
    /// Temperature grid for `scrit` and `convexity`.
    #[arg(long)]
    pub temperatures: Option<String>,
    /// Bell-diagonal state parameter, |c| < 1.
    #[arg(long)]
    pub c: Option<String>,
    /// Time grid in units of 1/ω_c.
    #[arg(long)]
    pub t: Option<String>,
    /// Scan window for `backflow`.
    #[arg(long = "t-max")]
    pub t_max: Option<String>,
    /// Cutoff frequency in rad/s; outputs are converted to seconds and kelvin.
    #[arg(long = "omega-c")]
    pub omega_c: Option<String>,
    /// Tabulated spectrum, two-column CSV with header `omega,J`.
    #[arg(long = "spectrum-csv")]
    pub spectrum_csv: Option<String>,
    /// `csv` or `json`.
    #[arg(long)]
    pub output: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<String>,
    /// Flat `key = value` file with defaults for any of the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Relative quadrature tolerance.
    #[arg(long = "tol-rel")]
    pub tol_rel: Option<String>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<String>,
}

/// A fully parsed run. Fields that a command does not need are ignored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub s: Option<RangeSpec>,
    pub temperature: Option<f64>,
    pub temperatures: Option<RangeSpec>,
    pub c: Option<f64>,
    pub t: Option<RangeSpec>,
    pub t_max: Option<f64>,
    pub omega_c: Option<f64>,
    pub spectrum_csv: Option<PathBuf>,
    pub quadrature: QuadratureSpec,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config entries or input files (exit 2).
    Usage(Vec<String>),
    /// The computation itself failed (exit 3).
    Numerical(String),
    /// Reading or writing files failed (exit 4).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(lines) => {
                let lines: Vec<String> = lines.iter().map(|l| format!("error: {l}")).collect();
                write!(f, "{}", lines.join("\n"))
            }
            CliError::Numerical(m) => write!(f, "error: numerical failure: {m}"),
            CliError::Io(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

/// A computed table and its metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub meta: Value,
}

impl Report {
    /// The main output text in the requested format.
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.table.to_csv(),
            OutputFormat::Json => self.table.to_json(&self.meta),
        }
    }
}

impl RunConfig {
    /// Merges flags over the entries of `--config`, parsing every value.
    /// Unparseable values come back as diagnostics; only a config file that
    /// cannot be read is an error.
    pub fn from_args(args: &Args) -> Result<(RunConfig, Vec<String>), CliError> {
        let mut entries = BTreeMap::new();
        let mut diags = Vec::new();
        if let Some(path) = &args.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
            let (file_entries, file_diags) = config_file::parse(&text);
            entries = file_entries;
            diags = file_diags;
        }
        let flags = [
            ("s", &args.s),
            ("T", &args.temperature),
            ("temperatures", &args.temperatures),
            ("c", &args.c),
            ("t", &args.t),
            ("t-max", &args.t_max),
            ("omega-c", &args.omega_c),
            ("spectrum-csv", &args.spectrum_csv),
            ("output", &args.output),
            ("out", &args.out),
            ("tol-rel", &args.tol_rel),
            ("threads", &args.threads),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                entries.insert(key.to_string(), v.clone());
            }
        }
        if let Some(c) = args.command {
            entries.insert("command".into(), c.name());
        }
        let cfg = Self::from_entries(&entries, &mut diags);
        Ok((cfg, diags))
    }

    fn from_entries(entries: &BTreeMap<String, String>, diags: &mut Vec<String>) -> RunConfig {
        fn get<T>(
            entries: &BTreeMap<String, String>,
            key: &str,
            diags: &mut Vec<String>,
            parse: impl Fn(&str) -> Result<T, String>,
        ) -> Option<T> {
            let raw = entries.get(key)?;
            parse(raw.trim()).map_err(|e| diags.push(format!("{key}: {e}"))).ok()
        }
        let number = |v: &str| v.parse::<f64>().map_err(|_| format!("`{v}` is not a number"));
        let range = |v: &str| v.parse::<RangeSpec>();
        let mut quadrature = QuadratureSpec::default();
        if let Some(tol) = get(entries, "tol-rel", diags, number) {
            quadrature.relative_tolerance = tol;
        }
        RunConfig {
            command: get(entries, "command", diags, |v| {
                Command::from_str(v, true).map_err(|_| format!("unknown command `{v}`"))
            }),
            s: get(entries, "s", diags, range),
            temperature: get(entries, "T", diags, number),
            temperatures: get(entries, "temperatures", diags, range),
            c: get(entries, "c", diags, number),
            t: get(entries, "t", diags, range),
            t_max: get(entries, "t-max", diags, number),
            omega_c: get(entries, "omega-c", diags, number),
            spectrum_csv: get(entries, "spectrum-csv", diags, |v| Ok(PathBuf::from(v))),
            quadrature,
            output_format: get(entries, "output", diags, |v| {
                OutputFormat::from_str(v, true).map_err(|_| format!("unknown output format `{v}`"))
            })
            .unwrap_or_default(),
            output_path: get(entries, "out", diags, |v| Ok(PathBuf::from(v))),
            threads: get(entries, "threads", diags, |v| {
                v.parse::<usize>().map_err(|_| format!("`{v}` is not a thread count"))
            }),
        }
    }

    fn temperature_grid(&self) -> Option<RangeSpec> {
        self.temperatures
            .clone()
            .or_else(|| self.temperature.map(RangeSpec::single))
    }
}

/// Every problem with `cfg`; an empty list means it can run.
pub fn validate(cfg: &RunConfig) -> Vec<String> {
    use Command::*;
    let mut d = Vec::new();

    if let Some(s) = &cfg.s {
        d.extend(s.diagnostics("s"));
        if s.values().iter().any(|&x| !(x > 0.0)) {
            d.push("s must be > 0".into());
        }
    }
    if let Some(t) = cfg.temperature {
        if !(t >= 0.0) || !t.is_finite() {
            d.push("T must be finite and >= 0".into());
        }
    }
    if let Some(ts) = &cfg.temperatures {
        d.extend(ts.diagnostics("temperatures"));
        if ts.values().iter().any(|&x| !(x >= 0.0)) {
            d.push("temperatures must be >= 0".into());
        }
    }
    if let Some(c) = cfg.c {
        if !(c.abs() < 1.0) {
            d.push("|c| must be < 1".into());
        }
    }
    if let Some(t) = &cfg.t {
        d.extend(t.diagnostics("t"));
        let v = t.values();
        if v.iter().any(|&x| !(x >= 0.0)) {
            d.push("t must be >= 0".into());
        }
        if v.windows(2).any(|w| !(w[1] > w[0])) {
            d.push("t values must be strictly increasing".into());
        }
    }
    if let Some(x) = cfg.t_max {
        if !(x > 0.0) || !x.is_finite() {
            d.push("t-max must be finite and > 0".into());
        }
    }
    if let Some(w) = cfg.omega_c {
        if !(w > 0.0) || !w.is_finite() {
            d.push("omega-c must be finite and > 0".into());
        }
    }
    if let Err(e) = cfg.quadrature.validate() {
        d.push(e.to_string());
    }
    if cfg.threads == Some(0) {
        d.push("threads must be >= 1".into());
    }

    let Some(command) = cfg.command else {
        d.push("missing field `command`".into());
        return d;
    };
    let name = command.name();
    let mut missing = |field: &str, present: bool| {
        if !present {
            d.push(format!("missing field `{field}` for command {name}"));
        }
    };
    match command {
        Rate | Factor | Discord | Backflow => {
            missing("s", cfg.s.is_some() || cfg.spectrum_csv.is_some());
            missing("T", cfg.temperature.is_some());
        }
        Landscape | FrozenRegion => {
            missing("s", cfg.s.is_some());
            missing("T", cfg.temperature.is_some());
        }
        Scrit => missing("temperatures", cfg.temperature_grid().is_some()),
        Convexity => missing("temperatures", cfg.temperature_grid().is_some()),
    }
    if matches!(command, Rate | Factor | Discord | Landscape) {
        missing("t", cfg.t.is_some());
    }
    if matches!(command, Discord | Landscape) {
        missing("c", cfg.c.is_some());
    }
    if cfg.spectrum_csv.is_some() {
        if matches!(command, Rate | Factor | Discord | Backflow) {
            if cfg.s.is_some() {
                d.push("give either `s` or `spectrum-csv`, not both".into());
            }
        } else {
            d.push(format!("`spectrum-csv` is not supported by command {}", command.name()));
        }
    }
    d
}

/// Validates `cfg`, loads any tabulated spectrum and computes the table.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let diags = validate(cfg);
    if !diags.is_empty() {
        return Err(CliError::Usage(diags));
    }
    let spectrum = match &cfg.spectrum_csv {
        Some(path) => Some(Arc::new(load_spectrum(path)?)),
        None => None,
    };
    let compute = || commands::build(cfg, spectrum.clone());
    let table = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Numerical(format!("cannot start thread pool: {e}")))?
            .install(compute)?,
        None => compute()?,
    };
    Ok(Report {
        table,
        meta: meta(cfg),
    })
}

fn load_spectrum(path: &Path) -> Result<TabulatedSpectrum, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read spectrum {}: {e}", path.display())))?;
    TabulatedSpectrum::from_csv_reader(bytes.as_slice())
        .map_err(|e| CliError::Usage(vec![format!("spectrum-csv: {e}")]))
}

fn meta(cfg: &RunConfig) -> Value {
    let grid = |r: &Option<RangeSpec>| {
        r.as_ref()
            .map(|r| json!({ "spec": r.to_string(), "count": r.len() }))
    };
    json!({
        "tool": "dephase",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command.map(|c| c.name()),
        "units": match cfg.omega_c {
            Some(w) => json!({ "omega_c_rad_per_s": w }),
            None => json!("reduced"),
        },
        "spectrum": match &cfg.spectrum_csv {
            Some(p) => json!({ "tabulated": p.display().to_string() }),
            None => json!("ohmic"),
        },
        "parameters": { "T": cfg.temperature, "c": cfg.c, "t_max": cfg.t_max },
        "grids": {
            "s": grid(&cfg.s),
            "t": grid(&cfg.t),
            "temperatures": grid(&cfg.temperatures),
        },
        "quadrature": cfg.quadrature,
        "scan": {
            "rate_scan_cells": RATE_SCAN_GRID,
            "s_crit_cells_zero_t": S_CRIT_GRID_ZERO_T,
            "s_crit_cells_thermal": S_CRIT_GRID_THERMAL,
            "negativity_floor": NEGATIVITY_FLOOR,
            "convexity_range": [DEFAULT_CONVEXITY_RANGE.lo, DEFAULT_CONVEXITY_RANGE.hi],
            "convexity_cells": DEFAULT_CONVEXITY_GRID,
        },
    })
}

/// Writes the report where `cfg` asks. CSV output gets its meta block in a
/// `<out>.meta.json` sidecar, or on standard error when writing to standard
/// output.
pub fn write_report(report: &Report, cfg: &RunConfig) -> Result<(), CliError> {
    let body = report.render(cfg.output_format);
    let csv = cfg.output_format == OutputFormat::Csv;
    match &cfg.output_path {
        Some(path) => {
            write_file(path, &body)?;
            if csv {
                let mut name = path.as_os_str().to_owned();
                name.push(".meta.json");
                let mut meta = serde_json::to_string_pretty(&report.meta).expect("meta serializes");
                meta.push('\n');
                write_file(Path::new(&name), &meta)?;
            }
        }
        None => {
            std::io::stdout()
                .lock()
                .write_all(body.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write output: {e}")))?;
            if csv {
                eprintln!("meta: {}", serde_json::to_string(&report.meta).expect("meta serializes"));
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Entry point shared by the binary and the tests; returns the exit status.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = RunConfig::from_args(&args).and_then(|(cfg, diags)| {
        if !diags.is_empty() {
            let mut all = diags;
            all.extend(validate(&cfg));
            return Err(CliError::Usage(all));
        }
        let report = run(&cfg)?;
        write_report(&report, &cfg)
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
