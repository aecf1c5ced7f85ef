use std::sync::Arc;

use rayon::prelude::*;

use super::table::{Cell, Table};
use super::{Command, RunConfig};
use crate::correlations::{
    correlation_trajectories, frozen_region_with, transition_landscape_with, BellDiagonalParams, SupFactor,
    TransitionTime,
};
use crate::dephasing::{
    dephasing_factor, dephasing_rate, factor_asymptote, find_s_crit_with, negative_rate_report, scan_horizon,
    Asymptote, RATE_SCAN_GRID, S_CRIT_GRID_THERMAL, S_CRIT_GRID_ZERO_T,
};
use crate::error::{Error, Result};
use crate::spectral::{
    convexity_threshold_s, is_convex, Environment, Spectrum, TabulatedSpectrum, DEFAULT_CONVEXITY_GRID,
    DEFAULT_CONVEXITY_RANGE,
};

/// ħ/k_B in kelvin seconds.
const HBAR_OVER_KB: f64 = 7.638_232_577_577_4e-12;

/// Output units: reduced, or physical once `ω_c` in rad/s is known.
struct Units(Option<f64>);

impl Units {
    fn time(&self, t: f64) -> f64 {
        self.0.map_or(t, |w| t / w)
    }

    fn rate(&self, x: f64) -> f64 {
        self.0.map_or(x, |w| x * w)
    }

    fn temperature(&self, x: f64) -> f64 {
        self.0.map_or(x, |w| x * w * HBAR_OVER_KB)
    }

    fn time_col(&self, name: &str) -> String {
        format!("{name} [{}]", if self.0.is_some() { "s" } else { "1/omega_c" })
    }

    fn rate_col(&self, name: &str) -> String {
        format!("{name} [{}]", if self.0.is_some() { "1/s" } else { "omega_c" })
    }

    fn temperature_col(&self, name: &str) -> String {
        format!("{name} [{}]", if self.0.is_some() { "K" } else { "omega_c" })
    }
}

/// Reservoirs for commands that accept either an `s` grid or a tabulated
/// spectrum, each with the label written in the `s` column.
fn environments(cfg: &RunConfig, tabulated: Option<Arc<TabulatedSpectrum>>) -> Result<Vec<(Cell, Environment)>> {
    let temperature = cfg.temperature.unwrap_or(0.0);
    match tabulated {
        Some(t) => Ok(vec![(
            Cell::text("tabulated"),
            Environment::new(Spectrum::Tabulated(t), temperature)?.with_quadrature(cfg.quadrature),
        )]),
        None => grid(&cfg.s)
            .into_iter()
            .map(|s| Ok((Cell::Num(s), Environment::ohmic(s, temperature)?.with_quadrature(cfg.quadrature))))
            .collect(),
    }
}

fn grid(r: &Option<super::RangeSpec>) -> Vec<f64> {
    r.as_ref().map(|r| r.values()).unwrap_or_default()
}

/// Evaluates `f` on every `(outer, inner)` pair, outer index slowest.
fn par_grid<A: Sync, B: Sync, T: Send>(
    outer: &[A],
    inner: &[B],
    f: impl Fn(&A, &B) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let pairs: Vec<(&A, &B)> = outer.iter().flat_map(|a| inner.iter().map(move |b| (a, b))).collect();
    pairs.par_iter().map(|&(a, b)| f(a, b)).collect()
}

fn transition_cell(t: TransitionTime, units: &Units) -> Cell {
    match t {
        TransitionTime::At(x) => Cell::Num(units.time(x)),
        TransitionTime::Never => Cell::text("none"),
        TransitionTime::Indeterminate => Cell::text("indeterminate"),
    }
}

pub(super) fn build(cfg: &RunConfig, tabulated: Option<Arc<TabulatedSpectrum>>) -> Result<Table> {
    let command = cfg.command.ok_or_else(|| Error::Domain("no command".into()))?;
    let u = Units(cfg.omega_c);
    let temperature = cfg.temperature.unwrap_or(0.0);
    let t_col = u.time_col("t");
    let temp_col = u.temperature_col("T");
    let table = match command {
        Command::Rate => {
            let envs = environments(cfg, tabulated)?;
            let times = grid(&cfg.t);
            let rates = par_grid(&envs, &times, |(_, env), &t| dephasing_rate(env, t))?;
            let mut table = Table::new(["s [1]".to_string(), temp_col, t_col, u.rate_col("gamma")]);
            for (k, gamma) in rates.into_iter().enumerate() {
                let (label, _) = &envs[k / times.len()];
                let t = times[k % times.len()];
                table.push(vec![
                    label.clone(),
                    Cell::Num(u.temperature(temperature)),
                    Cell::Num(u.time(t)),
                    Cell::Num(u.rate(gamma)),
                ]);
            }
            table
        }
        Command::Factor => {
            let envs = environments(cfg, tabulated)?;
            let times = grid(&cfg.t);
            let limits = envs
                .par_iter()
                .map(|(_, env)| factor_asymptote(env))
                .collect::<Result<Vec<Asymptote>>>()?;
            let factors = par_grid(&envs, &times, |(_, env), &t| dephasing_factor(env, t))?;
            let mut table = Table::new([
                "s [1]".to_string(),
                temp_col,
                t_col,
                "Lambda [1]".into(),
                "coherence [1]".into(),
                "Lambda_inf [1]".into(),
            ]);
            for (k, lambda) in factors.into_iter().enumerate() {
                let i = k / times.len();
                table.push(vec![
                    envs[i].0.clone(),
                    Cell::Num(u.temperature(temperature)),
                    Cell::Num(u.time(times[k % times.len()])),
                    Cell::Num(lambda),
                    Cell::Num((-lambda).exp()),
                    Cell::or_text(limits[i].value(), "diverges"),
                ]);
            }
            table
        }
        Command::Scrit => {
            let temps = cfg.temperature_grid().map(|r| r.values()).unwrap_or_default();
            let values = temps
                .par_iter()
                .map(|&t| {
                    let cells = if t == 0.0 { S_CRIT_GRID_ZERO_T } else { S_CRIT_GRID_THERMAL };
                    find_s_crit_with(t, cells, &cfg.quadrature)
                })
                .collect::<Result<Vec<f64>>>()?;
            let mut table = Table::new([temp_col, "s_crit [1]".into()]);
            for (t, s) in temps.iter().zip(values) {
                table.push(vec![Cell::Num(u.temperature(*t)), Cell::Num(s)]);
            }
            table
        }
        Command::Convexity => {
            let temps = cfg.temperature_grid().map(|r| r.values()).unwrap_or_default();
            match &cfg.s {
                None => {
                    let values = temps
                        .par_iter()
                        .map(|&t| convexity_threshold_s(t, DEFAULT_CONVEXITY_RANGE))
                        .collect::<Result<Vec<f64>>>()?;
                    let mut table = Table::new([temp_col, "s_threshold [1]".into()]);
                    for (t, s) in temps.iter().zip(values) {
                        table.push(vec![Cell::Num(u.temperature(*t)), Cell::Num(s)]);
                    }
                    table
                }
                Some(s_grid) => {
                    let s_values = s_grid.values();
                    let reports = par_grid(&temps, &s_values, |&t, &s| {
                        is_convex(&Environment::ohmic(s, t)?, DEFAULT_CONVEXITY_RANGE, DEFAULT_CONVEXITY_GRID)
                    })?;
                    let mut table = Table::new([
                        temp_col,
                        "s [1]".into(),
                        "convex".into(),
                        u.rate_col("first_nonconvex_omega"),
                    ]);
                    for (k, r) in reports.into_iter().enumerate() {
                        table.push(vec![
                            Cell::Num(u.temperature(temps[k / s_values.len()])),
                            Cell::Num(s_values[k % s_values.len()]),
                            Cell::text(if r.convex { "true" } else { "false" }),
                            Cell::or_text(r.first_nonconvex.map(|w| u.rate(w)), "none"),
                        ]);
                    }
                    table
                }
            }
        }
        Command::Discord => {
            let p = BellDiagonalParams::new(cfg.c.unwrap_or(0.0))?;
            let envs = environments(cfg, tabulated)?;
            let times = grid(&cfg.t);
            let trajectories = envs
                .par_iter()
                .map(|(_, env)| correlation_trajectories(env, p, &times))
                .collect::<Result<Vec<_>>>()?;
            let mut table = Table::new([
                "s [1]".to_string(),
                temp_col,
                "c [1]".into(),
                t_col,
                "Lambda [1]".into(),
                "I [bits]".into(),
                "C [bits]".into(),
                "Q [bits]".into(),
                u.time_col("transition_time"),
            ]);
            for ((label, _), tr) in envs.iter().zip(trajectories) {
                let transition = transition_cell(tr.transition_time, &u);
                for j in 0..times.len() {
                    table.push(vec![
                        label.clone(),
                        Cell::Num(u.temperature(temperature)),
                        Cell::Num(p.c()),
                        Cell::Num(u.time(times[j])),
                        Cell::Num(tr.factor[j]),
                        Cell::Num(tr.mutual_information[j]),
                        Cell::Num(tr.classical[j]),
                        Cell::Num(tr.discord[j]),
                        transition.clone(),
                    ]);
                }
            }
            table
        }
        Command::Landscape => {
            let s_values = grid(&cfg.s);
            let times = grid(&cfg.t);
            let land = transition_landscape_with(temperature, cfg.c.unwrap_or(0.0), &s_values, &times, &cfg.quadrature)?;
            let mut table = Table::new(["s [1]".to_string(), t_col, "coherence [1]".into(), "phase".into()]);
            for (i, s) in s_values.iter().enumerate() {
                for (j, t) in times.iter().enumerate() {
                    table.push(vec![
                        Cell::Num(*s),
                        Cell::Num(u.time(*t)),
                        Cell::Num(land.coherence[i][j]),
                        Cell::text(land.phase[i][j].label()),
                    ]);
                }
            }
            table
        }
        Command::FrozenRegion => {
            let s_values = grid(&cfg.s);
            let region = frozen_region_with(temperature, &s_values, &cfg.quadrature)?;
            let mut table = Table::new([
                "s [1]".to_string(),
                "sup_Lambda [1]".into(),
                u.time_col("t_peak"),
                "c_star [1]".into(),
            ]);
            for (i, s) in s_values.iter().enumerate() {
                let (sup, peak) = match region.sup_factor[i] {
                    SupFactor::Finite { value, at } => (Cell::Num(value), Cell::or_text(at.map(|t| u.time(t)), "asymptote")),
                    SupFactor::Diverges => (Cell::text("diverges"), Cell::text("none")),
                };
                table.push(vec![Cell::Num(*s), sup, peak, Cell::Num(region.boundary_c[i])]);
            }
            table
        }
        Command::Backflow => {
            let envs = environments(cfg, tabulated)?;
            let reports = envs
                .par_iter()
                .map(|(_, env)| {
                    let t_max = cfg.t_max.unwrap_or_else(|| scan_horizon(env));
                    Ok((t_max, negative_rate_report(env, t_max, RATE_SCAN_GRID)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut table = Table::new([
                "s [1]".to_string(),
                temp_col,
                u.time_col("t_max"),
                "negative_intervals".into(),
                "non_markovian".into(),
                "backflow [1]".into(),
                u.time_col("first_negative_start"),
                u.time_col("first_negative_end"),
            ]);
            for ((label, _), (t_max, r)) in envs.iter().zip(reports) {
                let first = r.intervals.first();
                table.push(vec![
                    label.clone(),
                    Cell::Num(u.temperature(temperature)),
                    Cell::Num(u.time(t_max)),
                    Cell::Int(r.intervals.len() as u64),
                    Cell::text(if r.non_markovian { "true" } else { "false" }),
                    Cell::Num(r.backflow_measure),
                    Cell::or_text(first.map(|i| u.time(i.0)), "none"),
                    Cell::or_text(first.map(|i| u.time(i.1)), "none"),
                ]);
            }
            table
        }
    };
    if !table.all_finite() {
        return Err(Error::Internal(format!("{} produced a non-finite cell", command.name())));
    }
    Ok(table)
}
