//! Dephasing rate `γ(t)`, dephasing factor `Λ(t)` and coherence of a qubit
//! in a thermal reservoir, plus detection of negative-rate (information
//! backflow) intervals and the critical Ohmicity `s_crit(T)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numerics::{
    find_root_bracketed, gamma_function, integrate_finite, integrate_semi_infinite_with, linspace,
    Bracket, QuadratureSpec,
};
use crate::spectral::{bisect_predicate, Environment, Spectrum};

/// Closed-form vacuum rate `(1+t²)^(−s/2) Γ(s) sin(s·arctan t)` in reduced units.
pub fn dephasing_rate_zero_t(s: f64, t: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return domain(format!("s must be > 0, got {s}"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("t must be finite and >= 0, got {t}"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok((1.0 + t * t).powf(-0.5 * s) * gamma_function(s)? * (s * t.atan()).sin())
}

/// High-temperature rate `2 T γ₀(t, s−1)`; defined for `s > 1`, `T > 0`.
pub fn dephasing_rate_high_t(s: f64, t: f64, temperature: f64) -> Result<f64> {
    if !(s > 1.0) {
        return domain(format!("high-temperature rate needs s > 1, got {s}"));
    }
    if !(temperature > 0.0) || !temperature.is_finite() {
        return domain(format!("high-temperature rate needs T > 0, got {temperature}"));
    }
    Ok(2.0 * temperature * dephasing_rate_zero_t(s - 1.0, t)?)
}

/// `γ(t) = ∫₀^∞ J(ω) coth(ω/2T) sin(ωt)/ω dω`, always by quadrature.
pub fn dephasing_rate_numeric(env: &Environment, t: f64) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    integrate_semi_infinite_with(
        |w| env.thermal_density(w) * ((w * t).sin() / w),
        &env.quadrature,
        &env.spectrum.hints(Some(t)),
    )
}

/// Dephasing rate, closed form for zero-temperature Ohmic reservoirs and
/// quadrature otherwise.
pub fn dephasing_rate(env: &Environment, t: f64) -> Result<f64> {
    match (&env.spectrum, env.is_zero_temperature()) {
        (Spectrum::Ohmic(o), true) => Ok(o.omega_c * dephasing_rate_zero_t(o.s, o.omega_c * t)?),
        _ => dephasing_rate_numeric(env, t),
    }
}

/// `Λ(t) = ∫₀^∞ g(ω, T) [1 − cos ωt] dω`, evaluated in the frequency domain.
pub fn dephasing_factor(env: &Environment, t: f64) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    // 1 − cos ωt ~ ω²t²/2 tames g up to ω^(p−3) at finite temperature.
    let p = env.spectrum.low_frequency_exponent();
    if !(p > 0.0) {
        return Err(Error::Divergence(format!(
            "low-frequency exponent {p} makes the dephasing factor diverge"
        )));
    }
    let value = integrate_semi_infinite_with(
        |w| {
            // g · 2 sin²(ωt/2), grouped so each factor stays bounded
            let half = (0.5 * w * t).sin() / w;
            4.0 * env.thermal_density(w) * half * half
        },
        &env.quadrature,
        &env.spectrum.hints(Some(t)),
    )?;
    Ok(value.max(0.0))
}

/// `e^(−Λ(t))`, the factor multiplying every off-diagonal element.
pub fn coherence(env: &Environment, t: f64) -> Result<f64> {
    Ok((-dephasing_factor(env, t)?).exp())
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("time must be finite and >= 0, got {t}"));
    }
    Ok(())
}

/// Long-time limit of `Λ(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Asymptote {
    Finite(f64),
    Diverges,
}

impl Asymptote {
    pub fn value(&self) -> Option<f64> {
        match self {
            Asymptote::Finite(v) => Some(*v),
            Asymptote::Diverges => None,
        }
    }
}

/// `Λ(∞) = ∫ g(ω, T) dω` when that converges.
///
/// Convergence is decided by the low-frequency exponent `p` of `J`:
/// `g ~ ω^(p−2)` at zero temperature and `ω^(p−3)` above it, so the limit is
/// finite for `p > 1` and `p > 2` respectively. At zero temperature the
/// Ohmic value is `2 Γ(s − 1)`.
pub fn factor_asymptote(env: &Environment) -> Result<Asymptote> {
    let p = env.spectrum.low_frequency_exponent();
    let threshold = if env.is_zero_temperature() { 1.0 } else { 2.0 };
    if p <= threshold {
        return Ok(Asymptote::Diverges);
    }
    if let (Spectrum::Ohmic(o), true) = (&env.spectrum, env.is_zero_temperature()) {
        return Ok(Asymptote::Finite(2.0 * gamma_function(o.s - 1.0)?));
    }
    let value = integrate_semi_infinite_with(
        |w| env.weight(w),
        &env.quadrature,
        &env.spectrum.hints(None),
    )?;
    Ok(Asymptote::Finite(value))
}

/// Negative-rate intervals on `[0, t_max]` and the coherence they restore.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativeRateReport {
    pub intervals: Vec<(f64, f64)>,
    pub non_markovian: bool,
    /// `Σ [e^(−Λ(t_end)) − e^(−Λ(t_start))]` over the intervals.
    pub backflow_measure: f64,
}

/// A grid point counts as negative when `γ < −NEGATIVITY_FLOOR · max |γ|`.
pub const NEGATIVITY_FLOOR: f64 = 1e-12;

/// Scans `γ` on `n_grid` cells of `[0, t_max]`, refines the sign changes and
/// measures the coherence revival over each negative interval.
pub fn negative_rate_report(env: &Environment, t_max: f64, n_grid: usize) -> Result<NegativeRateReport> {
    let intervals = negative_intervals(env, t_max, n_grid)?;
    let revivals = intervals
        .par_iter()
        .map(|&(start, end)| {
            // Λ(end) − Λ(start) = 2 ∫ γ, strictly negative on a negative interval
            let drop = 2.0 * integrate_finite(|t| dephasing_rate(env, t).unwrap_or(f64::NAN), start, end, &env.quadrature)?;
            if !(drop <= 0.0) {
                return Err(Error::Internal(format!(
                    "rate integral over negative interval [{start}, {end}] is {drop}"
                )));
            }
            let before = coherence(env, start)?;
            Ok(before * (-drop).exp_m1())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(NegativeRateReport {
        non_markovian: !intervals.is_empty(),
        backflow_measure: revivals.iter().fold(0.0, |acc, r| acc + r),
        intervals,
    })
}

/// Intervals of `[0, t_max]` where the rate is negative, without the
/// backflow bookkeeping.
pub fn negative_intervals(env: &Environment, t_max: f64, n_grid: usize) -> Result<Vec<(f64, f64)>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return domain(format!("t_max must be finite and > 0, got {t_max}"));
    }
    if n_grid < 2 {
        return domain("negative-rate scan needs n_grid >= 2");
    }
    let grid = linspace(0.0, t_max, n_grid + 1);
    let rates = grid
        .par_iter()
        .map(|&t| dephasing_rate(env, t))
        .collect::<Result<Vec<f64>>>()?;
    let scale = rates.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    let floor = NEGATIVITY_FLOOR * scale;
    let negative: Vec<bool> = rates.iter().map(|&r| r < -floor).collect();

    let tol = 1e-10 * t_max.max(1.0);
    let refine = |i: usize, j: usize| -> Result<f64> {
        // i: non-negative side, j: negative side
        if rates[i] > 0.0 {
            let b = Bracket {
                lo: grid[i.min(j)],
                hi: grid[i.max(j)],
            };
            find_root_bracketed(|t| dephasing_rate(env, t).unwrap_or(f64::NAN), b, tol)
        } else {
            Ok(grid[i])
        }
    };

    let mut out = Vec::new();
    let mut k = 0;
    while k < grid.len() {
        if !negative[k] {
            k += 1;
            continue;
        }
        let first = k;
        while k + 1 < grid.len() && negative[k + 1] {
            k += 1;
        }
        let last = k;
        let start = if first == 0 { 0.0 } else { refine(first - 1, first)? };
        let end = if last + 1 == grid.len() { t_max } else { refine(last + 1, last)? };
        out.push((start, end));
        k += 1;
    }
    Ok(out)
}

/// Scan horizon used when deciding Markovianity at Ohmicity `s`.
///
/// For `2 < s < 4` the vacuum rate first turns negative at `tan(π/s)`, which
/// runs off to infinity as `s → 2⁺`; the horizon keeps a factor ten margin.
pub fn negativity_horizon(s: f64) -> f64 {
    if s > 2.0 {
        100.0_f64.max(10.0 * (PI / s.min(3.9)).tan())
    } else {
        100.0
    }
}

/// Time window scanned for negative rates: [`negativity_horizon`] for Ohmic
/// spectra, `1600 / ω_max` for tabulated ones.
pub fn scan_horizon(env: &Environment) -> f64 {
    match &env.spectrum {
        Spectrum::Ohmic(o) => negativity_horizon(o.s) / o.omega_c,
        Spectrum::Tabulated(t) => 1600.0 / t.max_omega(),
    }
}

/// Grid cells for the negative-rate scan behind the supremum of `Λ`.
pub const RATE_SCAN_GRID: usize = 2000;

/// Grid cells per predicate evaluation in [`find_s_crit`]. The closed-form
/// vacuum rate is cheap; the thermal rate costs one oscillatory quadrature
/// per point and is smooth enough for a coarser scan.
pub const S_CRIT_GRID_ZERO_T: usize = 4000;
pub const S_CRIT_GRID_THERMAL: usize = 500;

/// Critical Ohmicity above which the dynamics at temperature `T` shows
/// negative-rate intervals, bisected on `s ∈ [1.9, 3.1]` to width `1e-3`.
pub fn find_s_crit(temperature: f64) -> Result<f64> {
    let n_grid = if temperature == 0.0 {
        S_CRIT_GRID_ZERO_T
    } else {
        S_CRIT_GRID_THERMAL
    };
    find_s_crit_with(temperature, n_grid, &QuadratureSpec::default())
}

pub fn find_s_crit_with(temperature: f64, n_grid: usize, quadrature: &QuadratureSpec) -> Result<f64> {
    let non_markovian = |s: f64| -> Result<bool> {
        let env = Environment::ohmic(s, temperature)?.with_quadrature(*quadrature);
        Ok(!negative_intervals(&env, negativity_horizon(s), n_grid)?.is_empty())
    };
    bisect_predicate(non_markovian, 1.9, 3.1, 1e-3)
}

/// Sampled rate, factor and coherence on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DephasingTrajectory {
    pub times: Vec<f64>,
    pub rate: Vec<f64>,
    pub factor: Vec<f64>,
    pub coherence: Vec<f64>,
}

/// Evaluates every time point independently (no accumulation along the grid).
pub fn trajectory(env: &Environment, times: &[f64]) -> Result<DephasingTrajectory> {
    check_grid(times)?;
    let points = times
        .par_iter()
        .map(|&t| Ok((dephasing_rate(env, t)?, dephasing_factor(env, t)?)))
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let (rate, factor): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    let coherence = factor.iter().map(|l| (-l).exp()).collect();
    Ok(DephasingTrajectory {
        times: times.to_vec(),
        rate,
        factor,
        coherence,
    })
}

pub(crate) fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return domain("time grid is empty");
    }
    if !(times[0] >= 0.0) || times.iter().any(|t| !t.is_finite()) {
        return domain("time grid must be finite and non-negative");
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("time grid must be strictly increasing");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ohmic(s: f64, t: f64) -> Environment {
        Environment::ohmic(s, t).unwrap()
    }

    #[test]
    fn zero_temperature_closed_form_values() {
        assert!((dephasing_rate_zero_t(1.0, 3.0).unwrap() - 0.3).abs() < 1e-15);
        assert!((dephasing_rate_zero_t(2.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(dephasing_rate_zero_t(2.7, 0.0).unwrap(), 0.0);
        assert!(dephasing_rate_zero_t(0.0, 1.0).is_err());
        assert!(dephasing_rate_zero_t(1.0, -1.0).is_err());
    }

    #[test]
    fn high_temperature_closed_form() {
        assert!((dephasing_rate_high_t(2.0, 3.0, 10.0).unwrap() - 6.0).abs() < 1e-13);
        assert_eq!(dephasing_rate_high_t(3.0, 0.0, 2.0).unwrap(), 0.0);
        assert!(dephasing_rate_high_t(1.0, 1.0, 1.0).is_err());
        assert!(dephasing_rate_high_t(2.0, 1.0, 0.0).is_err());
        // s − 1 = 2.5 > 2: negative somewhere
        let neg = (1..200).any(|k| dephasing_rate_high_t(3.5, 0.1 * k as f64, 5.0).unwrap() < 0.0);
        assert!(neg);
    }

    #[test]
    fn numeric_rate_matches_closed_form() {
        let v = dephasing_rate_numeric(&ohmic(1.0, 0.0), 2.0).unwrap();
        assert!((v - 0.4).abs() < 1e-10, "{v}");
        let env = ohmic(2.5, 0.0);
        let v = dephasing_rate_numeric(&env, 10.0).unwrap();
        let exact = dephasing_rate_zero_t(2.5, 10.0).unwrap();
        assert!(exact < 0.0);
        assert!(((v - exact) / exact).abs() < 1e-8, "{v} vs {exact}");
        assert_eq!(dephasing_rate_numeric(&env, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn factor_closed_forms() {
        let env = ohmic(1.0, 0.0);
        let l = dephasing_factor(&env, 3.0).unwrap();
        assert!((l - 10.0_f64.ln()).abs() < 1e-10, "{l}");
        assert_eq!(dephasing_factor(&env, 0.0).unwrap(), 0.0);
        let l = dephasing_factor(&ohmic(2.0, 0.0), 1e4).unwrap();
        assert!((l - 2.0).abs() < 1e-3, "{l}");
        let c = coherence(&env, 3.0).unwrap();
        assert!((c - 0.1).abs() < 1e-10);
        assert_eq!(coherence(&env, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn asymptotes() {
        let a = factor_asymptote(&ohmic(2.5, 0.0)).unwrap();
        assert!((a.value().unwrap() - PI.sqrt()).abs() < 1e-12);
        assert_eq!(factor_asymptote(&ohmic(1.0, 0.0)).unwrap(), Asymptote::Diverges);
        assert_eq!(factor_asymptote(&ohmic(1.5, 1.0)).unwrap(), Asymptote::Diverges);
        assert_eq!(factor_asymptote(&ohmic(2.0, 0.5)).unwrap(), Asymptote::Diverges);
        assert!(factor_asymptote(&ohmic(2.5, 1.0)).unwrap().value().is_some());
    }

    #[test]
    fn markovian_ohmic_has_no_negative_intervals() {
        let r = negative_rate_report(&ohmic(1.0, 0.0), 100.0, 2000).unwrap();
        assert!(r.intervals.is_empty());
        assert!(!r.non_markovian);
        assert!(r.backflow_measure == 0.0 && r.backflow_measure.is_sign_positive());
    }

    #[test]
    fn super_ohmic_single_interval() {
        let r = negative_rate_report(&ohmic(2.5, 0.0), 100.0, 2000).unwrap();
        assert_eq!(r.intervals.len(), 1);
        let (start, end) = r.intervals[0];
        let t_star = (PI / 2.5).tan();
        assert!((start - t_star).abs() < 1e-8, "{start} vs {t_star}");
        assert_eq!(end, 100.0);
        assert!(r.non_markovian);
        // revival equals the coherence difference across the interval
        let env = ohmic(2.5, 0.0);
        let direct = coherence(&env, end).unwrap() - coherence(&env, start).unwrap();
        assert!(r.backflow_measure > 0.0);
        assert!((r.backflow_measure - direct).abs() < 1e-9);
    }

    #[test]
    fn trajectory_is_consistent() {
        let tr = trajectory(&ohmic(1.0, 0.0), &[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(tr.factor[0], 0.0);
        assert!((tr.factor[1] - 2.0_f64.ln()).abs() < 1e-10);
        assert!((tr.factor[2] - 10.0_f64.ln()).abs() < 1e-10);
        for (l, c) in tr.factor.iter().zip(&tr.coherence) {
            assert_eq!(*c, (-l).exp());
        }
        assert!(trajectory(&ohmic(1.0, 0.0), &[1.0, 1.0]).is_err());
        assert!(trajectory(&ohmic(1.0, 0.0), &[]).is_err());
    }

    #[test]
    fn overshoot_above_asymptote() {
        let env = ohmic(2.5, 0.0);
        let t_star = (PI / 2.5).tan();
        let peak = dephasing_factor(&env, t_star).unwrap();
        assert!(peak > dephasing_factor(&env, 1.0).unwrap());
        assert!(peak > dephasing_factor(&env, 30.0).unwrap());
        assert!(peak > PI.sqrt());
    }
}
