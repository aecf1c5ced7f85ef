//! Correlations of two qubits that start in the Bell-diagonal mixture
//! `(1+c)/2 |Ψ⟩⟨Ψ| + (1−c)/2 |Φ⟩⟨Φ|` and dephase in identical local
//! reservoirs.
//!
//! Everything is driven by the single-qubit coherence `e^(−Λ(t))`: the
//! mutual information is `h(c) + h(e^(−Λ))` and the classical correlations
//! are `h(max{e^(−Λ), |c|})`, with `h(x) = [(1+x) log₂(1+x) + (1−x) log₂(1−x)]/2`.
//! Discord therefore stays at `h(|c|)` for as long as `e^(−Λ) > |c|`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::dephasing::{
    check_grid, dephasing_factor, factor_asymptote, negative_intervals, scan_horizon,
    Asymptote, RATE_SCAN_GRID,
};
use crate::error::{domain, Error, Result};
use crate::numerics::{find_root_bracketed, logspace, Bracket, QuadratureSpec};
use crate::spectral::{Environment, Spectrum};

/// Parameter `c` of the initial Bell-diagonal state; only `|c|` matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellDiagonalParams {
    c: f64,
}

impl BellDiagonalParams {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.abs() < 1.0) {
            return domain(format!("|c| must be < 1, got {c}"));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn magnitude(&self) -> f64 {
        self.c.abs()
    }
}

// (1+x)/2 log₂(1+x) + (1−x)/2 log₂(1−x), with 0·log 0 = 0.
fn entropy_complement(x: f64) -> f64 {
    let x = x.abs().min(1.0);
    let term = |y: f64| if y == 0.0 { 0.0 } else { 0.5 * y * y.log2() };
    term(1.0 + x) + term(1.0 - x)
}

fn check_factor(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) {
        return domain(format!("dephasing factor must be >= 0, got {lambda}"));
    }
    Ok(())
}

/// Mutual information in bits.
pub fn mutual_information(p: BellDiagonalParams, lambda: f64) -> Result<f64> {
    check_factor(lambda)?;
    Ok(entropy_complement(p.magnitude()) + entropy_complement((-lambda).exp()))
}

/// Classical correlations in bits, `h(χ)` with `χ = max{e^(−Λ), |c|}`.
pub fn classical_correlations(p: BellDiagonalParams, lambda: f64) -> Result<f64> {
    check_factor(lambda)?;
    let chi = (-lambda).exp().max(p.magnitude());
    Ok(entropy_complement(chi))
}

/// Discord `I − C` in bits.
pub fn discord(p: BellDiagonalParams, lambda: f64) -> Result<f64> {
    let q = mutual_information(p, lambda)? - classical_correlations(p, lambda)?;
    if q < -1e-12 {
        return Err(Error::Internal(format!("discord came out negative: {q:e}")));
    }
    Ok(q.max(0.0))
}

/// Value at which discord is frozen while `e^(−Λ) > |c|`.
pub fn frozen_discord_value(p: BellDiagonalParams) -> f64 {
    entropy_complement(p.magnitude())
}

/// Reference transition time `−ln|c| / (2γ)` for constant-rate dephasing.
pub fn markovian_transition_time(c: f64, gamma: f64) -> Result<f64> {
    if !(c.abs() > 0.0 && c.abs() < 1.0) {
        return domain(format!("need 0 < |c| < 1, got {c}"));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return domain(format!("need a finite rate > 0, got {gamma}"));
    }
    Ok(-c.abs().ln() / (2.0 * gamma))
}

/// Supremum of `Λ(t)` over all times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SupFactor {
    /// `at` is the time of the maximum, or `None` when the supremum is the
    /// long-time limit.
    Finite { value: f64, at: Option<f64> },
    Diverges,
}

impl SupFactor {
    pub fn value(&self) -> Option<f64> {
        match self {
            SupFactor::Finite { value, .. } => Some(*value),
            SupFactor::Diverges => None,
        }
    }
}

/// `sup_t Λ(t)`.
///
/// Zero-temperature Ohmic reservoirs use the known structure of the rate:
/// `Λ` is monotone for `s ≤ 2`, and for `s > 2` its local maxima sit where
/// `s·arctan t` crosses odd multiples of `π`. Other reservoirs scan the rate
/// for negative intervals and evaluate `Λ` at each interval start. In both
/// cases the long-time limit is a candidate too.
pub fn sup_dephasing_factor(env: &Environment) -> Result<SupFactor> {
    let asymptote = match factor_asymptote(env)? {
        Asymptote::Diverges => return Ok(SupFactor::Diverges),
        Asymptote::Finite(v) => v,
    };
    let peaks: Vec<f64> = match (&env.spectrum, env.is_zero_temperature()) {
        (Spectrum::Ohmic(o), true) => (1..)
            .step_by(2)
            .map(|k| k as f64 * PI / o.s)
            .take_while(|&phase| phase < 0.5 * PI)
            .map(|phase| phase.tan() / o.omega_c)
            .collect(),
        _ => negative_intervals(env, scan_horizon(env), RATE_SCAN_GRID)?
            .into_iter()
            .map(|(start, _)| start)
            .collect(),
    };
    let mut best = SupFactor::Finite {
        value: asymptote,
        at: None,
    };
    for t in peaks {
        let value = dephasing_factor(env, t)?;
        if value > best.value().unwrap_or(f64::INFINITY) {
            best = SupFactor::Finite { value, at: Some(t) };
        }
    }
    Ok(best)
}

/// True when `sup_t Λ < ln(1/|c|)`, so `e^(−Λ)` never reaches `|c|`.
pub fn is_time_invariant_discord(env: &Environment, p: BellDiagonalParams) -> Result<bool> {
    match sup_dephasing_factor(env)? {
        SupFactor::Diverges => Ok(false),
        SupFactor::Finite { value, .. } => is_time_invariant_discord_given_sup(value, p),
    }
}

/// Same decision from an externally known `sup_t Λ`.
pub fn is_time_invariant_discord_given_sup(sup_factor: f64, p: BellDiagonalParams) -> Result<bool> {
    check_factor(sup_factor)?;
    let c = p.magnitude();
    if c == 0.0 {
        return domain("time-invariant discord needs 0 < |c|");
    }
    Ok(sup_factor < -c.ln())
}

/// Outcome of the search for the sudden transition time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TransitionTime {
    At(f64),
    /// `e^(−Λ)` stays above `|c|` forever: discord is frozen.
    Never,
    /// No crossing up to the horizon, but one cannot be excluded.
    Indeterminate,
}

impl TransitionTime {
    pub fn time(&self) -> Option<f64> {
        match self {
            TransitionTime::At(t) => Some(*t),
            _ => None,
        }
    }
}

const TRANSITION_GRID: usize = 400;

/// Smallest `t ∈ (0, t_max]` with `e^(−Λ(t)) = |c|`.
pub fn transition_time(env: &Environment, p: BellDiagonalParams, t_max: f64) -> Result<TransitionTime> {
    let c = p.magnitude();
    if c == 0.0 {
        return domain("transition time needs 0 < |c|");
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return domain(format!("t_max must be finite and > 0, got {t_max}"));
    }
    let target = -c.ln();
    let grid = logspace(t_max * 1e-6, t_max, TRANSITION_GRID);
    let factors = grid
        .par_iter()
        .map(|&t| dephasing_factor(env, t))
        .collect::<Result<Vec<f64>>>()?;
    let solve = |lo: f64, hi: f64| -> Result<TransitionTime> {
        let tol = 1e-12 * hi.max(1.0);
        let root = find_root_bracketed(
            |t| dephasing_factor(env, t).map_or(f64::NAN, |l| l - target),
            Bracket { lo, hi },
            tol,
        )?;
        Ok(TransitionTime::At(root))
    };

    if let Some(i) = factors.iter().position(|&l| l >= target) {
        let lo = if i == 0 { 0.0 } else { grid[i - 1] };
        return solve(lo, grid[i]);
    }
    match sup_dephasing_factor(env)? {
        SupFactor::Finite { value, .. } if value < target => Ok(TransitionTime::Never),
        SupFactor::Finite { at: Some(peak), .. } if peak <= t_max => {
            // The grid stepped over a narrow overshoot above the target.
            if dephasing_factor(env, peak)? >= target {
                let lo = grid.iter().copied().filter(|&t| t < peak).last().unwrap_or(0.0);
                solve(lo, peak)
            } else {
                Ok(TransitionTime::Indeterminate)
            }
        }
        _ => Ok(TransitionTime::Indeterminate),
    }
}

/// Mutual information, classical correlations and discord along a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTrajectory {
    pub times: Vec<f64>,
    pub factor: Vec<f64>,
    pub mutual_information: Vec<f64>,
    pub classical: Vec<f64>,
    pub discord: Vec<f64>,
    pub transition_time: TransitionTime,
}

pub fn correlation_trajectories(
    env: &Environment,
    p: BellDiagonalParams,
    times: &[f64],
) -> Result<CorrelationTrajectory> {
    check_grid(times)?;
    let factor = times
        .par_iter()
        .map(|&t| dephasing_factor(env, t))
        .collect::<Result<Vec<f64>>>()?;
    let mut mi = Vec::with_capacity(times.len());
    let mut cc = Vec::with_capacity(times.len());
    let mut qd = Vec::with_capacity(times.len());
    for &l in &factor {
        mi.push(mutual_information(p, l)?);
        cc.push(classical_correlations(p, l)?);
        qd.push(discord(p, l)?);
    }
    let t_max = *times.last().expect("non-empty grid");
    let transition_time = if p.magnitude() == 0.0 {
        TransitionTime::Never
    } else if t_max == 0.0 {
        TransitionTime::Indeterminate
    } else {
        transition_time(env, p, t_max)?
    };
    Ok(CorrelationTrajectory {
        times: times.to_vec(),
        factor,
        mutual_information: mi,
        classical: cc,
        discord: qd,
        transition_time,
    })
}

/// Boundary `c*(s)` of the frozen-discord region: discord is time invariant
/// for `0 < |c| < c*(s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrozenRegion {
    pub temperature: f64,
    pub s_grid: Vec<f64>,
    pub sup_factor: Vec<SupFactor>,
    pub boundary_c: Vec<f64>,
    /// `true` where no frozen region exists (`Λ` unbounded).
    pub empty: Vec<bool>,
}

pub fn frozen_region(temperature: f64, s_grid: &[f64]) -> Result<FrozenRegion> {
    frozen_region_with(temperature, s_grid, &QuadratureSpec::default())
}

pub fn frozen_region_with(temperature: f64, s_grid: &[f64], quadrature: &QuadratureSpec) -> Result<FrozenRegion> {
    if s_grid.is_empty() {
        return domain("s grid is empty");
    }
    let sups = s_grid
        .par_iter()
        .map(|&s| sup_dephasing_factor(&Environment::ohmic(s, temperature)?.with_quadrature(*quadrature)))
        .collect::<Result<Vec<SupFactor>>>()?;
    let boundary_c: Vec<f64> = sups
        .iter()
        .map(|sup| sup.value().map_or(0.0, |v| (-v).exp()))
        .collect();
    Ok(FrozenRegion {
        temperature,
        s_grid: s_grid.to_vec(),
        empty: sups.iter().map(|s| matches!(s, SupFactor::Diverges)).collect(),
        sup_factor: sups,
        boundary_c,
    })
}

/// Which correlations are decaying at a given `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    /// `e^(−Λ) > |c|`: classical correlations decay, discord frozen.
    ClassicalDecoherence,
    /// `e^(−Λ) < |c|`: discord decays, classical correlations frozen.
    QuantumDecoherence,
    /// `e^(−Λ) = |c|` exactly.
    Boundary,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::ClassicalDecoherence => "classical",
            Phase::QuantumDecoherence => "quantum",
            Phase::Boundary => "boundary",
        }
    }

    fn classify(coherence: f64, c: f64) -> Self {
        if coherence > c {
            Phase::ClassicalDecoherence
        } else if coherence < c {
            Phase::QuantumDecoherence
        } else {
            Phase::Boundary
        }
    }
}

/// Phase labels on an `(s, t)` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Landscape {
    pub temperature: f64,
    pub c: f64,
    pub s_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// `coherence[i][j]` at `(s_grid[i], t_grid[j])`.
    pub coherence: Vec<Vec<f64>>,
    pub phase: Vec<Vec<Phase>>,
}

impl Landscape {
    /// First grid time labelled quantum decoherence for each `s`.
    pub fn boundary_times(&self) -> Vec<Option<f64>> {
        self.phase
            .iter()
            .map(|row| {
                row.iter()
                    .position(|p| *p != Phase::ClassicalDecoherence)
                    .map(|j| self.t_grid[j])
            })
            .collect()
    }
}

pub fn transition_landscape(temperature: f64, c: f64, s_grid: &[f64], t_grid: &[f64]) -> Result<Landscape> {
    transition_landscape_with(temperature, c, s_grid, t_grid, &QuadratureSpec::default())
}

pub fn transition_landscape_with(
    temperature: f64,
    c: f64,
    s_grid: &[f64],
    t_grid: &[f64],
    quadrature: &QuadratureSpec,
) -> Result<Landscape> {
    let p = BellDiagonalParams::new(c)?;
    if s_grid.is_empty() {
        return domain("s grid is empty");
    }
    check_grid(t_grid)?;
    let coherence = s_grid
        .par_iter()
        .map(|&s| {
            let env = Environment::ohmic(s, temperature)?.with_quadrature(*quadrature);
            t_grid
                .par_iter()
                .map(|&t| Ok((-dephasing_factor(&env, t)?).exp()))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let phase = coherence
        .iter()
        .map(|row| row.iter().map(|&x| Phase::classify(x, p.magnitude())).collect())
        .collect();
    Ok(Landscape {
        temperature,
        c,
        s_grid: s_grid.to_vec(),
        t_grid: t_grid.to_vec(),
        coherence,
        phase,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const H_01: f64 = 0.007_225_6;

    fn bell(c: f64) -> BellDiagonalParams {
        BellDiagonalParams::new(c).unwrap()
    }

    fn ohmic(s: f64) -> Environment {
        Environment::ohmic(s, 0.0).unwrap()
    }

    #[test]
    fn mutual_information_examples() {
        assert!((mutual_information(bell(0.0), 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((mutual_information(bell(0.1), f64::INFINITY).unwrap() - H_01).abs() < 1e-7);
        let near_one = mutual_information(bell(1.0 - 1e-15), 0.0).unwrap();
        assert!((near_one - 2.0).abs() < 1e-12);
        assert!(mutual_information(bell(0.1), -1.0).is_err());
    }

    #[test]
    fn classical_examples() {
        assert!((classical_correlations(bell(0.1), 0.0).unwrap() - 1.0).abs() < 1e-15);
        let at_touch = classical_correlations(bell(0.1), 10.0_f64.ln()).unwrap();
        assert!((at_touch - H_01).abs() < 1e-7);
        // χ = 0.9: ((1.9) log₂ 1.9 + 0.1 log₂ 0.1) / 2
        let c = classical_correlations(bell(0.9), 5.0).unwrap();
        assert!((c - 0.713_603_8).abs() < 1e-6, "{c}");
    }

    #[test]
    fn discord_examples() {
        assert!((discord(bell(0.1), 0.0).unwrap() - H_01).abs() < 1e-7);
        for l in [0.0, 0.3, 2.0, 50.0] {
            assert_eq!(discord(bell(0.0), l).unwrap(), 0.0);
        }
        assert!((discord(bell(0.1), 10.0_f64.ln()).unwrap() - H_01).abs() < 1e-7);
    }

    #[test]
    fn frozen_values() {
        assert!((frozen_discord_value(bell(0.1)) - H_01).abs() < 1e-7);
        assert_eq!(frozen_discord_value(bell(0.0)), 0.0);
        assert!((frozen_discord_value(bell(0.9)) - 0.713_603_8).abs() < 1e-6);
        assert!((frozen_discord_value(bell(0.8)) - 0.531_004_4).abs() < 1e-6);
        assert_eq!(frozen_discord_value(bell(-0.3)), frozen_discord_value(bell(0.3)));
    }

    #[test]
    fn invalid_state_parameter() {
        assert!(BellDiagonalParams::new(1.0).is_err());
        assert!(BellDiagonalParams::new(-1.5).is_err());
        assert!(BellDiagonalParams::new(f64::NAN).is_err());
    }

    #[test]
    fn markovian_reference() {
        assert!((markovian_transition_time((-2.0_f64).exp(), 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((markovian_transition_time(0.1, 0.5).unwrap() - 10.0_f64.ln()).abs() < 1e-15);
        assert!(markovian_transition_time(1.0 - 1e-12, 1.0).unwrap() < 1e-11);
        assert!(markovian_transition_time(0.0, 1.0).is_err());
        assert!(markovian_transition_time(0.5, 0.0).is_err());
    }

    #[test]
    fn transition_times() {
        let t = transition_time(&ohmic(1.0), bell(0.1), 100.0).unwrap();
        assert!((t.time().unwrap() - 3.0).abs() < 1e-8, "{t:?}");
        // e^(−Λ) = 1/(1+t²) at s = 1
        let t = transition_time(&ohmic(1.0), bell(0.5), 100.0).unwrap();
        assert!((t.time().unwrap() - 1.0).abs() < 1e-8);
        let t = transition_time(&ohmic(1.0), bell(0.25), 100.0).unwrap();
        assert!((t.time().unwrap() - 3.0_f64.sqrt()).abs() < 1e-8);
        assert_eq!(transition_time(&ohmic(2.5), bell(0.1), 100.0).unwrap(), TransitionTime::Never);
        // s = 1: Λ unbounded but the crossing lies beyond a short horizon
        assert_eq!(
            transition_time(&ohmic(1.0), bell(0.1), 2.0).unwrap(),
            TransitionTime::Indeterminate
        );
        assert!(transition_time(&ohmic(1.0), bell(0.0), 10.0).is_err());
    }

    #[test]
    fn time_invariant_discord() {
        assert!(is_time_invariant_discord(&ohmic(2.5), bell(0.1)).unwrap());
        for c in [0.01, 0.1, 0.9] {
            assert!(!is_time_invariant_discord(&ohmic(1.0), bell(c)).unwrap());
        }
        assert!(is_time_invariant_discord_given_sup(0.058, bell(0.9)).unwrap());
        assert!(!is_time_invariant_discord_given_sup(0.058, bell(0.95)).unwrap());
    }

    #[test]
    fn frozen_region_examples() {
        let r = frozen_region(0.0, &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(r.boundary_c[0], 0.0);
        assert_eq!(r.boundary_c[1], 0.0);
        assert!(r.empty[0] && r.empty[1] && !r.empty[2]);
        assert!((r.boundary_c[2] - (-2.0_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn landscape_labels() {
        let t_grid: Vec<f64> = (0..=100).map(|k| 0.1 * k as f64).collect();
        let l = transition_landscape(0.0, 0.1, &[1.0, 2.5], &t_grid).unwrap();
        assert!(l.phase.iter().all(|row| row[0] == Phase::ClassicalDecoherence));
        assert!(l.phase[1].iter().all(|p| *p == Phase::ClassicalDecoherence));
        let b = l.boundary_times();
        // t = 3 up to the rounding of the grid point itself
        assert!((b[0].unwrap() - 3.0).abs() < 0.1 + 1e-12);
        assert_eq!(b[1], None);
    }

    #[test]
    fn trajectory_freezing() {
        let times: Vec<f64> = (0..=60).map(|k| 0.1 * k as f64).collect();
        let tr = correlation_trajectories(&ohmic(1.0), bell(0.1), &times).unwrap();
        let t_bar = tr.transition_time.time().unwrap();
        for (i, &t) in times.iter().enumerate() {
            if t < t_bar - 1e-9 {
                assert!((tr.discord[i] - H_01).abs() < 1e-7);
            } else if t > t_bar + 1e-9 {
                assert!(tr.discord[i] < H_01);
                assert!((tr.classical[i] - H_01).abs() < 1e-7);
            }
        }
        let zero = correlation_trajectories(&ohmic(1.0), bell(0.0), &times).unwrap();
        assert!(zero.discord.iter().all(|&q| q == 0.0));
        assert_eq!(zero.mutual_information, zero.classical);
    }
}
