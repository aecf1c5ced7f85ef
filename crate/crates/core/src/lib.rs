//! Exact pure-dephasing dynamics of qubits coupled to bosonic reservoirs.
//!
//! The crate evaluates the dephasing rate `γ(t)` and dephasing factor `Λ(t)`
//! of a qubit in a thermal Ohmic-class (or tabulated) reservoir, detects
//! non-Markovian dynamics through intervals of negative rate, locates the
//! temperature-dependent critical Ohmicity, tests the convexity of the
//! thermal weight `g(ω, T)`, and follows the correlations of two qubits that
//! start in a Bell-diagonal state: mutual information, classical
//! correlations, discord, the sudden transition time and the region of
//! parameters where discord stays frozen forever.
//!
//! Units are reduced: `ħ = k_B = 1` and the cutoff `ω_c = 1`, so times are in
//! `1/ω_c`, rates and temperatures in `ω_c`.

pub mod cli;
pub mod correlations;
pub mod dephasing;
mod error;
pub mod numerics;
pub mod spectral;

pub use correlations::{
    classical_correlations, correlation_trajectories, discord, frozen_discord_value, frozen_region, frozen_region_with,
    is_time_invariant_discord, is_time_invariant_discord_given_sup, markovian_transition_time,
    mutual_information, sup_dephasing_factor, transition_landscape, transition_landscape_with, transition_time,
    BellDiagonalParams, CorrelationTrajectory, FrozenRegion, Landscape, Phase, SupFactor,
    TransitionTime,
};
pub use dephasing::{
    coherence, dephasing_factor, dephasing_rate, dephasing_rate_high_t, dephasing_rate_numeric,
    dephasing_rate_zero_t, factor_asymptote, find_s_crit, find_s_crit_with, negative_rate_report, trajectory,
    Asymptote, DephasingTrajectory, NegativeRateReport,
};
pub use error::{Error, Result};
pub use spectral::{
    convexity_threshold_s, is_convex, spectral_density, thermal_weight, ConvexityReport,
    Environment, OhmicSpectrum, Spectrum, TabulatedSpectrum,
};
