//! Reservoir spectral densities, the thermal weight `g(ω, T)` and the
//! convexity test that separates Markovian from possibly non-Markovian
//! dephasing.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::{
    default_step, logspace, second_derivative, Bracket, IntegrandHints, QuadratureSpec,
};

/// `J(ω) = ω^s ω_c^(1−s) e^(−ω/ω_c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OhmicSpectrum {
    pub s: f64,
    pub omega_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OhmicClass {
    SubOhmic,
    Ohmic,
    SuperOhmic,
}

impl OhmicSpectrum {
    pub fn new(s: f64, omega_c: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return domain(format!("s must be > 0, got {s}"));
        }
        if !(omega_c > 0.0) || !omega_c.is_finite() {
            return domain(format!("omega_c must be > 0, got {omega_c}"));
        }
        Ok(Self { s, omega_c })
    }

    /// Reduced units, `ω_c = 1`.
    pub fn reduced(s: f64) -> Result<Self> {
        Self::new(s, 1.0)
    }

    pub fn class(&self) -> OhmicClass {
        if self.s < 1.0 {
            OhmicClass::SubOhmic
        } else if self.s == 1.0 {
            OhmicClass::Ohmic
        } else {
            OhmicClass::SuperOhmic
        }
    }

    fn density(&self, omega: f64) -> f64 {
        if omega == 0.0 {
            return 0.0;
        }
        let x = omega / self.omega_c;
        self.omega_c * x.powf(self.s) * (-x).exp()
    }
}

/// Spectral density sampled on a grid and interpolated with a monotone
/// piecewise-cubic (Fritsch–Carlson) rule.
///
/// Below the first sample the density follows the power law through the
/// first two samples (or a line to the origin when that slope is not
/// positive); above the last sample it is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSpectrum {
    omega: Vec<f64>,
    j: Vec<f64>,
    slopes: Vec<f64>,
    low_exponent: f64,
}

#[derive(Deserialize)]
struct SampleRow {
    omega: f64,
    #[serde(rename = "J")]
    j: f64,
}

impl TabulatedSpectrum {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return domain("a tabulated spectrum needs at least two samples");
        }
        let omega: Vec<f64> = samples.iter().map(|p| p.0).collect();
        let j: Vec<f64> = samples.iter().map(|p| p.1).collect();
        for (i, (&w, &v)) in omega.iter().zip(&j).enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return domain(format!("sample {i}: omega must be finite and > 0, got {w}"));
            }
            if !(v >= 0.0) || !v.is_finite() {
                return domain(format!("sample {i}: J must be finite and >= 0, got {v}"));
            }
            if i > 0 && !(w > omega[i - 1]) {
                return domain(format!("sample {i}: omega must be strictly increasing"));
            }
        }
        let slopes = pchip_slopes(&omega, &j);
        let low_exponent = if j[0] > 0.0 && j[1] > 0.0 {
            let p = (j[1] / j[0]).ln() / (omega[1] / omega[0]).ln();
            if p > 0.0 {
                p
            } else {
                1.0
            }
        } else {
            1.0
        };
        Ok(Self {
            omega,
            j,
            slopes,
            low_exponent,
        })
    }

    /// Reads a two-column CSV with header `omega,J`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Domain(format!("spectrum CSV: {e}")))?
            .clone();
        if headers.len() != 2 || &headers[0] != "omega" || &headers[1] != "J" {
            return domain(format!("spectrum CSV header must be `omega,J`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")));
        }
        let mut samples = Vec::new();
        for (line, row) in rdr.deserialize::<SampleRow>().enumerate() {
            let row = row.map_err(|e| Error::Domain(format!("spectrum CSV row {}: {e}", line + 2)))?;
            samples.push((row.omega, row.j));
        }
        Self::new(&samples)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Domain(format!("cannot open {}: {e}", path.display())))?;
        Self::from_csv_reader(file)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omega.iter().copied().zip(self.j.iter().copied())
    }

    pub fn max_omega(&self) -> f64 {
        *self.omega.last().expect("at least two samples")
    }

    /// Exponent `p` of the `J ∝ ω^p` extrapolation below the first sample.
    pub fn low_frequency_exponent(&self) -> f64 {
        self.low_exponent
    }

    fn density(&self, omega: f64) -> f64 {
        let n = self.omega.len();
        if omega <= 0.0 {
            return 0.0;
        }
        if omega < self.omega[0] {
            return self.j[0] * (omega / self.omega[0]).powf(self.low_exponent);
        }
        if omega > self.omega[n - 1] {
            return 0.0;
        }
        let k = match self.omega.partition_point(|&w| w <= omega) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        };
        let (x0, x1) = (self.omega[k], self.omega[k + 1]);
        let h = x1 - x0;
        let t = (omega - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        (h00 * self.j[k] + h10 * h * self.slopes[k] + h01 * self.j[k + 1] + h11 * h * self.slopes[k + 1])
            .max(0.0)
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = pchip_edge(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = pchip_edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn pchip_edge(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() || m0 == 0.0 {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

/// Either an Ohmic-class closed form or a tabulated density.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    Ohmic(OhmicSpectrum),
    Tabulated(Arc<TabulatedSpectrum>),
}

impl From<OhmicSpectrum> for Spectrum {
    fn from(s: OhmicSpectrum) -> Self {
        Spectrum::Ohmic(s)
    }
}

impl From<TabulatedSpectrum> for Spectrum {
    fn from(s: TabulatedSpectrum) -> Self {
        Spectrum::Tabulated(Arc::new(s))
    }
}

impl Spectrum {
    pub fn as_ohmic(&self) -> Option<&OhmicSpectrum> {
        match self {
            Spectrum::Ohmic(o) => Some(o),
            Spectrum::Tabulated(_) => None,
        }
    }

    pub(crate) fn density_unchecked(&self, omega: f64) -> f64 {
        match self {
            Spectrum::Ohmic(o) => o.density(omega),
            Spectrum::Tabulated(t) => t.density(omega),
        }
    }

    /// Exponent of the leading `ω^p` behaviour as `ω → 0`.
    pub fn low_frequency_exponent(&self) -> f64 {
        match self {
            Spectrum::Ohmic(o) => o.s,
            Spectrum::Tabulated(t) => t.low_frequency_exponent(),
        }
    }

    pub(crate) fn hints(&self, frequency: Option<f64>) -> IntegrandHints<'_> {
        match self {
            Spectrum::Ohmic(o) => IntegrandHints {
                frequency,
                scale: o.omega_c,
                upper: None,
                breakpoints: &[],
            },
            Spectrum::Tabulated(t) => IntegrandHints {
                frequency,
                scale: t.max_omega() / 16.0,
                upper: Some(t.max_omega()),
                breakpoints: &t.omega,
            },
        }
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spectrum::Ohmic(o) => write!(f, "ohmic(s={}, omega_c={})", o.s, o.omega_c),
            Spectrum::Tabulated(t) => write!(f, "tabulated({} samples)", t.omega.len()),
        }
    }
}

/// Spectrum plus reservoir temperature.
///
/// `temperature` is `k_B T / ħ` in the frequency units of the spectrum, so
/// with `ω_c = 1` it is measured in `ħ ω_c / k_B`; zero means the vacuum.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub spectrum: Spectrum,
    pub temperature: f64,
    pub quadrature: QuadratureSpec,
}

impl Environment {
    pub fn new(spectrum: impl Into<Spectrum>, temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return domain(format!("temperature must be finite and >= 0, got {temperature}"));
        }
        Ok(Self {
            spectrum: spectrum.into(),
            temperature,
            quadrature: QuadratureSpec::default(),
        })
    }

    /// Ohmic-class reservoir in reduced units.
    pub fn ohmic(s: f64, temperature: f64) -> Result<Self> {
        Self::new(OhmicSpectrum::reduced(s)?, temperature)
    }

    pub fn with_quadrature(mut self, quadrature: QuadratureSpec) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.temperature == 0.0
    }

    /// `coth(ω / 2T)`, equal to one at `T = 0`.
    pub(crate) fn coth_factor(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            return 1.0;
        }
        coth(omega / (2.0 * self.temperature))
    }

    /// `g(ω, T)` without argument checks; `ω > 0`.
    pub(crate) fn weight(&self, omega: f64) -> f64 {
        2.0 * self.spectrum.density_unchecked(omega) * self.coth_factor(omega) / (omega * omega)
    }

    /// `J(ω) coth(ω/2T)`, which stays finite down to tiny `ω` where `g`
    /// alone would overflow; `ω > 0`.
    pub(crate) fn thermal_density(&self, omega: f64) -> f64 {
        self.spectrum.density_unchecked(omega) * self.coth_factor(omega)
    }
}

fn coth(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 / x + x / 3.0 - x * x * x / 45.0
    } else {
        1.0 / x.tanh()
    }
}

pub fn spectral_density(spectrum: &Spectrum, omega: f64) -> Result<f64> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return domain(format!("omega must be finite and >= 0, got {omega}"));
    }
    Ok(spectrum.density_unchecked(omega))
}

/// `g(ω, T) = 2 J(ω) coth(ω/2T) / ω²`.
pub fn thermal_weight(env: &Environment, omega: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return domain(format!("thermal weight needs finite omega > 0, got {omega}"));
    }
    Ok(env.weight(omega))
}

/// Second derivative of `g(·, T)` at `ω`.
///
/// Closed form for Ohmic spectra (product rule on `2 ω^(s−2) e^(−ω)` and
/// `coth(ω/2T)`); central differences for tabulated spectra, with the step
/// capped at `ω/4` so the stencil stays on the positive axis.
pub fn weight_second_derivative(env: &Environment, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return domain(format!("omega must be > 0, got {omega}"));
    }
    match &env.spectrum {
        Spectrum::Ohmic(o) => Ok(ohmic_weight_curvature(o, env.temperature, omega)),
        Spectrum::Tabulated(_) => {
            let h = default_step(omega).min(0.25 * omega);
            second_derivative(|w| env.weight(w), omega, h)
        }
    }
}

fn ohmic_weight_curvature(o: &OhmicSpectrum, temperature: f64, omega: f64) -> f64 {
    let p = o.s - 2.0;
    let u = 2.0 * o.omega_c.powf(1.0 - o.s) * omega.powf(p) * (-omega / o.omega_c).exp();
    let a = p / omega - 1.0 / o.omega_c;
    let du = u * a;
    let d2u = u * (a * a - p / (omega * omega));
    if temperature == 0.0 {
        return d2u;
    }
    let x = omega / (2.0 * temperature);
    let v = coth(x);
    let csch2 = {
        let sh = x.sinh();
        1.0 / (sh * sh)
    };
    let dv = -csch2 / (2.0 * temperature);
    let d2v = csch2 * v / (2.0 * temperature * temperature);
    d2u * v + 2.0 * du * dv + u * d2v
}

/// Outcome of a convexity scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    /// Smallest grid frequency where `g″ < −ε`.
    pub first_nonconvex: Option<f64>,
}

pub const DEFAULT_CONVEXITY_RANGE: Bracket = Bracket { lo: 1e-4, hi: 50.0 };
pub const DEFAULT_CONVEXITY_GRID: usize = 2000;

/// Tests `g″(ω) ≥ −ε` on a log-spaced grid, with `ε = 1e-9 · max |g″|`.
pub fn is_convex(env: &Environment, omega_range: Bracket, n_grid: usize) -> Result<ConvexityReport> {
    if !(omega_range.lo > 0.0 && omega_range.lo < omega_range.hi) {
        return domain("convexity range needs 0 < lo < hi");
    }
    if n_grid < 16 {
        return domain("convexity grid needs at least 16 points");
    }
    let grid = logspace(omega_range.lo, omega_range.hi, n_grid);
    let curvature = grid
        .iter()
        .map(|&w| {
            let c = weight_second_derivative(env, w)?;
            if c.is_finite() {
                Ok(c)
            } else {
                Err(Error::NonFinite { x: w })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let scale = curvature.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let eps = 1e-9 * scale;
    let first_nonconvex = grid
        .iter()
        .zip(&curvature)
        .find(|(_, &c)| c < -eps)
        .map(|(&w, _)| w);
    Ok(ConvexityReport {
        convex: first_nonconvex.is_none(),
        first_nonconvex,
    })
}

/// Ohmicity at which `g(·, T)` stops being convex, bisected on `s ∈ [1.5, 3.5]`
/// to a width of `1e-3`.
pub fn convexity_threshold_s(temperature: f64, omega_range: Bracket) -> Result<f64> {
    let non_convex = |s: f64| -> Result<bool> {
        let env = Environment::ohmic(s, temperature)?;
        Ok(!is_convex(&env, omega_range, DEFAULT_CONVEXITY_GRID)?.convex)
    };
    bisect_predicate(non_convex, 1.5, 3.5, 1e-3)
}

/// Threshold of a predicate that is false at `lo` and true at `hi`.
pub(crate) fn bisect_predicate<P>(pred: P, mut lo: f64, mut hi: f64, width: f64) -> Result<f64>
where
    P: Fn(f64) -> Result<bool>,
{
    if pred(lo)? || !pred(hi)? {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            reason: "predicate does not switch from false to true across the bracket".into(),
        });
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
