use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::CompensatedSum;
use crate::error::{domain, Error, Result};

/// Tolerances and limits for [`integrate_semi_infinite`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    /// Bisections allowed inside a single panel before giving up.
    pub max_subdivisions: usize,
    /// The tail is dropped once a panel's envelope falls below this
    /// fraction of the running sum.
    pub truncation_threshold: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            absolute_tolerance: 1e-12,
            max_subdivisions: 200,
            truncation_threshold: 1e-14,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0) {
            return domain("relative_tolerance must be > 0");
        }
        if !(self.absolute_tolerance > 0.0) {
            return domain("absolute_tolerance must be > 0");
        }
        if self.max_subdivisions < 1 {
            return domain("max_subdivisions must be >= 1");
        }
        if !(self.truncation_threshold > 0.0) {
            return domain("truncation_threshold must be > 0");
        }
        Ok(())
    }
}

/// Shape information about an integrand that the panel splitter uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandHints<'a> {
    /// Angular frequency of a known `sin(ω t)`/`cos(ω t)` factor; panels are
    /// then aligned to half periods `π / t`.
    pub frequency: Option<f64>,
    /// Characteristic width of the non-oscillatory envelope (the cutoff).
    pub scale: f64,
    /// Hard upper limit, for integrands with compact support.
    pub upper: Option<f64>,
    /// Sorted points where the integrand has kinks; panel edges are placed
    /// on every one of them.
    pub breakpoints: &'a [f64],
}

impl Default for IntegrandHints<'_> {
    fn default() -> Self {
        Self {
            frequency: None,
            scale: 1.0,
            upper: None,
            breakpoints: &[],
        }
    }
}

impl IntegrandHints<'_> {
    pub fn oscillating(frequency: f64) -> Self {
        Self {
            frequency: Some(frequency),
            ..Self::default()
        }
    }
}

const MAX_PANELS: usize = 5_000_000;
// Beyond this many envelope widths an integrand that has been identically
// zero so far is taken to be zero.
const ZERO_SPAN: f64 = 2_000.0;

/// `∫₀^∞ f(ω) dω` for an integrand that decays at least exponentially.
pub fn integrate_semi_infinite<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_semi_infinite_with(f, spec, &IntegrandHints::default())
}

/// `∫₀^∞ f(ω) dω` with panel alignment driven by `hints`.
///
/// The axis is cut into panels (half periods of the oscillation when a
/// frequency is given, otherwise geometrically growing widths starting at
/// `hints.scale`), each panel is integrated with adaptive Gauss–Kronrod
/// (10/21), and the panel results are summed with compensation. The first
/// panel is mapped through `ω = u²` so integrable `ω^(-1/2)`-type endpoint
/// behaviour becomes smooth.
pub fn integrate_semi_infinite_with<F>(
    f: F,
    spec: &QuadratureSpec,
    hints: &IntegrandHints,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(hints.scale > 0.0) || !hints.scale.is_finite() {
        return domain("integrand scale must be finite and > 0");
    }
    let half_period = match hints.frequency {
        Some(w) if w.is_finite() && w > 0.0 => Some(PI / w),
        Some(w) if !w.is_finite() || w < 0.0 => {
            return domain(format!("oscillation frequency must be finite and >= 0, got {w}"))
        }
        _ => None,
    };
    let upper = match hints.upper {
        Some(u) if !(u > 0.0) => return domain("upper limit must be > 0"),
        u => u,
    };

    if hints.breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return domain("breakpoints must be strictly increasing");
    }

    let mut panels = Panels::new(hints.scale, half_period, hints.breakpoints);
    let mut total = CompensatedSum::default();
    let mut l1 = 0.0;
    let mut quiet = 0;

    for index in 0..MAX_PANELS {
        let (a, mut b) = panels.next_panel();
        if let Some(u) = upper {
            if a >= u {
                return Ok(total.value());
            }
            b = b.min(u);
        }

        let panel = if index == 0 {
            let root = b.sqrt();
            adaptive(&|u: f64| 2.0 * u * f(u * u), 0.0, root, spec)?
        } else {
            adaptive(&f, a, b, spec)?
        };
        total.add(panel.value);
        l1 += panel.abs;

        let partial = total.value().abs();
        if partial > 0.0 && panel.abs <= spec.truncation_threshold * partial {
            quiet += 1;
            if quiet >= 2 {
                return Ok(total.value());
            }
        } else {
            quiet = 0;
        }
        if l1 == 0.0 && b > ZERO_SPAN * hints.scale {
            return Ok(0.0);
        }
    }
    Err(Error::NonConvergence(format!(
        "tail did not fall below the truncation threshold within {MAX_PANELS} panels"
    )))
}

/// Adaptive Gauss–Kronrod over a finite interval.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return domain("integration limits must be finite");
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_finite(f, b, a, spec).map(|v| -v);
    }
    adaptive(&f, a, b, spec).map(|p| p.value)
}

struct Panels<'a> {
    scale: f64,
    breakpoints: &'a [f64],
    // Remainder of a panel that was cut at a breakpoint.
    rest: Option<(f64, f64)>,
    half_period: Option<f64>,
    // Once the width reaches the half period, panels are laid on the grid
    // origin + k * half_period (computed by multiplication, not accumulation).
    aligned_from: Option<(f64, u64)>,
    next_a: f64,
    width: f64,
}

impl<'a> Panels<'a> {
    fn new(scale: f64, half_period: Option<f64>, breakpoints: &'a [f64]) -> Self {
        let mut panels = Self {
            scale,
            breakpoints,
            rest: None,
            half_period,
            aligned_from: None,
            next_a: 0.0,
            width: scale,
        };
        if let Some(hp) = half_period {
            if hp <= scale {
                panels.aligned_from = Some((0.0, 0));
            }
        }
        panels
    }

    fn next_panel(&mut self) -> (f64, f64) {
        let (a, b) = match self.rest.take() {
            Some(r) => r,
            None => self.next_base(),
        };
        let i = self.breakpoints.partition_point(|&x| x <= a);
        match self.breakpoints.get(i) {
            Some(&x) if x < b => {
                self.rest = Some((x, b));
                (a, x)
            }
            _ => (a, b),
        }
    }

    fn next_base(&mut self) -> (f64, f64) {
        if let Some((origin, k)) = self.aligned_from {
            let hp = self.half_period.unwrap_or(self.scale);
            let a = origin + hp * k as f64;
            let b = origin + hp * (k + 1) as f64;
            self.aligned_from = Some((origin, k + 1));
            return (a, b);
        }
        let a = self.next_a;
        let mut width = self.width;
        if let Some(hp) = self.half_period {
            if width >= hp {
                self.aligned_from = Some((a, 1));
                return (a, a + hp);
            }
        }
        width = width.max(self.scale);
        self.next_a = a + width;
        self.width = width * 2.0;
        (a, a + width)
    }
}

#[derive(Debug, Clone, Copy)]
struct PanelResult {
    value: f64,
    abs: f64,
}

#[derive(Debug, Clone, Copy)]
struct Kronrod {
    value: f64,
    err: f64,
    abs: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

fn eval<F: Fn(f64) -> f64 + ?Sized>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite { x })
    }
}

fn kronrod21<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Result<Kronrod> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = eval(f, center)?;
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let abs = res_abs * half.abs();
    let asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * abs;
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(roundoff);
    }
    Ok(Kronrod { value, err, abs })
}

/// Global adaptive bisection on one panel: the piece with the largest error
/// estimate is split until the summed error meets the tolerance. Pieces whose
/// error is already at the rounding floor cannot improve and stop the loop.
fn adaptive<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<PanelResult> {
    let mut pieces = vec![(a, b, kronrod21(f, a, b)?)];
    let mut splits = 0;
    loop {
        let abs: f64 = pieces.iter().map(|p| p.2.abs).sum();
        let err: f64 = pieces.iter().map(|p| p.2.err).sum();
        let tol = (spec.relative_tolerance * abs).max(spec.absolute_tolerance);
        if err <= tol {
            break;
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| if p.2.err > best.1 { (i, p.2.err) } else { best });
        let (lo, hi, k) = pieces[worst];
        if k.err <= 50.0 * f64::EPSILON * k.abs {
            break;
        }
        splits += 1;
        let mid = 0.5 * (lo + hi);
        if splits > spec.max_subdivisions || mid <= lo || mid >= hi {
            return Err(Error::NonConvergence(format!(
                "panel [{a}, {b}] needs more than {} subdivisions (estimated error {err:.3e}, tolerance {tol:.3e})",
                spec.max_subdivisions
            )));
        }
        pieces[worst] = (lo, mid, kronrod21(f, lo, mid)?);
        pieces.push((mid, hi, kronrod21(f, mid, hi)?));
    }
    pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut value = CompensatedSum::default();
    let mut abs = 0.0;
    for (_, _, k) in &pieces {
        value.add(k.value);
        abs += k.abs;
    }
    Ok(PanelResult {
        value: value.value(),
        abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn exponential() {
        let v = integrate_semi_infinite(|w| (-w).exp(), &spec()).unwrap();
        assert!((v - 1.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn log_closed_form() {
        let f = |w: f64| (-w).exp() * (1.0 - (3.0 * w).cos()) / w;
        let v = integrate_semi_infinite_with(f, &spec(), &IntegrandHints::oscillating(3.0)).unwrap();
        let exact = 0.5 * 10.0_f64.ln();
        assert!((v - exact).abs() < 1e-11, "{v} vs {exact}");
    }

    #[test]
    fn arctan_closed_form_oscillatory() {
        let f = |w: f64| (-w).exp() * (50.0 * w).sin() / w;
        let v =
            integrate_semi_infinite_with(f, &spec(), &IntegrandHints::oscillating(50.0)).unwrap();
        assert!((v - 50.0_f64.atan()).abs() < 1e-11, "{v}");
    }

    #[test]
    fn endpoint_singularity() {
        // ∫ ω^{-1/2} e^{-ω} = √π
        let v = integrate_semi_infinite(|w| (-w).exp() / w.sqrt(), &spec()).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-11, "{v}");
    }

    #[test]
    fn compact_support() {
        let hints = IntegrandHints {
            upper: Some(2.0),
            ..IntegrandHints::default()
        };
        let v = integrate_semi_infinite_with(|w| w, &spec(), &hints).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn breakpoints_cover_many_kinks() {
        // sawtooth |sin|-like zigzag with 500 kinks on [0, 5], times cos(40ω)
        let knots: Vec<f64> = (1..=500).map(|k| k as f64 * 0.01).collect();
        let zigzag = |w: f64| {
            let x = (w / 0.01).fract();
            if x < 0.5 { x } else { 1.0 - x }
        };
        let hints = IntegrandHints {
            frequency: Some(40.0),
            upper: Some(5.0),
            scale: 0.3,
            breakpoints: &knots,
        };
        let strict = QuadratureSpec {
            max_subdivisions: 20,
            ..spec()
        };
        let v = integrate_semi_infinite_with(|w| zigzag(w) * (40.0 * w).cos(), &strict, &hints).unwrap();
        let reference = integrate_finite(|w| zigzag(w) * (40.0 * w).cos(), 0.0, 5.0, &QuadratureSpec {
            max_subdivisions: 100_000,
            ..spec()
        })
        .unwrap();
        assert!((v - reference).abs() < 1e-10, "{v} vs {reference}");
        let unsorted = IntegrandHints {
            breakpoints: &[1.0, 0.5],
            ..IntegrandHints::default()
        };
        assert!(integrate_semi_infinite_with(|w| (-w).exp(), &spec(), &unsorted).is_err());
    }

    #[test]
    fn identically_zero() {
        let v = integrate_semi_infinite(|_| 0.0, &spec()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn non_finite_is_an_error() {
        let r = integrate_semi_infinite(|w| if w > 3.0 { f64::NAN } else { 1.0 }, &spec());
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn non_convergence_is_reported() {
        let tight = QuadratureSpec {
            max_subdivisions: 1,
            ..spec()
        };
        // Kink at an irrational point that no panel edge hits.
        let r = integrate_finite(|x: f64| (x - 0.3183).abs().sqrt(), 0.0, 1.0, &tight);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn finite_interval_orientation() {
        let v = integrate_finite(|x| x * x, 0.0, 3.0, &spec()).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
        let w = integrate_finite(|x| x * x, 3.0, 0.0, &spec()).unwrap();
        assert!((w + 9.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_spec_rejected() {
        let bad = QuadratureSpec {
            relative_tolerance: 0.0,
            ..spec()
        };
        assert!(integrate_semi_infinite(|w| (-w).exp(), &bad).is_err());
    }
}
