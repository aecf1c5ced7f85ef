use std::f64::consts::PI;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler gamma function for positive real arguments.
///
/// Lanczos approximation (g = 7, nine terms) with the reflection formula
/// below one half. Relative error stays under 1e-12 on (0, 50].
pub fn gamma_function(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("gamma_function requires finite x > 0, got {x}"));
    }
    Ok(gamma_positive(x))
}

fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * lanczos(1.0 - x))
    } else {
        lanczos(x)
    }
}

// Valid for z >= 0.5.
fn lanczos(z: f64) -> f64 {
    let z = z - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn factorials() {
        assert!(rel(gamma_function(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma_function(5.0).unwrap(), 24.0) < 1e-14);
        let mut fact = 1.0_f64;
        for n in 1..=30 {
            assert!(rel(gamma_function(n as f64).unwrap(), fact) < 1e-12, "n = {n}");
            fact *= n as f64;
        }
    }

    #[test]
    fn half_integer() {
        let sqrt_pi = PI.sqrt();
        assert!(rel(gamma_function(0.5).unwrap(), sqrt_pi) < 1e-14);
        assert!(rel(gamma_function(1.5).unwrap(), sqrt_pi / 2.0) < 1e-14);
        assert!(rel(gamma_function(2.5).unwrap(), 0.75 * sqrt_pi) < 1e-14);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(gamma_function(0.0).is_err());
        assert!(gamma_function(-1.5).is_err());
        assert!(gamma_function(f64::NAN).is_err());
    }

    #[test]
    fn recurrence_on_grid() {
        for k in 1..=100 {
            let x = 0.1 * k as f64;
            let lhs = gamma_function(x + 1.0).unwrap();
            let rhs = x * gamma_function(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-11, "x = {x}");
        }
    }
}
