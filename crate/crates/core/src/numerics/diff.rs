use crate::error::{domain, Error, Result};

/// Default central-difference step `max(1e-4, 1e-4·|x|)`.
pub fn default_step(x: f64) -> f64 {
    1e-4_f64.max(1e-4 * x.abs())
}

/// Central second difference `(f(x+h) − 2f(x) + f(x−h)) / h²`.
pub fn second_derivative<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(h > 0.0) || !h.is_finite() {
        return domain(format!("finite-difference step must be > 0, got {h}"));
    }
    let mut vals = [0.0; 3];
    for (slot, xi) in vals.iter_mut().zip([x - h, x, x + h]) {
        let y = f(xi);
        if !y.is_finite() {
            return Err(Error::NonFinite { x: xi });
        }
        *slot = y;
    }
    Ok((vals[2] - 2.0 * vals[1] + vals[0]) / (h * h))
}

pub fn second_derivative_default<F>(f: F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    second_derivative(f, x, default_step(x))
}
