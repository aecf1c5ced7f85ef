use super::{linspace, Bracket};
use crate::error::{domain, Result};

/// Consecutive pairs of an evenly spaced grid on `[lo, hi]` across which `f`
/// changes sign, in increasing order. A grid point where `f` is exactly zero
/// closes the bracket on its left.
///
/// `n_grid` counts cells, so the grid has `n_grid + 1` points and doubling
/// `n_grid` refines the previous grid in place.
pub fn sign_change_scan<F>(f: F, lo: f64, hi: f64, n_grid: usize) -> Result<Vec<Bracket>>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return domain(format!("scan range needs lo < hi, got [{lo}, {hi}]"));
    }
    if n_grid < 2 {
        return domain("scan needs at least two grid points");
    }
    let grid = linspace(lo, hi, n_grid + 1);
    let mut out = Vec::new();
    let mut prev_x = grid[0];
    let mut prev_y = f(prev_x);
    for &x in &grid[1..] {
        let y = f(x);
        let crosses = (prev_y < 0.0 && y >= 0.0) || (prev_y > 0.0 && y <= 0.0);
        if crosses {
            out.push(Bracket { lo: prev_x, hi: x });
        }
        prev_x = x;
        prev_y = y;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_zeros() {
        let b = sign_change_scan(f64::sin, 0.1, 7.0, 1000).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b[0].contains(PI));
        assert!(b[1].contains(2.0 * PI));
    }

    #[test]
    fn no_change() {
        assert!(sign_change_scan(|x| 1.0 + x * x, -3.0, 3.0, 100).unwrap().is_empty());
    }

    #[test]
    fn invalid_arguments() {
        assert!(sign_change_scan(f64::sin, 1.0, 1.0, 10).is_err());
        assert!(sign_change_scan(f64::sin, 0.0, 1.0, 1).is_err());
    }
}
