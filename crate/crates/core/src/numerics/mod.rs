//! Numerical kernels shared by the physics modules: the gamma function,
//! semi-infinite quadrature for oscillatory integrands, bracketed root
//! finding, finite-difference curvature and sign-change scanning.

mod diff;
mod gamma;
mod quadrature;
mod roots;
mod scan;

pub use diff::{default_step, second_derivative, second_derivative_default};
pub use gamma::gamma_function;
pub use quadrature::{
    integrate_finite, integrate_semi_infinite, integrate_semi_infinite_with, IntegrandHints,
    QuadratureSpec,
};
pub use roots::{find_root_bracketed, Bracket};
pub use scan::sign_change_scan;

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `n` points evenly spaced on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// `n` points evenly spaced in log on `[lo, hi]`; requires `0 < lo`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    linspace(a, b, n)
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                x.exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn grids_hit_endpoints() {
        let g = linspace(0.0, 1.0, 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[10], 1.0);
        let l = logspace(1e-3, 10.0, 5);
        assert_eq!(l[0], 1e-3);
        assert_eq!(l[4], 10.0);
        assert!((l[2] - 0.1).abs() < 1e-15);
    }
}
