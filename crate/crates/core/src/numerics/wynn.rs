//! Wynn's ε-algorithm for accelerating slowly converging (typically
//! alternating) sequences of partial sums.

use alloc::vec::Vec;
use num_complex::Complex64;

/// Incremental ε-table: push partial sums, read the current best limit.
#[derive(Debug, Clone, Default)]
pub struct Wynn {
    // Last diagonal of the table: e[k] = ε_k for the most recent entry.
    diag: Vec<Complex64>,
    estimates: Vec<Complex64>,
}

impl Wynn {
    /// Empty table.
    pub fn new() -> Self {
        Self::default()
    }

    /// Add the next partial sum and return the updated limit estimate.
    pub fn push(&mut self, s: Complex64) -> Complex64 {
        let mut new_diag = Vec::with_capacity(self.diag.len() + 1);
        new_diag.push(s);
        let mut prev_minus = Complex64::new(0.0, 0.0); // ε_{k−1} of the older diagonal
        for k in 0..self.diag.len() {
            let diff = new_diag[k] - self.diag[k];
            let older = if k == 0 { Complex64::new(0.0, 0.0) } else { prev_minus };
            let next = if diff.norm() == 0.0 || !diff.norm().is_finite() {
                // Converged column; stop extending.
                break;
            } else {
                older + Complex64::new(1.0, 0.0) / diff
            };
            prev_minus = self.diag[k];
            new_diag.push(next);
        }
        self.diag = new_diag;
        // Even columns (ε_0, ε_2, …) approximate the limit; take the deepest.
        let deepest_even = (self.diag.len() - 1) & !1;
        let est = self.diag[deepest_even];
        self.estimates.push(est);
        est
    }

    /// Difference of the last two limit estimates (crude error estimate).
    pub fn error(&self) -> f64 {
        let n = self.estimates.len();
        if n < 2 {
            return f64::INFINITY;
        }
        let a = (self.estimates[n - 1] - self.estimates[n - 2]).norm();
        if n < 3 {
            return a;
        }
        a.max((self.estimates[n - 2] - self.estimates[n - 3]).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accelerates_alternating_harmonic_series() {
        let mut w = Wynn::new();
        let mut s = 0.0;
        let mut est = Complex64::new(0.0, 0.0);
        for k in 1..=20 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            est = w.push(Complex64::new(s, 0.0));
        }
        assert!((est.re - core::f64::consts::LN_2).abs() < 1e-12, "{}", est.re);
    }
}
