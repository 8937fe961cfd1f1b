//! Finite-difference weights on arbitrary grids (Fornberg's recursion) and
//! stencil derivatives of gridded data, used by the residual oracles.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Weights `w` such that `f^{(order)}(z) ≈ Σ w_i f(x_i)`.
pub fn weights(z: f64, x: &[f64], order: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0f64; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Stencil derivative of order `order` at every grid point, using `width`
/// consecutive points centred where possible (one-sided near the ends).
pub fn derivative(grid: &[f64], f: &[Complex64], order: usize, width: usize) -> Vec<Complex64> {
    let n = grid.len();
    let w = width.min(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let s = i.saturating_sub(w / 2).min(n - w);
        let wt = weights(grid[i], &grid[s..s + w], order);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..w {
            acc += f[s + k] * wt[k];
        }
        out.push(acc);
    }
    out
}
