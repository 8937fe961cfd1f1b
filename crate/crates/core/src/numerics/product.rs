//! Product integration of `e^{−a u}·p(u)` where `p` is a local cubic
//! interpolant of gridded data. The exponential is integrated exactly, so the
//! rules stay accurate when `|a|·h` is not small (large |ε|, coarse tails).

use alloc::vec::Vec;
use num_complex::Complex64;

#[allow(unused_imports)]
use crate::prelude::*;

type C = Complex64;

/// Moments `M_k = ∫_0^h e^{−a u} u^k du`, `k = 0..=3`.
pub fn exp_moments(a: C, h: f64) -> [C; 4] {
    let z = a * h;
    let mut m = [C::new(0.0, 0.0); 4];
    if z.norm() < 1.5 {
        // Σ_n (−z)^n/n! · h^{k+1}/(n+k+1)
        for (k, mk) in m.iter_mut().enumerate() {
            let mut term = C::new(1.0, 0.0);
            let mut sum = C::new(0.0, 0.0);
            for n in 0..60 {
                let add = term / ((n + k + 1) as f64);
                sum += add;
                if add.norm() < 1e-18 * sum.norm() && n > 2 {
                    break;
                }
                term = term * (-z) / ((n + 1) as f64);
            }
            *mk = sum * h.powi(k as i32 + 1);
        }
    } else {
        let e = (-z).exp();
        m[0] = (C::new(1.0, 0.0) - e) / a;
        let mut hk = 1.0;
        for k in 1..4 {
            hk *= h;
            m[k] = (m[k - 1] * (k as f64) - e * hk) / a;
        }
    }
    m
}

/// Monomial coefficients of the Lagrange basis on up to four nodes:
/// `L_j(u) = Σ_k c[j][k] u^k`.
pub fn lagrange_monomials(nodes: &[f64]) -> [[f64; 4]; 4] {
    let n = nodes.len();
    debug_assert!((2..=4).contains(&n));
    let mut out = [[0.0; 4]; 4];
    for j in 0..n {
        let mut poly = [0.0f64; 4];
        poly[0] = 1.0;
        let mut deg = 0;
        let mut denom = 1.0;
        for (l, &xl) in nodes.iter().enumerate() {
            if l == j {
                continue;
            }
            // poly *= (u − xl)
            for d in (0..=deg + 1).rev() {
                let lower = if d > 0 { poly[d - 1] } else { 0.0 };
                poly[d] = lower - xl * poly[d];
            }
            deg += 1;
            denom *= nodes[j] - xl;
        }
        for k in 0..4 {
            out[j][k] = poly[k] / denom;
        }
    }
    out
}

/// First stencil index for the panel `[x_i, x_{i+1}]` on an `n`-point grid.
#[inline]
pub fn stencil_start(i: usize, n: usize) -> usize {
    let w = n.min(4);
    i.saturating_sub(1).min(n - w)
}

/// Precomputed exponentially weighted panel rules on a monotone grid.
#[derive(Debug, Clone)]
pub struct ExpPanels {
    width: usize,
    start: Vec<usize>,
    left: Vec<[C; 4]>,
    right: Vec<[C; 4]>,
    /// `e^{−a (x_{i+1} − x_i)}` per panel.
    pub decay: Vec<C>,
}

impl ExpPanels {
    /// Build rules for kernel rate `a` on `grid` (strictly increasing, ≥ 2 points).
    pub fn new(grid: &[f64], a: C) -> Self {
        let n = grid.len();
        assert!(n >= 2, "product rule needs at least two grid points");
        let width = n.min(4);
        let mut start = Vec::with_capacity(n - 1);
        let mut left = Vec::with_capacity(n - 1);
        let mut right = Vec::with_capacity(n - 1);
        let mut decay = Vec::with_capacity(n - 1);
        let mut nodes = [0.0; 4];
        for i in 0..n - 1 {
            let s = stencil_start(i, n);
            let h = grid[i + 1] - grid[i];
            let mom = exp_moments(a, h);
            // kernel e^{−a(u − x_i)}, local u = x − x_i
            for k in 0..width {
                nodes[k] = grid[s + k] - grid[i];
            }
            let c = lagrange_monomials(&nodes[..width]);
            let mut wl = [C::new(0.0, 0.0); 4];
            for j in 0..width {
                wl[j] = mom[0] * c[j][0] + mom[1] * c[j][1] + mom[2] * c[j][2] + mom[3] * c[j][3];
            }
            // kernel e^{−a(x_{i+1} − u)}, local v = x_{i+1} − x
            for k in 0..width {
                nodes[k] = grid[i + 1] - grid[s + k];
            }
            let c = lagrange_monomials(&nodes[..width]);
            let mut wr = [C::new(0.0, 0.0); 4];
            for j in 0..width {
                wr[j] = mom[0] * c[j][0] + mom[1] * c[j][1] + mom[2] * c[j][2] + mom[3] * c[j][3];
            }
            start.push(s);
            left.push(wl);
            right.push(wr);
            decay.push((-a * h).exp());
        }
        Self { width, start, left, right, decay }
    }

    /// `∫_{x_i}^{x_{i+1}} e^{−a(u − x_i)} f(u) du`.
    #[inline]
    pub fn left_integral(&self, i: usize, f: &[C]) -> C {
        let s = self.start[i];
        let w = &self.left[i];
        let mut acc = C::new(0.0, 0.0);
        for k in 0..self.width {
            acc += w[k] * f[s + k];
        }
        acc
    }

    /// `∫_{x_i}^{x_{i+1}} e^{−a(x_{i+1} − u)} f(u) du`.
    #[inline]
    pub fn right_integral(&self, i: usize, f: &[C]) -> C {
        let s = self.start[i];
        let w = &self.right[i];
        let mut acc = C::new(0.0, 0.0);
        for k in 0..self.width {
            acc += w[k] * f[s + k];
        }
        acc
    }
}

/// Cumulative integral `∫_{x_0}^{x_i} f` with local cubic interpolation.
pub fn cumulative(grid: &[f64], f: &[C]) -> Vec<C> {
    let p = ExpPanels::new(grid, C::new(0.0, 0.0));
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = C::new(0.0, 0.0);
    out.push(acc);
    for i in 0..grid.len() - 1 {
        acc += p.left_integral(i, f);
        out.push(acc);
    }
    out
}

/// Full integral `∫_{x_0}^{x_n} f` of real samples with local cubic interpolation.
pub fn integrate_real(grid: &[f64], f: &[f64]) -> f64 {
    let fc: Vec<C> = f.iter().map(|&v| C::new(v, 0.0)).collect();
    cumulative(grid, &fc).last().map_or(0.0, |c| c.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_match_quadrature_both_regimes() {
        for &(a, h) in &[(C::new(0.3, 0.2), 0.5), (C::new(4.0, -7.0), 1.3), (C::new(0.0, 0.0), 2.0)] {
            let m = exp_moments(a, h);
            for k in 0..4 {
                let q = crate::numerics::gk::integrate(
                    |u: f64| (-a * u).exp() * u.powi(k as i32),
                    0.0,
                    h,
                    Default::default(),
                )
                .unwrap();
                assert!((m[k] - q).norm() < 1e-13 * (1.0 + q.norm()), "a={a} k={k}");
            }
        }
    }

    #[test]
    fn cubic_exactness_on_nonuniform_grid() {
        let grid = [0.0, 0.1, 0.35, 0.4, 0.9, 1.0, 1.7];
        let f: Vec<C> = grid.iter().map(|&x| C::new(x * x * x - 2.0 * x, 0.0)).collect();
        let a = C::new(1.5, 3.0);
        let p = ExpPanels::new(&grid, a);
        for i in 0..grid.len() - 1 {
            let (lo, hi) = (grid[i], grid[i + 1]);
            let exact_l = crate::numerics::gk::integrate(
                |u: f64| (-a * (u - lo)).exp() * (u * u * u - 2.0 * u),
                lo,
                hi,
                Default::default(),
            )
            .unwrap();
            let exact_r = crate::numerics::gk::integrate(
                |u: f64| (-a * (hi - u)).exp() * (u * u * u - 2.0 * u),
                lo,
                hi,
                Default::default(),
            )
            .unwrap();
            assert!((p.left_integral(i, &f) - exact_l).norm() < 1e-13);
            assert!((p.right_integral(i, &f) - exact_r).norm() < 1e-13);
        }
    }
}
