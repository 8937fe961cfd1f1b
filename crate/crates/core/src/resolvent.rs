//! The Green operator `𝒢` of `ψ̂'' = (V + ε²)ψ̂ + g` built from the Jost
//! solutions, and the explicit free kernels `𝒢₀`, `𝒢₁`.
//!
//! With `y± = e^{∓εx} f±` and the kernel factors moved inside the integrals,
//!
//! ```text
//! 𝒢(g)(x) = −( f₋(x) A(x) + f₊(x) B(x) ) / W,
//! A(x) = ∫_x^∞ e^{−ε(u−x)} f₊(u) g(u) du,   B(x) = ∫_{−∞}^x e^{−ε(x−u)} f₋(u) g(u) du,
//! ```
//!
//! so `𝒢(g)'' − (V + ε²)𝒢(g) = g`. For `V ≡ 0` this is
//! `−(1/2ε)∫ e^{−ε|x−u|} g(u) du`. `A` and `B` are accumulated panel by panel
//! with exponentially fitted cubic product rules, which stay accurate for
//! `|ε|h` of order one. Data are taken to vanish outside their grid.
//!
//! The physical Laplace transform of the wave equation
//! `ψ_tt − ψ_xx + Vψ = 0` is `−𝒢(ψ₁ + εψ₀)`; this module keeps the
//! `+g` convention and [`crate::ilt::reconstruct_time_solution`] applies the
//! sign.

use crate::error::invalid;
use crate::jost::{Frequency, JostConfig, JostPair};
use crate::numerics::fd;
use crate::numerics::lsq::{self, LsqFit};
use crate::numerics::product::ExpPanels;
use crate::potential::PotentialSpec;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

#[allow(unused_imports)]
use crate::prelude::*;

type C = Complex64;

/// Highest weight power `k` for which `‖⟨x⟩^k f‖₁` is stored.
pub const MOMENT_ORDER: usize = 10;

/// Complex samples on an increasing grid, with weighted `L¹` moments.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Vec<f64>,
    values: Vec<C>,
    moments: [f64; MOMENT_ORDER + 1],
}

impl GridFunction {
    /// Wrap samples; the grid must be strictly increasing with ≥ 2 points
    /// and the values finite.
    pub fn new(grid: Vec<f64>, values: Vec<C>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(invalid!("grid function needs ≥ 2 points and matching lengths"));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid!("grid must be strictly increasing"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid!("grid function values must be finite"));
        }
        let mut moments = [0.0; MOMENT_ORDER + 1];
        for (k, mk) in moments.iter_mut().enumerate() {
            let w: Vec<f64> = grid
                .iter()
                .zip(&values)
                .map(|(&x, v)| (1.0 + x * x).sqrt().powi(k as i32) * v.norm())
                .collect();
            *mk = trapezoid(&grid, &w);
        }
        Ok(Self { grid, values, moments })
    }

    /// Real samples.
    pub fn from_real(grid: Vec<f64>, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| C::new(v, 0.0)).collect())
    }

    /// Sample `f` on `grid`.
    pub fn sample<F: FnMut(f64) -> f64>(grid: Vec<f64>, mut f: F) -> Result<Self> {
        let v: Vec<C> = grid.iter().map(|&x| C::new(f(x), 0.0)).collect();
        Self::new(grid, v)
    }

    /// Identically zero function on `grid`.
    pub fn zeros(grid: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![C::new(0.0, 0.0); n])
    }

    /// Sample points.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Sample values.
    pub fn values(&self) -> &[C] {
        &self.values
    }

    /// `‖⟨x⟩^k f‖₁` (trapezoid rule), `k ≤ MOMENT_ORDER`.
    pub fn moment(&self, k: usize) -> f64 {
        self.moments[k.min(MOMENT_ORDER)]
    }

    /// `max |f|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.norm()))
    }

    /// Index of the grid node equal to `x` (within 1e-12).
    pub fn node(&self, x: f64) -> Option<usize> {
        self.grid.iter().position(|&g| (g - x).abs() <= 1e-12 * (1.0 + x.abs()))
    }

    /// `a·self + b·other` on a common grid.
    pub fn combine(&self, a: C, other: &Self, b: C) -> Result<Self> {
        if self.grid != other.grid {
            return Err(invalid!("grid functions live on different grids"));
        }
        let v = self.values.iter().zip(&other.values).map(|(&p, &q)| a * p + b * q).collect();
        Self::new(self.grid.clone(), v)
    }

    fn with_values(&self, values: Vec<C>) -> Self {
        // Values produced by the operators are finite whenever the inputs are.
        Self::new(self.grid.clone(), values).expect("finite operator output")
    }
}

fn trapezoid(grid: &[f64], f: &[f64]) -> f64 {
    grid.windows(2).zip(f.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

/// Settings for the Green operator.
#[derive(Debug, Clone, Copy)]
pub struct ResolventConfig {
    /// Jost solver settings.
    pub jost: JostConfig,
    /// Smallest admissible `|W(ε)|`.
    pub min_wronskian: f64,
}

impl Default for ResolventConfig {
    fn default() -> Self {
        Self { jost: JostConfig::default(), min_wronskian: 1e-10 }
    }
}

/// `𝒢` at one frequency on one grid: Jost solutions and Wronskian cached.
#[derive(Debug, Clone)]
pub struct Green {
    eps: Frequency,
    grid: Vec<f64>,
    f_plus: Vec<C>,
    f_minus: Vec<C>,
    w: C,
    panels: ExpPanels,
}

impl Green {
    /// Solve the Jost pair on `grid`; refuses when `|W(ε)|` is below the
    /// configured threshold.
    pub fn new(spec: &PotentialSpec, eps: Frequency, grid: &[f64], cfg: &ResolventConfig) -> Result<Self> {
        if grid.len() < 2 {
            return Err(invalid!("green operator needs ≥ 2 grid points"));
        }
        let pair = JostPair::solve(spec, eps, grid, &cfg.jost)?;
        let w = pair.wronskian()?.value;
        if w.norm() < cfg.min_wronskian {
            return Err(Error::SmallWronskian(w.norm()));
        }
        let f_plus = pair.plus.s.iter().map(|s| C::new(1.0, 0.0) + s).collect();
        let f_minus = pair.minus.s.iter().map(|s| C::new(1.0, 0.0) + s).collect();
        Ok(Self { eps, grid: grid.to_vec(), f_plus, f_minus, w, panels: ExpPanels::new(grid, eps.value()) })
    }

    /// The Wronskian used.
    pub fn wronskian(&self) -> C {
        self.w
    }

    /// Frequency.
    pub fn epsilon(&self) -> Frequency {
        self.eps
    }

    /// Apply `𝒢` to `g` (on the same grid).
    pub fn apply(&self, g: &GridFunction) -> Result<GridFunction> {
        if g.grid != self.grid {
            return Err(invalid!("data grid differs from the operator grid"));
        }
        let gp: Vec<C> = g.values.iter().zip(&self.f_plus).map(|(a, b)| a * b).collect();
        let gm: Vec<C> = g.values.iter().zip(&self.f_minus).map(|(a, b)| a * b).collect();
        let (a, b) = sweeps(&self.panels, &gp, &gm);
        let inv_w = C::new(1.0, 0.0) / self.w;
        let out = (0..self.grid.len()).map(|i| -(self.f_minus[i] * a[i] + self.f_plus[i] * b[i]) * inv_w).collect();
        Ok(g.with_values(out))
    }
}

/// `A_i = ∫_{x_i}^{end} e^{−a(u−x_i)} p`, `B_i = ∫_{start}^{x_i} e^{−a(x_i−u)} q`.
fn sweeps(panels: &ExpPanels, p: &[C], q: &[C]) -> (Vec<C>, Vec<C>) {
    let n = p.len();
    let mut a = vec![C::new(0.0, 0.0); n];
    let mut b = vec![C::new(0.0, 0.0); n];
    for i in (0..n - 1).rev() {
        a[i] = panels.decay[i] * a[i + 1] + panels.left_integral(i, p);
    }
    for i in 0..n - 1 {
        b[i + 1] = panels.decay[i] * b[i] + panels.right_integral(i, q);
    }
    (a, b)
}

/// `𝒢(f)` for a single frequency (solves the Jost pair on `f`'s grid).
pub fn green_apply(spec: &PotentialSpec, eps: Frequency, f: &GridFunction, cfg: &ResolventConfig) -> Result<GridFunction> {
    Green::new(spec, eps, &f.grid, cfg)?.apply(f)
}

fn free_kernels(eps: Frequency, f: &GridFunction, sign_b: f64) -> GridFunction {
    let e = eps.value();
    let panels = ExpPanels::new(&f.grid, e);
    let (a, b) = sweeps(&panels, &f.values, &f.values);
    let pre = C::new(1.0, 0.0) / ((C::new(1.0, 0.0) + e) * 2.0);
    f.with_values(a.iter().zip(&b).map(|(&ai, &bi)| (-ai + bi * sign_b) * pre).collect())
}

/// `𝒢₀(f) = −(A₀ + B₀)/(2(1+ε))` with the free kernels
/// `A₀ = ∫_x^∞ e^{−ε(u−x)} f`, `B₀ = ∫_{−∞}^x e^{−ε(x−u)} f`.
pub fn free_g0(eps: Frequency, f: &GridFunction) -> GridFunction {
    free_kernels(eps, f, -1.0)
}

/// `𝒢₁(f) = (−A₀ + B₀)/(2(1+ε))`.
pub fn free_g1(eps: Frequency, f: &GridFunction) -> GridFunction {
    free_kernels(eps, f, 1.0)
}

/// Singular/smooth split of `ψ̂` used for small-ε diagnostics.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// `𝒢₀(ψ₁)`.
    pub free_part: GridFunction,
    /// `ψ̂ − 𝒢₀(ψ₁)`.
    pub remainder: GridFunction,
}

/// `ψ̂ = 𝒢(ψ₁ + εψ₀)` with its ODE residual.
#[derive(Debug, Clone)]
pub struct ResolventResult {
    /// Frequency.
    pub epsilon: Frequency,
    /// `ψ̂` on the data grid.
    pub psi_hat: GridFunction,
    /// Optional decomposition.
    pub parts: Option<Decomposition>,
    /// `max|ψ̂'' − (V+ε²)ψ̂ − (ψ₁+εψ₀)| / (max|ψ₁| + |ε| max|ψ₀|)`, interior
    /// points, 7-point stencil.
    pub residual: f64,
}

/// Relative ODE residual of `u ≈ 𝒢(g)` (7-point stencil, 3 points trimmed at each end).
pub fn residual(spec: &PotentialSpec, eps: Frequency, u: &GridFunction, g: &GridFunction, scale: f64) -> f64 {
    let d2 = fd::derivative(&u.grid, &u.values, 2, 7);
    let e2 = eps.value() * eps.value();
    let n = u.grid.len();
    let mut worst: f64 = 0.0;
    for i in 3..n.saturating_sub(3) {
        let r = d2[i] - (e2 + spec.evaluate(u.grid[i])) * u.values[i] - g.values[i];
        worst = worst.max(r.norm());
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// `ψ̂ = 𝒢(ψ₁ + εψ₀)`; with `decompose` the free part `𝒢₀(ψ₁)` is split off.
pub fn psi_hat(
    spec: &PotentialSpec,
    eps: Frequency,
    psi0: &GridFunction,
    psi1: &GridFunction,
    decompose: bool,
    cfg: &ResolventConfig,
) -> Result<ResolventResult> {
    let g = psi1.combine(C::new(1.0, 0.0), psi0, eps.value())?;
    let green = Green::new(spec, eps, &g.grid, cfg)?;
    psi_hat_with(&green, spec, psi0, psi1, &g, decompose)
}

fn psi_hat_with(
    green: &Green,
    spec: &PotentialSpec,
    psi0: &GridFunction,
    psi1: &GridFunction,
    g: &GridFunction,
    decompose: bool,
) -> Result<ResolventResult> {
    let eps = green.eps;
    let u = green.apply(g)?;
    let scale = psi1.sup_norm() + eps.value().norm() * psi0.sup_norm();
    let residual = residual(spec, eps, &u, g, scale);
    let parts = if decompose {
        let free = free_g0(eps, psi1);
        let rem = u.combine(C::new(1.0, 0.0), &free, C::new(-1.0, 0.0))?;
        Some(Decomposition { free_part: free, remainder: rem })
    } else {
        None
    };
    Ok(ResolventResult { epsilon: eps, psi_hat: u, parts, residual })
}

/// `ψ̂(x₀, ε)` for `x₀` a node of the data grid (the value at one point; no
/// residual bookkeeping).
pub fn psi_hat_at(
    spec: &PotentialSpec,
    eps: Frequency,
    psi0: &GridFunction,
    psi1: &GridFunction,
    x0: f64,
    cfg: &ResolventConfig,
) -> Result<C> {
    let k = psi1.node(x0).ok_or_else(|| invalid!("x0 = {x0} is not a node of the data grid"))?;
    let g = psi1.combine(C::new(1.0, 0.0), psi0, eps.value())?;
    Ok(Green::new(spec, eps, &g.grid, cfg)?.apply(&g)?.values[k])
}

/// Least-squares split `y(ε) ≈ c·ε^p ln ε + Σ_k a_k ε^k` (k = 0..smooth_terms)
/// of real samples; returns `c` and the fit.
#[derive(Debug, Clone)]
pub struct SingularFit {
    /// Coefficient of `ε^p ln ε`.
    pub coefficient: f64,
    /// Underlying fit.
    pub fit: LsqFit,
}

/// Fit `samples = (ε, y)` to `c ε^p ln ε + Σ_{k<smooth_terms} a_k ε^k`.
pub fn fit_log_singularity(samples: &[(f64, f64)], p: u32, smooth_terms: usize) -> Result<SingularFit> {
    if samples.len() < smooth_terms + 2 {
        return Err(Error::Fit(alloc::format!("{} samples for {} unknowns", samples.len(), smooth_terms + 1)));
    }
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|&(e, _)| {
            let mut r = vec![e.powi(p as i32) * e.ln()];
            r.extend((0..smooth_terms).map(|k| e.powi(k as i32)));
            r
        })
        .collect();
    let b: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let fit = lsq::solve(&rows, &b)?;
    Ok(SingularFit { coefficient: fit.coef[0], fit })
}
