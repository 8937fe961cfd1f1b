//! Decaying Jost solutions `y±(x;ε) = e^{∓εx}(1 + s±(x;ε))` of
//! `y'' = (V + ε²) y` for `Re ε ≥ 0`, their Wronskian, and the spectral
//! (bound state / zero-energy resonance) scan.
//!
//! On a tail, in the reflected coordinate `ξ = ±x`, `s` solves
//! `s'' − 2εs' − V s = V`, equivalently the Volterra equation
//! `s = T₁ + L s` with `(Lf)(ξ) = ∫_ξ^∞ ∫_t^∞ e^{−2ε(t'−t)} V(t') f(t') dt' dt`.
//! The iteration runs on `[ξ_start, X∞]`:
//!
//! - `ξ_start ≥ |x±|` is the first point where `∫∫|V| < 1/2`, so the map
//!   contracts for every `Re ε ≥ 0`.
//! - `X∞ = max(κ/|ε|, ξ_start)`, and the data at `X∞` come from the
//!   far-field asymptotic series of `s`, which is extremely accurate once
//!   `|ε|X∞ ≥ κ ≈ 40`.
//!
//! Inside the middle region and across the opposite tail the solution is
//! continued by Dormand–Prince integration of the scaled equation
//! `f'' = ±2εf' + V f`, `f = 1 + s`. This is the same ODE as for `y`, but
//! without `e^{∓εx}` overflow.

use crate::error::invalid;
use crate::numerics::fd;
use crate::numerics::ode::{self, OdeOptions};
use crate::numerics::product::ExpPanels;
use crate::potential::{PotentialSpec, PowerTerm, Side};
use crate::specfun::ZeroEnergyPair;
use crate::{Error, Result};
use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

#[allow(unused_imports)]
use crate::prelude::*;

type C = Complex64;

/// Laplace dual variable with `Re ε ≥ 0`, `ε ≠ 0`; logarithms use the
/// principal branch (cut along the negative real axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency(C);

impl Frequency {
    /// Validate `Re ε ≥ 0` (purely imaginary values allowed) and `ε ≠ 0`.
    pub fn new(value: C) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(invalid!("non-finite frequency"));
        }
        if value.re < -1e-14 * (1.0 + value.norm()) {
            return Err(Error::OutOfRange(format!("Re ε = {} < 0", value.re)));
        }
        if value.norm() == 0.0 {
            return Err(Error::OutOfRange("ε = 0 (use the zero-energy anchor)".into()));
        }
        Ok(Self(value))
    }
    /// Real frequency.
    pub fn real(v: f64) -> Result<Self> {
        Self::new(C::new(v, 0.0))
    }
    /// Complex value.
    pub fn value(self) -> C {
        self.0
    }
    /// Principal logarithm.
    pub fn ln(self) -> C {
        self.0.ln()
    }
    /// Complex conjugate (still in the closed right half-plane).
    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }
}

/// Numerical settings for Jost solves.
#[derive(Debug, Clone, Copy)]
pub struct JostConfig {
    /// Ratio of the geometric tail grid.
    pub grid_ratio: f64,
    /// `|ε|·X∞` where the far-field series supplies boundary data.
    pub far_field_scale: f64,
    /// Sup-norm increment at which the Picard iteration stops.
    pub tol_fixed_point: f64,
    /// Iteration cap.
    pub max_iterations: usize,
    /// Required bound on `∫_ξ^∞∫_t^∞|V|` at the start of the Picard region.
    pub contraction_target: f64,
    /// Tail tolerance: the returned grid extends until `|s| <` this.
    pub tol_tail: f64,
    /// Below this `|ε|` the Φ₁ anchor cross-check runs (`None`: `10^{-3}/x_plus`).
    pub eps_switch: Option<f64>,
    /// Integrator settings for the continuation.
    pub ode: OdeOptions,
}

impl Default for JostConfig {
    fn default() -> Self {
        Self {
            grid_ratio: 1.005,
            far_field_scale: 40.0,
            tol_fixed_point: 1e-15,
            max_iterations: 400,
            contraction_target: 0.5,
            tol_tail: 1e-10,
            eps_switch: None,
            ode: OdeOptions::default(),
        }
    }
}

/// Solver diagnostics attached to a [`JostSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JostDiagnostics {
    /// Picard iterations used.
    pub iterations: usize,
    /// Final sup-norm increment.
    pub last_increment: f64,
    /// `|x|` where the Picard region starts.
    pub x_start: f64,
    /// `|x|` of the far-field truncation point.
    pub x_inf: f64,
    /// Relative shape mismatch against the Φ₁ anchor (small |ε| only).
    pub anchor_discrepancy: Option<f64>,
}

/// Sampled Jost solution on an increasing physical grid.
#[derive(Debug, Clone)]
pub struct JostSolution {
    /// Which decaying solution.
    pub side: Side,
    /// Frequency.
    pub epsilon: Frequency,
    /// Increasing sample points.
    pub grid: Vec<f64>,
    /// `y±`.
    pub y: Vec<C>,
    /// `y±'`.
    pub y_prime: Vec<C>,
    /// `s±`.
    pub s: Vec<C>,
    /// `s±'`.
    pub s_prime: Vec<C>,
    /// Solver diagnostics.
    pub diagnostics: JostDiagnostics,
}

impl JostSolution {
    fn assemble(side: Side, eps: Frequency, grid: Vec<f64>, s: Vec<C>, sp: Vec<C>, diagnostics: JostDiagnostics) -> Self {
        let e = eps.value();
        let sg = side.sign();
        let mut y = Vec::with_capacity(grid.len());
        let mut yp = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let ex = (-e * (sg * grid[i])).exp();
            let f = C::new(1.0, 0.0) + s[i];
            y.push(ex * f);
            yp.push(ex * (sp[i] - e * sg * f));
        }
        Self { side, epsilon: eps, grid, y, y_prime: yp, s, s_prime: sp, diagnostics }
    }

    /// `max_i |s'' ∓ 2εs' − V(1+s)| / max_i |1+s|` with `s''` from a 7-point
    /// stencil on `s'`. This is the `y`-residual with the exponential factor
    /// removed, meaningful on arbitrarily long tail grids.
    pub fn scaled_residual(&self, spec: &PotentialSpec) -> f64 {
        let n = self.grid.len();
        if n < 7 {
            return 0.0;
        }
        let spp = fd::derivative(&self.grid, &self.s_prime, 1, 7);
        let e2 = self.epsilon.value() * (2.0 * self.side.sign());
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for i in 0..n {
            let f = C::new(1.0, 0.0) + self.s[i];
            let r = spp[i] - e2 * self.s_prime[i] - f * spec.evaluate(self.grid[i]);
            num = num.max(r.norm());
            den = den.max(f.norm());
        }
        num / den
    }

    /// Literal residual `max|y'' − (V+ε²)y| / max|y|` with a 7-point
    /// second-derivative stencil on `y` (needs a grid that resolves `e^{∓εx}`).
    pub fn y_residual(&self, spec: &PotentialSpec) -> f64 {
        let n = self.grid.len();
        if n < 7 {
            return 0.0;
        }
        let ypp = fd::derivative(&self.grid, &self.y, 2, 7);
        let e2 = self.epsilon.value() * self.epsilon.value();
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for i in 0..n {
            let r = ypp[i] - self.y[i] * (e2 + spec.evaluate(self.grid[i]));
            num = num.max(r.norm());
            den = den.max(self.y[i].norm());
        }
        num / den
    }

    /// `|s|` at the outermost tail sample.
    pub fn tail_magnitude(&self) -> f64 {
        match self.side {
            Side::Plus => self.s.last().map_or(0.0, |v| v.norm()),
            Side::Minus => self.s.first().map_or(0.0, |v| v.norm()),
        }
    }
}

/// First point `ξ ≥ a` where `Σ|c_k| ξ^{2−α_k}/((α_k−1)(α_k−2)) < target`.
pub fn contraction_start(terms: &[PowerTerm], a: f64, target: f64) -> f64 {
    let bound = |xi: f64| {
        terms
            .iter()
            .map(|t| t.coeff.abs() * xi.powf(2.0 - t.alpha) / ((t.alpha - 1.0) * (t.alpha - 2.0)))
            .sum::<f64>()
    };
    let mut xi = a;
    while bound(xi) >= target {
        xi *= 1.05;
    }
    xi
}

/// Far-field asymptotic series of `s` for the tail `Σ c_k ξ^{−α_k}`.
#[derive(Debug, Clone)]
pub struct FarField {
    terms: Vec<PowerTerm>,
    gammas: Vec<f64>,
}

const FAR_SPAN: f64 = 40.0;
const FAR_MAX_TERMS: usize = 6000;

impl FarField {
    /// Build the exponent set `{α_k − 1} + ℕ + Σ ℕα_k` up to `γ_min + 40`.
    pub fn new(terms: &[PowerTerm]) -> Result<Self> {
        let terms: Vec<PowerTerm> = terms.iter().copied().filter(|t| t.coeff != 0.0).collect();
        let mut gammas: Vec<f64> = terms.iter().map(|t| t.alpha - 1.0).collect();
        if gammas.is_empty() {
            return Ok(Self { terms, gammas });
        }
        let gmin = gammas.iter().copied().fold(f64::INFINITY, f64::min);
        let gmax = gmin + FAR_SPAN;
        let mut frontier = gammas.clone();
        while let Some(g) = frontier.pop() {
            let mut cands = alloc::vec![g + 1.0];
            cands.extend(terms.iter().map(|t| g + t.alpha));
            for c in cands {
                if c <= gmax + 1e-9 && !gammas.iter().any(|&h| (h - c).abs() < 1e-9) {
                    gammas.push(c);
                    frontier.push(c);
                    if gammas.len() > FAR_MAX_TERMS {
                        return Err(invalid!("far-field exponent set too large for these tail exponents"));
                    }
                }
            }
        }
        gammas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { terms, gammas })
    }

    /// `(s(ξ), s'(ξ))` from the asymptotic series; fails if the series has not
    /// converged to double precision (ξ too small for this ε).
    pub fn eval(&self, eps: C, xi: f64) -> Result<(C, C)> {
        if self.gammas.is_empty() {
            return Ok((C::new(0.0, 0.0), C::new(0.0, 0.0)));
        }
        let n = self.gammas.len();
        let mut beta: Vec<C> = Vec::with_capacity(n);
        let find = |g: f64, upto: usize| -> Option<usize> {
            let sl = &self.gammas[..upto];
            let idx = sl.partition_point(|&h| h < g - 1e-9);
            (idx < upto && (sl[idx] - g).abs() < 1e-9).then_some(idx)
        };
        let mut s = C::new(0.0, 0.0);
        let mut sp = C::new(0.0, 0.0);
        let mut tail_max: f64 = 0.0;
        let cut = self.gammas[n - 1] - 4.0;
        for (idx, &g) in self.gammas.iter().enumerate() {
            let mut num = C::new(0.0, 0.0);
            for t in &self.terms {
                let w = t.coeff * xi.powf(1.0 - t.alpha);
                if (t.alpha - (g + 1.0)).abs() < 1e-9 {
                    num += w;
                }
                if let Some(j) = find(g + 1.0 - t.alpha, idx) {
                    num += beta[j] * w;
                }
            }
            if let Some(j) = find(g - 1.0, idx) {
                num -= beta[j] * ((g - 1.0) * g / xi);
            }
            let b = num / (eps * (2.0 * g));
            beta.push(b);
            s += b;
            sp -= b * (g / xi);
            if g > cut {
                tail_max = tail_max.max(b.norm());
            }
        }
        if !(tail_max <= 1e-17 * (1.0 + s.norm())) || !s.norm().is_finite() {
            return Err(Error::OutOfRange(format!(
                "far-field series not converged at ξ = {xi}, |ε| = {} (last terms {tail_max:e})",
                eps.norm()
            )));
        }
        Ok((s, sp))
    }
}

fn tail_potential(terms: &[PowerTerm], xi: f64) -> f64 {
    terms.iter().map(|t| t.coeff * xi.powf(-t.alpha)).sum()
}

/// Solve for `s±` on one tail by Picard iteration of `s = T₁ + L s`.
///
/// `grid` lists physical points the caller wants (points outside the tail
/// region are ignored); the returned solution lives on the union of those
/// points with the internal geometric grid and a far-field continuation to
/// `|s| < tol_tail`.
pub fn solve_s(spec: &PotentialSpec, eps: Frequency, side: Side, grid: &[f64], cfg: &JostConfig) -> Result<JostSolution> {
    let e = eps.value();
    let terms = spec.tail_terms(side);
    let a = spec.tail_start(side);
    let xi_start = contraction_start(terms, a, cfg.contraction_target);
    let x_inf = (cfg.far_field_scale / e.norm()).max(xi_start);
    let far = FarField::new(terms)?;
    let sg = side.sign();

    // Reflected grid: geometric on [ξ_start, X∞] plus requested points.
    let mut xi: Vec<f64> = Vec::new();
    let mut v = xi_start;
    while v < x_inf {
        xi.push(v);
        v *= cfg.grid_ratio;
    }
    xi.push(x_inf);
    let mut extra_beyond: Vec<f64> = Vec::new();
    for &x in grid {
        let r = sg * x;
        if r >= xi_start && r <= x_inf {
            xi.push(r);
        } else if r > x_inf {
            extra_beyond.push(r);
        }
    }
    sort_dedup(&mut xi);
    let n = xi.len();
    let vv: Vec<f64> = xi.iter().map(|&r| tail_potential(terms, r)).collect();
    let (s_end, g_end) = far.eval(e, x_inf)?;

    let mut s = alloc::vec![C::new(0.0, 0.0); n];
    let mut g = alloc::vec![C::new(0.0, 0.0); n];
    s[n - 1] = s_end;
    g[n - 1] = g_end;
    let mut iterations = 0;
    let mut last_increment = 0.0;
    if n > 1 && !terms.is_empty() {
        let kern = ExpPanels::new(&xi, e * 2.0);
        let plain = ExpPanels::new(&xi, C::new(0.0, 0.0));
        let mut w = alloc::vec![C::new(0.0, 0.0); n];
        let mut prev_inc = f64::INFINITY;
        let mut growth = 0;
        loop {
            iterations += 1;
            for i in 0..n {
                w[i] = (C::new(1.0, 0.0) + s[i]) * vv[i];
            }
            for i in (0..n - 1).rev() {
                g[i] = kern.decay[i] * g[i + 1] - kern.left_integral(i, &w);
            }
            let mut inc: f64 = 0.0;
            let mut smax: f64 = 0.0;
            let mut snew = s[n - 1];
            for i in (0..n - 1).rev() {
                snew -= plain.left_integral(i, &g);
                inc = inc.max((snew - s[i]).norm());
                smax = smax.max(snew.norm());
                s[i] = snew;
            }
            last_increment = inc;
            if inc <= cfg.tol_fixed_point * smax.max(1.0) {
                break;
            }
            if inc > prev_inc {
                growth += 1;
            } else {
                growth = 0;
            }
            if growth >= 4 || !inc.is_finite() || iterations >= cfg.max_iterations {
                return Err(Error::NonContraction(format!(
                    "Picard increment {inc:e} after {iterations} iterations (ε = {e}); enlarge X∞ or the contraction start"
                )));
            }
            prev_inc = inc;
        }
    }

    // Far-field continuation: requested points and a geometric run to |s| < tol_tail.
    let mut far_pts = extra_beyond;
    let mut r = x_inf * cfg.grid_ratio;
    let mut count = 0;
    if !far.gammas.is_empty() && s_end.norm() >= cfg.tol_tail {
        loop {
            far_pts.push(r);
            count += 1;
            let (sv, _) = far.eval(e, r)?;
            if sv.norm() < cfg.tol_tail || count > 20_000 {
                break;
            }
            r *= cfg.grid_ratio;
        }
    }
    sort_dedup(&mut far_pts);
    for &rr in &far_pts {
        if rr <= x_inf {
            continue;
        }
        let (sv, gv) = far.eval(e, rr)?;
        xi.push(rr);
        s.push(sv);
        g.push(gv);
    }

    let mut diagnostics = JostDiagnostics { iterations, last_increment, x_start: xi_start, x_inf, anchor_discrepancy: None };
    diagnostics.anchor_discrepancy = anchor_check(spec, eps, side, &xi, &s, cfg);

    // Map to physical coordinates: x = ±ξ, s'(x) = ±s'_ξ.
    let (grid_x, s_x, sp_x) = match side {
        Side::Plus => (xi, s, g),
        Side::Minus => {
            let gx: Vec<f64> = xi.iter().rev().map(|&r| -r).collect();
            let sx: Vec<C> = s.into_iter().rev().collect();
            let spx: Vec<C> = g.into_iter().rev().map(|v| -v).collect();
            (gx, sx, spx)
        }
    };
    Ok(JostSolution::assemble(side, eps, grid_x, s_x, sp_x, diagnostics))
}

/// Compare the small-|ε| solution with the rescaled zero-energy anchor
/// `Φ₁(ξ/λ)`, `λ = v^{1/(m−2)}`, through the ratio `(1+s)/Φ₁` at two points.
fn anchor_check(spec: &PotentialSpec, eps: Frequency, side: Side, xi: &[f64], s: &[C], cfg: &JostConfig) -> Option<f64> {
    let switch = cfg.eps_switch.unwrap_or(1e-3 / spec.x_plus());
    let terms = spec.tail_terms(side);
    if eps.value().norm() >= switch || terms.len() != 1 || terms[0].coeff <= 0.0 || (terms[0].alpha - spec.m() as f64).abs() > 0.0 {
        return None;
    }
    let pair = ZeroEnergyPair::new(spec.m()).ok()?;
    let lambda = terms[0].coeff.powf(1.0 / (spec.m() as f64 - 2.0));
    let ia = 0;
    let target = 2.0 * xi[0];
    let ib = xi.iter().position(|&r| r >= target)?;
    let ratio = |i: usize| -> Option<C> {
        let p = pair.sample(xi[i] / lambda).ok()?.phi1;
        Some((C::new(1.0, 0.0) + s[i]) / p)
    };
    let ra = ratio(ia)?;
    let rb = ratio(ib)?;
    Some((ra / rb - C::new(1.0, 0.0)).norm())
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
}

/// Continue a tail solution to every point of `full_grid` (increasing):
/// points inside the solved tail are copied (Hermite-interpolated if they are
/// not grid nodes), points beyond it use the far-field series, and points
/// toward the other side are reached by integrating `f'' = ±2εf' + V f`.
pub fn extend_to_line(j: &JostSolution, spec: &PotentialSpec, full_grid: &[f64], cfg: &JostConfig) -> Result<JostSolution> {
    if full_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid!("full grid must be strictly increasing"));
    }
    let e = j.epsilon.value();
    let side = j.side;
    let n = full_grid.len();
    let mut s = alloc::vec![C::new(0.0, 0.0); n];
    let mut sp = alloc::vec![C::new(0.0, 0.0); n];
    let lo = j.grid[0];
    let hi = j.grid[j.grid.len() - 1];
    let far = FarField::new(spec.tail_terms(side))?;
    // Boundary of the solved region facing the rest of the line.
    let (edge_idx, inward): (usize, Vec<usize>) = match side {
        Side::Plus => (0, (0..n).filter(|&i| full_grid[i] < lo).rev().collect()),
        Side::Minus => (j.grid.len() - 1, (0..n).filter(|&i| full_grid[i] > hi).collect()),
    };
    for i in 0..n {
        let x = full_grid[i];
        if x >= lo && x <= hi {
            let (a, b) = hermite_lookup(&j.grid, &j.s, &j.s_prime, x);
            s[i] = a;
            sp[i] = b;
        } else if (side == Side::Plus && x > hi) || (side == Side::Minus && x < lo) {
            let (a, b) = far.eval(e, x.abs())?;
            s[i] = a;
            sp[i] = if side == Side::Plus { b } else { -b };
        }
    }
    if !inward.is_empty() {
        let x0 = j.grid[edge_idx];
        let y0 = [C::new(1.0, 0.0) + j.s[edge_idx], j.s_prime[edge_idx]];
        let targets: Vec<f64> = inward.iter().map(|&i| full_grid[i]).collect();
        let e2 = e * (2.0 * side.sign());
        let sol = ode::integrate(|x, y| [y[1], e2 * y[1] + y[0] * spec.evaluate(x)], x0, y0, &targets, cfg.ode)?;
        for (k, &i) in inward.iter().enumerate() {
            s[i] = sol[k][0] - C::new(1.0, 0.0);
            sp[i] = sol[k][1];
        }
    }
    Ok(JostSolution::assemble(side, j.epsilon, full_grid.to_vec(), s, sp, j.diagnostics))
}

fn hermite_lookup(grid: &[f64], s: &[C], sp: &[C], x: f64) -> (C, C) {
    let k = grid.partition_point(|&g| g < x);
    if k < grid.len() && (grid[k] - x).abs() <= 1e-12 * x.abs().max(1.0) {
        return (s[k], sp[k]);
    }
    if k > 0 && (grid[k - 1] - x).abs() <= 1e-12 * x.abs().max(1.0) {
        return (s[k - 1], sp[k - 1]);
    }
    let i = k.saturating_sub(1).min(grid.len() - 2);
    let h = grid[i + 1] - grid[i];
    let t = (x - grid[i]) / h;
    let (h00, h10, h01, h11) = (
        2.0 * t * t * t - 3.0 * t * t + 1.0,
        t * t * t - 2.0 * t * t + t,
        -2.0 * t * t * t + 3.0 * t * t,
        t * t * t - t * t,
    );
    let (d00, d10, d01, d11) = (6.0 * t * t - 6.0 * t, 3.0 * t * t - 4.0 * t + 1.0, -6.0 * t * t + 6.0 * t, 3.0 * t * t - 2.0 * t);
    let v = s[i] * h00 + sp[i] * (h10 * h) + s[i + 1] * h01 + sp[i + 1] * (h11 * h);
    let d = s[i] * (d00 / h) + sp[i] * d10 + s[i + 1] * (d01 / h) + sp[i + 1] * d11;
    (v, d)
}

/// Wronskian value with its x-profile.
#[derive(Debug, Clone)]
pub struct Wronskian {
    /// Grid-median of the profile (componentwise).
    pub value: C,
    /// `y₊y₋' − y₊'y₋` at each grid point.
    pub profile: Vec<C>,
}

impl Wronskian {
    /// Relative standard deviation of the profile about its mean.
    pub fn relative_spread(&self) -> f64 {
        let n = self.profile.len() as f64;
        let mean = self.profile.iter().fold(C::new(0.0, 0.0), |a, &b| a + b) / n;
        let var = self.profile.iter().map(|p| (p - mean).norm_sqr()).sum::<f64>() / n;
        var.sqrt() / mean.norm().max(f64::MIN_POSITIVE)
    }
}

/// `W = y₊y₋' − y₊'y₋`, evaluated as `2εf₊f₋ + f₊f₋' − f₊'f₋`.
pub fn wronskian(y_plus: &JostSolution, y_minus: &JostSolution) -> Result<Wronskian> {
    if y_plus.side != Side::Plus || y_minus.side != Side::Minus {
        return Err(invalid!("wronskian needs (plus, minus) solutions"));
    }
    if y_plus.grid != y_minus.grid {
        return Err(invalid!("wronskian grids differ"));
    }
    if y_plus.epsilon != y_minus.epsilon {
        return Err(invalid!("wronskian frequencies differ"));
    }
    let e = y_plus.epsilon.value();
    let profile: Vec<C> = (0..y_plus.grid.len())
        .map(|i| {
            let fp = C::new(1.0, 0.0) + y_plus.s[i];
            let fm = C::new(1.0, 0.0) + y_minus.s[i];
            e * 2.0 * fp * fm + fp * y_minus.s_prime[i] - y_plus.s_prime[i] * fm
        })
        .collect();
    let mut re: Vec<f64> = profile.iter().map(|p| p.re).collect();
    let mut im: Vec<f64> = profile.iter().map(|p| p.im).collect();
    Ok(Wronskian { value: C::new(median(&mut re), median(&mut im)), profile })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Both Jost solutions continued to a common grid.
#[derive(Debug, Clone)]
pub struct JostPair {
    /// `y₊` on the common grid.
    pub plus: JostSolution,
    /// `y₋` on the common grid.
    pub minus: JostSolution,
}

impl JostPair {
    /// Solve both tails and continue them to `grid` (strictly increasing).
    pub fn solve(spec: &PotentialSpec, eps: Frequency, grid: &[f64], cfg: &JostConfig) -> Result<Self> {
        let p = solve_s(spec, eps, Side::Plus, grid, cfg)?;
        let m = solve_s(spec, eps, Side::Minus, grid, cfg)?;
        Ok(Self { plus: extend_to_line(&p, spec, grid, cfg)?, minus: extend_to_line(&m, spec, grid, cfg)? })
    }

    /// Wronskian on the common grid.
    pub fn wronskian(&self) -> Result<Wronskian> {
        wronskian(&self.plus, &self.minus)
    }
}

/// `W(ε)` evaluated at the single matching point `x = 0`.
pub fn wronskian_at(spec: &PotentialSpec, eps: Frequency, cfg: &JostConfig) -> Result<C> {
    Ok(JostPair::solve(spec, eps, &[0.0], cfg)?.wronskian()?.value)
}

/// Outcome of the spectral-assumption scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralStatus {
    /// No bound states, no zero-energy resonance.
    Ok {
        /// Extrapolated `W(0)`.
        w0: f64,
    },
    /// `W(ε₀) = 0`: eigenvalue `−ε₀²`.
    BoundState {
        /// Located zero.
        eps0: f64,
    },
    /// `|W(0)|` below threshold.
    Resonance {
        /// Extrapolated `W(0)`.
        w0: f64,
    },
}

/// Settings for [`check_spectral_assumptions`].
#[derive(Debug, Clone, Copy)]
pub struct SpectralOptions {
    /// Number of log-spaced scan points on `[eps_lo, ε_max]`.
    pub scan_points: usize,
    /// Lowest scan frequency.
    pub eps_lo: f64,
    /// Smallest Richardson step for `W(0)`.
    pub richardson_eps: f64,
    /// Relative resonance threshold on `|W(0)|/(1 + |W(ε_max)|)`.
    pub resonance_threshold: f64,
    /// Jost settings.
    pub jost: JostConfig,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { scan_points: 60, eps_lo: 1e-3, richardson_eps: 1e-4, resonance_threshold: 1e-6, jost: JostConfig::default() }
    }
}

/// Scan real `W(ε)` for zeros (bound states) and extrapolate `W(0)`
/// (zero-energy resonance). Numerical failures are reported as errors.
pub fn check_spectral_assumptions(spec: &PotentialSpec, opts: &SpectralOptions) -> Result<SpectralStatus> {
    let cfg = &opts.jost;
    let w = |e: f64| -> Result<f64> { Ok(wronskian_at(spec, Frequency::real(e)?, cfg)?.re) };
    let eps_max = (-spec.min_value()).max(0.0).sqrt() + 1.0;
    let h = opts.richardson_eps;
    let (w1, w2, w4) = (w(h)?, w(2.0 * h)?, w(4.0 * h)?);
    let w0 = (8.0 * w1 - 6.0 * w2 + w4) / 3.0;
    let mut pts: Vec<f64> = alloc::vec![h, 2.0 * h, 4.0 * h];
    let n = opts.scan_points.max(2);
    let ratio = (eps_max / opts.eps_lo).ln() / (n - 1) as f64;
    for i in 0..n {
        pts.push(opts.eps_lo * (ratio * i as f64).exp());
    }
    sort_dedup(&mut pts);
    let mut vals = Vec::with_capacity(pts.len());
    for &p in &pts {
        vals.push(if p == h { w1 } else if p == 2.0 * h { w2 } else if p == 4.0 * h { w4 } else { w(p)? });
    }
    // Largest zero first (ground state has the largest ε₀).
    for k in (0..pts.len() - 1).rev() {
        if vals[k] == 0.0 {
            return Ok(SpectralStatus::BoundState { eps0: pts[k] });
        }
        if vals[k].signum() != vals[k + 1].signum() {
            let (mut a, mut b) = (pts[k], pts[k + 1]);
            let mut fa = vals[k];
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                let fm = w(mid)?;
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
                if b - a < 1e-12 * b {
                    break;
                }
            }
            return Ok(SpectralStatus::BoundState { eps0: 0.5 * (a + b) });
        }
    }
    let wmax = vals[vals.len() - 1].abs();
    if w0.abs() < opts.resonance_threshold * (1.0 + wmax) {
        return Ok(SpectralStatus::Resonance { w0 });
    }
    if w0.signum() != vals[0].signum() {
        // Zero between 0 and the first scan point.
        return Ok(SpectralStatus::BoundState { eps0: 0.5 * pts[0] });
    }
    Ok(SpectralStatus::Ok { w0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_validation() {
        assert!(Frequency::new(C::new(-0.1, 1.0)).is_err());
        assert!(Frequency::new(C::new(0.0, 0.0)).is_err());
        assert!(Frequency::new(C::new(0.0, 2.0)).is_ok());
    }

    #[test]
    fn far_field_matches_picard_for_pure_power() {
        let terms = [PowerTerm { alpha: 3.0, coeff: 1.0 }];
        let ff = FarField::new(&terms).unwrap();
        assert_eq!(ff.gammas.len(), 41);
        let e = C::new(0.5, 0.3);
        let (s, sp) = ff.eval(e, 100.0).unwrap();
        // leading term v ξ^{1−m}/(2ε(m−1))
        let lead = C::new(1.0, 0.0) / (e * 4.0 * 1e4);
        assert!((s - lead).norm() < 0.02 * lead.norm());
        assert!((sp + lead * 0.02).norm() < 0.03 * (lead * 0.02).norm());
    }
}
