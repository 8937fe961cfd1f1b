//! Dual-space machinery for the tail correction `s(x;ε)` of a pure tail
//! `V = v₁ x^{−m}` (`x ≥ x₊`).
//!
//! Writing `s(x) = ∫_0^∞ e^{−qx} H(q)/(q(q+2ε)) dq` turns the tail equation
//! into `H = v₁q^{m−1}/(m−1)! + v₁𝒫^m[H/(q(q+2ε))]` with `𝒫F = ∫_0^q F`.
//! In `τ = q/ε` the convergent expansion is
//! `H(q) = Σ_{j ≥ m−1} ε^{j_m} F_j(q/ε)`, `j_m = (m−2)(j−m+1) + m − 1`,
//! with `F_{m−1} = v₁τ^{m−1}/(m−1)!` and `F_{j+1} = v₁𝒫^m[F_j/(τ(τ+2))]`.
//!
//! This module provides:
//!
//! - the recurrence on rays `τ = r e^{iθ}` by repeated cumulative quadrature,
//!   with the factorial growth bound check;
//! - an exact rational small-τ oracle ([`LogPolySeries`]);
//! - [`reconstruct_s`], the Laplace integral assembled from the `F_j`;
//! - [`extract_h_coefficients`], least-squares fits of the small-ε
//!   logarithmic coefficients;
//! - the logarithmic Laplace integrals `∫_3^∞ e^{−aτ}τ^n ln^l τ dτ` and their
//!   leading small-`a` expansions.

use crate::error::invalid;
use crate::jost::{solve_s, Frequency, JostConfig};
use crate::numerics::gk::{self, GkOptions};
use crate::numerics::lsq::{self, LsqFit};
use crate::numerics::product::{cumulative, ExpPanels};
use crate::potential::{PotentialSpec, Side};
use crate::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

#[allow(unused_imports)]
use crate::prelude::*;

type C = Complex64;

/// Exponent `j_m = (m−2)(j−m+1) + m − 1` of `F_j`.
pub fn j_m(m: u32, j: u32) -> i64 {
    (m as i64 - 2) * (j as i64 - m as i64 + 1) + m as i64 - 1
}

fn ln_factorial(n: i64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Growth bound `|τ|^{j_m}/((j_m−m+1)!)^{m/(m−2)}` for `|F_j(τ)|`, in logarithmic form.
pub fn ln_growth_bound(m: u32, j: u32, r: f64) -> f64 {
    let jm = j_m(m, j);
    jm as f64 * r.ln() - ln_factorial(jm - m as i64 + 1) * m as f64 / (m as f64 - 2.0)
}

// ---------------------------------------------------------------------------
// Exact small-τ oracle

/// One term `coeff · τ^power · (ln τ)^log_power`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogPolyTerm {
    /// Rational power of `τ`.
    pub power: Ratio<i64>,
    /// Power of `ln τ`.
    pub log_power: u32,
    /// Exact coefficient.
    pub coeff: BigRational,
}

/// Finite sum of [`LogPolyTerm`]s valid for `|τ| < valid_radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogPolySeries {
    /// Terms, by increasing power.
    pub terms: Vec<LogPolyTerm>,
    /// Radius of the disc where the truncated series represents the function.
    pub valid_radius: f64,
}

impl LogPolySeries {
    /// Exact Taylor expansion of `F_j` at `τ = 0` (integer `v₁`) keeping
    /// `n_terms` powers. Near zero the `F_j` are analytic, so no log terms
    /// appear; the expansion of `1/(τ+2)` limits validity to `|τ| < 2`.
    pub fn small_tau(m: u32, v1: i64, j: u32, n_terms: usize) -> Result<Self> {
        if m < 3 || j < m - 1 || n_terms == 0 {
            return Err(invalid!("small-τ series needs m ≥ 3, j ≥ m−1, n_terms ≥ 1"));
        }
        let big = |v: i64| BigRational::from_integer(BigInt::from(v));
        // dense coefficients c[k] of τ^k
        let mut c: Vec<BigRational> = vec![BigRational::zero(); m as usize];
        let mut fact = BigRational::one();
        for k in 1..m as i64 {
            fact *= big(k);
        }
        c[m as usize - 1] = big(v1) / fact;
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        for _ in (m - 1)..j {
            let lo = c.iter().position(|v| !v.is_zero()).unwrap_or(c.len());
            let hi = (lo + n_terms).min(c.len());
            // F/τ times (1/2)Σ(−τ/2)^k, truncated to n_terms powers
            let mut g: Vec<BigRational> = vec![BigRational::zero(); lo.saturating_sub(1) + n_terms];
            for (a, ca) in c.iter().enumerate().take(hi).skip(lo) {
                let mut w = BigRational::new(BigInt::from(1), BigInt::from(2));
                for k in 0..n_terms {
                    let p = a - 1 + k;
                    if p >= g.len() {
                        break;
                    }
                    g[p] += ca * &w;
                    w *= &half;
                }
            }
            // v₁ 𝒫^m: τ^k → τ^{k+m} k!/(k+m)!
            let mut next = vec![BigRational::zero(); g.len() + m as usize];
            for (k, gk) in g.iter().enumerate() {
                if gk.is_zero() {
                    continue;
                }
                let mut den = BigInt::one();
                for i in 1..=m as i64 {
                    den *= BigInt::from(k as i64 + i);
                }
                next[k + m as usize] = gk * big(v1) / BigRational::from_integer(den);
            }
            c = next;
        }
        let lo = c.iter().position(|v| !v.is_zero()).unwrap_or(0);
        let terms = c
            .into_iter()
            .enumerate()
            .skip(lo)
            .take(n_terms)
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, coeff)| LogPolyTerm { power: Ratio::from_integer(k as i64), log_power: 0, coeff })
            .collect();
        Ok(Self { terms, valid_radius: 2.0 })
    }

    /// Evaluate at `τ` (principal branches).
    pub fn eval(&self, tau: C) -> C {
        let lt = tau.ln();
        self.terms.iter().fold(C::new(0.0, 0.0), |acc, t| {
            let p = *t.power.numer() as f64 / *t.power.denom() as f64;
            let mut v = if p == 0.0 { C::new(1.0, 0.0) } else { tau.powf(p) };
            for _ in 0..t.log_power {
                v *= lt;
            }
            acc + v * t.coeff.to_f64().unwrap_or(f64::NAN)
        })
    }
}

// ---------------------------------------------------------------------------
// Numerical recurrence on rays

/// Samples of a function of `τ` along the ray `τ = r e^{iθ}`, `r ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RayFunction {
    /// Ray angle `θ`.
    pub theta: f64,
    /// Increasing radii, starting at 0.
    pub r: Vec<f64>,
    /// Values at `r e^{iθ}`.
    pub values: Vec<C>,
}

impl RayFunction {
    /// Complex sample point `τ_i`.
    pub fn tau(&self, i: usize) -> C {
        C::from_polar(self.r[i], self.theta)
    }
}

/// Radial grid on `[0, r_max]`: `0`, then geometric from `r_min` with
/// relative step `rel_step`, plus the given breakpoints. Geometric spacing
/// keeps the relative accuracy of the repeated quadratures uniform down to
/// `τ → 0`, where `F_j ~ τ^{j_m}`.
pub fn ray_grid(r_max: f64, rel_step: f64, r_min: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0];
    let mut x = r_min.min(r_max);
    r.push(x);
    while x < r_max {
        x = (x * (1.0 + rel_step)).min(r_max);
        r.push(x);
    }
    for &b in breakpoints {
        if b > r_min && b < r_max {
            r.push(b);
        }
    }
    r.sort_by(|a, b| a.partial_cmp(b).unwrap());
    r.dedup_by(|a, b| (*a - *b).abs() < 1e-3 * rel_step * *b);
    r
}

fn check_ray(theta: f64, r_max: f64) -> Result<()> {
    let two = C::new(2.0, 0.0);
    let rs = (-2.0 * theta.cos()).clamp(0.0, r_max);
    if (C::from_polar(rs, theta) + two).norm() < 0.5 {
        return Err(invalid!("ray at arg {theta} passes within 0.5 of the singular point τ = −2"));
    }
    Ok(())
}

/// `F_{m−1}(τ) = v₁τ^{m−1}/(m−1)!` on a ray.
pub fn f_initial(m: u32, v1: f64, theta: f64, r: &[f64]) -> RayFunction {
    let fact = libm::tgamma(m as f64);
    let values = r.iter().map(|&ri| C::from_polar(ri, theta).powu(m - 1) * (v1 / fact)).collect();
    RayFunction { theta, r: r.to_vec(), values }
}

/// One recurrence step `F_{j+1} = v₁𝒫^m[F_j/(τ(τ+2))]` along the ray of `fj`,
/// by `m` cumulative (local cubic) quadratures from `τ = 0`.
pub fn recurrence_step(fj: &RayFunction, m: u32, v1: f64) -> Result<RayFunction> {
    if fj.r.len() < 4 || fj.r[0] != 0.0 {
        return Err(invalid!("ray samples must start at τ = 0 and have ≥ 4 points"));
    }
    check_ray(fj.theta, *fj.r.last().unwrap())?;
    let rot = C::from_polar(1.0, fj.theta);
    let mut g: Vec<C> = (0..fj.r.len())
        .map(|i| {
            let t = fj.tau(i);
            if fj.r[i] == 0.0 {
                C::new(0.0, 0.0)
            } else {
                fj.values[i] / (t * (t + 2.0))
            }
        })
        .collect();
    for _ in 0..m {
        g = cumulative(&fj.r, &g).into_iter().map(|v| v * rot).collect();
    }
    for v in g.iter_mut() {
        *v *= v1;
    }
    Ok(RayFunction { theta: fj.theta, r: fj.r.clone(), values: g })
}

/// `F_{m−1}, …, F_{j_max}` on one ray.
pub fn f_sequence(m: u32, v1: f64, theta: f64, r: &[f64], j_max: u32) -> Result<Vec<RayFunction>> {
    if m < 3 {
        return Err(invalid!("m ≥ 3 required"));
    }
    let mut out = vec![f_initial(m, v1, theta, r)];
    for _ in m..=j_max {
        let next = recurrence_step(out.last().unwrap(), m, v1)?;
        out.push(next);
    }
    Ok(out)
}

/// `max |F_j(τ)| / bound(τ)` over samples with `r ≥ r_min` (bound from
/// [`ln_growth_bound`], scaled by `|v₁|^{j−m+2}`).
pub fn bound_ratio(fj: &RayFunction, m: u32, j: u32, v1: f64, r_min: f64) -> f64 {
    let scale = (j as f64 - m as f64 + 2.0) * v1.abs().ln();
    fj.r
        .iter()
        .zip(&fj.values)
        .filter(|(&r, _)| r >= r_min && r > 0.0)
        .map(|(&r, v)| (v.norm().ln() - ln_growth_bound(m, j, r) - scale).exp())
        .fold(0.0, f64::max)
}

/// Residual of the differential form `τ(τ+2)F_{j+1}^{(m)} = v₁F_j` by
/// finite differences at interior samples with `r ∈ [r_lo, r_hi]`; relative
/// to `max |F_j|` there.
pub fn differential_residual(fj: &RayFunction, fj1: &RayFunction, m: u32, v1: f64, r_lo: f64, r_hi: f64) -> f64 {
    let width = (m as usize + 5).min(fj1.r.len());
    let d = crate::numerics::fd::derivative(&fj1.r, &fj1.values, m as usize, width);
    let rot_m = C::from_polar(1.0, -(m as f64) * fj.theta);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let n = fj.r.len();
    for i in width..n.saturating_sub(width) {
        if fj.r[i] < r_lo || fj.r[i] > r_hi {
            continue;
        }
        let t = fj.tau(i);
        let lhs = t * (t + 2.0) * d[i] * rot_m;
        worst = worst.max((lhs - fj.values[i] * v1).norm());
        scale = scale.max(fj.values[i].norm() * v1.abs());
    }
    worst / scale.max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------------------
// Reconstruction of s from the Laplace representation

/// Settings for [`reconstruct_s`].
#[derive(Debug, Clone, Copy)]
pub struct SeriesOptions {
    /// Truncation tolerance for the `F_j` sum.
    pub tol: f64,
    /// Upper limit of the q-integral is `q_cut/x` (`e^{−q_cut}` negligible).
    pub q_cut: f64,
    /// Relative step of the geometric radial grid.
    pub rel_step: f64,
    /// First nonzero radius.
    pub r_min: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self { tol: 1e-10, q_cut: 48.0, rel_step: 0.004, r_min: 1e-6 }
    }
}

/// Output of [`reconstruct_s`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    /// `s(x;ε)`.
    pub s: C,
    /// `s'(x;ε)`.
    pub s_prime: C,
    /// Highest `j` kept.
    pub j_max: u32,
    /// Bound on the dropped terms.
    pub tail_bound: f64,
}

/// Truncation index: smallest `J ≥ m` with Σ_{j>J} (bound on the
/// contribution of `ε^{j_m}F_j` to `s`) `< tol`.
pub fn truncation_index(m: u32, v1: f64, x: f64, tol: f64) -> (u32, f64) {
    // ∫ e^{−qx} q^{j_m}/(q·q) dq · growth = Γ(j_m−1)/x^{j_m−1} / ((j_m−m+1)!)^{m/(m−2)}
    let ln_term = |j: u32| {
        let jm = j_m(m, j);
        libm::lgamma(jm as f64 - 1.0) - (jm as f64 - 1.0) * x.ln() - ln_factorial(jm - m as i64 + 1) * m as f64 / (m as f64 - 2.0)
            + (j as f64 - m as f64 + 2.0) * v1.abs().max(1e-300).ln()
    };
    let tail = |big_j: u32| {
        let mut s = 0.0;
        for j in big_j + 1..big_j + 200 {
            let t = ln_term(j).exp();
            s += t;
            if t < 1e-40 {
                break;
            }
        }
        s
    };
    let mut big_j = m;
    while tail(big_j) >= tol && big_j < m + 400 {
        big_j += 1;
    }
    (big_j, tail(big_j))
}

fn pure_tail_coefficient(spec: &PotentialSpec) -> Result<f64> {
    match spec.tail_terms(Side::Plus) {
        [t] if (t.alpha - spec.m() as f64).abs() < 1e-12 => Ok(t.coeff),
        _ => Err(invalid!("the Laplace representation needs a pure v₁x^{{−m}} tail on the right")),
    }
}

/// `s(x;ε)` from `∫_0^∞ e^{−qx} H(q)/(q(q+2ε)) dq` with `H` summed from the
/// `F_j` on the ray `arg τ = −arg ε` (so that `q` is real). The three ranges
/// `[0,3ε]`, `[3ε,1]`, `[1,∞)` share one radial grid containing both
/// breakpoints; the exponential is integrated exactly panel by panel.
pub fn reconstruct_s(spec: &PotentialSpec, eps: Frequency, x: f64, opts: &SeriesOptions) -> Result<SeriesValue> {
    let m = spec.m();
    let v1 = pure_tail_coefficient(spec)?;
    if x < spec.x_plus() {
        return Err(invalid!("x = {x} lies left of the exact tail (x₊ = {})", spec.x_plus()));
    }
    let e = eps.value();
    let ae = e.norm();
    if ae * x > 1.0 {
        return Err(Error::OutOfRange(format!("|ε|x = {} > 1", ae * x)));
    }
    if v1 == 0.0 {
        return Ok(SeriesValue { s: C::new(0.0, 0.0), s_prime: C::new(0.0, 0.0), j_max: m - 1, tail_bound: 0.0 });
    }
    let (big_j, tail_bound) = truncation_index(m, v1, x, opts.tol);
    let theta = -e.arg();
    let r_max = opts.q_cut / x / ae;
    let r = ray_grid(r_max, opts.rel_step, opts.r_min, &[3.0, 1.0 / ae]);
    let fs = f_sequence(m, v1, theta, &r, big_j)?;
    let ln_e = e.ln();
    let mut h = vec![C::new(0.0, 0.0); r.len()];
    for (k, fj) in fs.iter().enumerate() {
        let jm = j_m(m, m - 1 + k as u32) as f64;
        let w = (ln_e * jm).exp();
        for (hi, v) in h.iter_mut().zip(&fj.values) {
            *hi += w * v;
        }
    }
    let mut w0 = Vec::with_capacity(r.len());
    let mut w1 = Vec::with_capacity(r.len());
    for (i, &ri) in r.iter().enumerate() {
        let q = ae * ri;
        let val = if ri == 0.0 { C::new(0.0, 0.0) } else { h[i] / (q * (e * 2.0 + q)) * ae };
        w0.push(val);
        w1.push(-val * q);
    }
    let panels = ExpPanels::new(&r, C::new(ae * x, 0.0));
    let (mut s, mut sp) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
    for i in 0..r.len() - 1 {
        let f = (-ae * x * r[i]).exp();
        s += panels.left_integral(i, &w0) * f;
        sp += panels.left_integral(i, &w1) * f;
    }
    Ok(SeriesValue { s, s_prime: sp, j_max: big_j, tail_bound })
}

/// First Picard term `T₁(x) = ∫_x^∞∫_t^∞ e^{−2ε(u−t)} V(u) du dt` for the
/// pure tail (linear-in-`v₁` limit of `s`), by nested quadrature.
pub fn first_picard_term(spec: &PotentialSpec, eps: Frequency, x: f64) -> Result<C> {
    let m = spec.m() as i32;
    let v1 = pure_tail_coefficient(spec)?;
    let e = eps.value();
    // swap order: ∫_x^∞ V(u) ∫_x^u e^{−2ε(u−t)} dt du = ∫_x^∞ V(u) (1 − e^{−2ε(u−x)})/(2ε) du
    let opts = GkOptions { abs_tol: 1e-18, rel_tol: 1e-12, max_intervals: 4000 };
    let f = |u: f64| {
        let z = e * 2.0 * (u - x);
        let k = if z.norm() < 1e-6 { (u - x) * (C::new(1.0, 0.0) - z / 2.0) } else { (C::new(1.0, 0.0) - (-z).exp()) / (e * 2.0) };
        k * (v1 * u.powi(-m))
    };
    // u = x/w maps [x,∞) to (0,1]
    gk::integrate(|w: f64| if w <= 0.0 { C::new(0.0, 0.0) } else { f(x / w) * (x / (w * w)) }, 0.0, 1.0, opts)
}

// ---------------------------------------------------------------------------
// Small-ε coefficient fits

/// Where `s(x;ε)` samples come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    /// Picard solution of the Jost tail equation.
    Jost,
    /// Laplace reconstruction from the `F_j`.
    Series,
}

/// Fitted small-ε coefficients of `s(x;ε)`.
#[derive(Debug, Clone)]
pub struct HCoefficients {
    /// Coefficient of `ε^{m−2} ln ε`.
    pub h1: f64,
    /// Coefficient of `ε^{m−1} ln ε`.
    pub h2: f64,
    /// Coefficient of `ε^{2m−4} ln²ε` (fitted for `m = 3` only).
    pub h3: Option<f64>,
    /// Basis labels, in coefficient order.
    pub basis: Vec<&'static str>,
    /// Underlying least-squares fit.
    pub fit: LsqFit,
    /// `(ε, s)` samples.
    pub samples: Vec<(f64, f64)>,
}

impl HCoefficients {
    /// Evaluate the fitted model at `ε`.
    pub fn model(&self, m: u32, e: f64) -> f64 {
        basis_row(m, e).iter().zip(&self.fit.coef).map(|(a, b)| a * b).sum()
    }
}

/// Limits `h₁ → −(−2)^{m−2}/Γ(m)` and `h₂/x → (−2)^{m−1}/Γ(m)` as `x → ∞`.
pub fn h_limits(m: u32) -> (f64, f64) {
    let g = libm::tgamma(m as f64);
    (-(-2f64).powi(m as i32 - 2) / g, (-2f64).powi(m as i32 - 1) / g)
}

fn basis_row(m: u32, e: f64) -> Vec<f64> {
    let l = e.ln();
    let p = |k: u32| e.powi(k as i32);
    let mut row = vec![p(m - 2) * l, p(m - 1) * l];
    if m == 3 {
        row.push(p(2) * l * l);
    }
    // smooth spectators {1, ε, ε^{m−2}, ε^{m−1}} without duplicates
    let mut powers = vec![0u32, 1, m - 2, m - 1];
    powers.sort_unstable();
    powers.dedup();
    row.extend(powers.into_iter().map(p));
    row
}

fn basis_labels(m: u32) -> Vec<&'static str> {
    let mut v = vec!["eps^(m-2) ln eps", "eps^(m-1) ln eps"];
    if m == 3 {
        v.push("eps^(2m-4) ln^2 eps");
    }
    let mut powers = vec![0u32, 1, m - 2, m - 1];
    powers.sort_unstable();
    powers.dedup();
    for p in powers {
        v.push(match p {
            0 => "1",
            1 => "eps",
            2 => "eps^2",
            3 => "eps^3",
            _ => "eps^k",
        });
    }
    v
}

/// Largest admissible condition number of the (column-scaled) fit.
pub const MAX_FIT_CONDITION: f64 = 1e13;

/// Fit real `s(x;ε)`, `ε ∈ eps_grid ⊂ (0, 1/x)`, against
/// `{ε^{m−2}lnε, ε^{m−1}lnε, [ε^{2m−4}ln²ε if m=3], 1, ε, ε^{m−2}, ε^{m−1}}`.
pub fn extract_h_coefficients(
    spec: &PotentialSpec,
    x: f64,
    eps_grid: &[f64],
    source: SampleSource,
    jost: &JostConfig,
    series: &SeriesOptions,
) -> Result<HCoefficients> {
    let m = spec.m();
    pure_tail_coefficient(spec)?;
    if eps_grid.len() < 8 {
        return Err(invalid!("need at least 8 ε samples, got {}", eps_grid.len()));
    }
    if eps_grid.iter().any(|&e| !(e > 0.0 && e * x < 1.0)) {
        return Err(Error::OutOfRange(format!("ε samples must lie in (0, 1/x) = (0, {})", 1.0 / x)));
    }
    let mut samples = Vec::with_capacity(eps_grid.len());
    for &e in eps_grid {
        let f = Frequency::real(e)?;
        let s = match source {
            SampleSource::Jost => {
                let sol = solve_s(spec, f, Side::Plus, &[x], jost)?;
                let i = sol.grid.iter().position(|&g| (g - x).abs() < 1e-12).ok_or_else(|| invalid!("x not on grid"))?;
                sol.s[i].re
            }
            SampleSource::Series => reconstruct_s(spec, f, x, series)?.s.re,
        };
        samples.push((e, s));
    }
    let rows: Vec<Vec<f64>> = eps_grid.iter().map(|&e| basis_row(m, e)).collect();
    let b: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let fit = lsq::solve(&rows, &b)?;
    if !(fit.condition < MAX_FIT_CONDITION) {
        return Err(Error::Fit(format!("ill-conditioned fit (condition {:e}); widen the ε grid", fit.condition)));
    }
    Ok(HCoefficients {
        h1: fit.coef[0],
        h2: fit.coef[1],
        h3: if m == 3 { Some(fit.coef[2]) } else { None },
        basis: basis_labels(m),
        fit,
        samples,
    })
}

/// Default fit grid: 12 log-spaced ε with `εx ∈ [10^{−5}, 10^{−3}]`. The
/// expansion is in `ε` at fixed `x`, but its corrections are powers of `εx`,
/// so the fit window must keep `εx` small.
pub fn default_eps_grid(x: f64) -> Vec<f64> {
    log_grid(1e-5 / x, 1e-3 / x, 12)
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let k = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| lo * (k * i as f64).exp()).collect()
}

// ---------------------------------------------------------------------------
// Logarithmic Laplace integrals

/// `∫_3^∞ e^{−aτ} τ^n (ln τ)^l dτ` for integer `n ≥ −2`, `l ∈ {0,1,2}`,
/// `a ∈ (0, 1]`, by adaptive quadrature in `τ = e^v`.
pub fn nm0_integral(n: i32, l: u32, a: f64) -> Result<f64> {
    check_nm0(n, l, a)?;
    let v0 = 3f64.ln();
    let v1 = ((120.0 + 4.0 * (n.abs() as f64 + l as f64)) / a).ln().max(v0 + 1.0);
    let opts = GkOptions { abs_tol: 0.0, rel_tol: 1e-13, max_intervals: 4000 };
    let f = |v: f64| ((n as f64 + 1.0) * v - a * v.exp()).exp() * v.powi(l as i32);
    // split at the peak region for robustness
    let mut knots = vec![v0];
    let mut k = v0.ceil();
    while k < v1 {
        knots.push(k);
        k += 1.0;
    }
    knots.push(v1);
    let mut total = 0.0;
    for w in knots.windows(2) {
        total += gk::integrate(f, w[0], w[1], opts)?;
    }
    Ok(total)
}

fn check_nm0(n: i32, l: u32, a: f64) -> Result<()> {
    if n < -2 {
        return Err(invalid!("n = {n} < −2"));
    }
    if l > 2 {
        return Err(invalid!("l = {l} > 2"));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::OutOfRange(format!("εx = {a} not in (0, 1]")));
    }
    Ok(())
}

/// Leading small-`a` expansion `constant + a^{power} Σ_q c_q ln^q a` of
/// [`nm0_integral`].
#[derive(Debug, Clone, PartialEq)]
pub struct Nm0Expansion {
    /// `−n−1`.
    pub power: i32,
    /// `c_q`, `q = 0, 1, …`.
    pub coeffs: Vec<f64>,
    /// Additive constant (`−∫_0^3τ^n ln^lτ` for `n ≥ 0`, `∫_3^∞τ^{−2}ln^lτ` for `n = −2`).
    pub constant: f64,
}

impl Nm0Expansion {
    /// Evaluate at `a`.
    pub fn eval(&self, a: f64) -> f64 {
        let l = a.ln();
        let poly: f64 = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * l + c);
        self.constant + a.powi(self.power) * poly
    }
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Γ^{(k)}(n+1)` for `k ≤ 2` and integer `n ≥ 0`.
fn gamma_derivative_at_integer(n: u32, k: u32) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let g = libm::tgamma(n as f64 + 1.0);
    let psi = -EULER + (1..=n).map(|i| 1.0 / i as f64).sum::<f64>();
    let psi1 = core::f64::consts::PI.powi(2) / 6.0 - (1..=n).map(|i| 1.0 / (i * i) as f64).sum::<f64>();
    match k {
        0 => g,
        1 => g * psi,
        _ => g * (psi * psi + psi1),
    }
}

/// `K_k = ∫_0^1 (e^{−u}−1) ln^k u / u du + ∫_1^∞ e^{−u} ln^k u / u du`.
fn k_constant(k: u32) -> Result<f64> {
    let opts = GkOptions { abs_tol: 1e-16, rel_tol: 1e-14, max_intervals: 2000 };
    // u = e^{−w} on (0,1]
    let a = gk::integrate(|w: f64| ((-(-w).exp()).exp() - 1.0) * (-w).powi(k as i32), 0.0, 60.0, opts)?;
    let b = gk::integrate(|u: f64| (-u).exp() * u.ln().powi(k as i32) / u, 1.0, 60.0, opts)?;
    Ok(a + b)
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(a: &[f64], k: u32) -> Vec<f64> {
    (0..k).fold(vec![1.0], |acc, _| poly_mul(&acc, a))
}

fn poly_add_scaled(acc: &mut Vec<f64>, p: &[f64], s: f64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (i, v) in p.iter().enumerate() {
        acc[i] += s * v;
    }
}

/// Leading expansion coefficients from the Γ-integral representation.
///
/// - `n ≥ 0`: `∫_0^∞ e^{−aτ}τ^n ln^lτ = a^{−n−1} Σ_q C(l,q)(−1)^q Γ^{(l−q)}(n+1) ln^q a`,
///   minus the `[0,3]` piece (constant to `O(a)`).
/// - `n = −1`: substituting `u = aτ` and splitting `∫_{3a}^∞ e^{−u}ln^k u/u`.
/// - `n = −2`: integrating the `n = −1` expansion in `a` from the constant
///   `∫_3^∞ τ^{−2} ln^l τ`.
pub fn nm0_expansion(n: i32, l: u32) -> Result<Nm0Expansion> {
    check_nm0(n, l, 1.0)?;
    let ln3 = 3f64.ln();
    if n >= 0 {
        let coeffs = (0..=l)
            .map(|q| binom(l, q) * if q % 2 == 0 { 1.0 } else { -1.0 } * gamma_derivative_at_integer(n as u32, l - q))
            .collect();
        // ∫_0^3 τ^n ln^l τ = 3^{n+1} Σ_k (−1)^{l−k} l!/k! ln^k 3/(n+1)^{l−k+1}
        let np1 = n as f64 + 1.0;
        let lf = libm::tgamma(l as f64 + 1.0);
        let head: f64 = (0..=l)
            .map(|k| {
                let sgn = if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
                sgn * lf / libm::tgamma(k as f64 + 1.0) * ln3.powi(k as i32) / np1.powi((l - k + 1) as i32)
            })
            .sum::<f64>()
            * 3f64.powf(np1);
        return Ok(Nm0Expansion { power: -n - 1, coeffs, constant: -head });
    }
    // n = −1 polynomial in L = ln a
    let mut p = vec![0.0; l as usize + 2];
    for k in 0..=l {
        let minus_l_pow = poly_pow(&[0.0, -1.0], l - k);
        let lb = poly_pow(&[ln3, 1.0], k + 1);
        let mut inner: Vec<f64> = lb.iter().map(|c| -c / (k + 1) as f64).collect();
        inner[0] += k_constant(k)?;
        poly_add_scaled(&mut p, &poly_mul(&minus_l_pow, &inner), binom(l, k));
    }
    if n == -1 {
        return Ok(Nm0Expansion { power: 0, coeffs: p, constant: 0.0 });
    }
    // n = −2: I = C₀ − ∫_0^a P(ln s) ds, ∫_0^a ln^q s ds = a Σ_k (−1)^{q−k} q!/k! ln^k a
    let mut c = vec![0.0; p.len()];
    for (q, &pq) in p.iter().enumerate() {
        for k in 0..=q {
            let sgn = if (q - k) % 2 == 0 { 1.0 } else { -1.0 };
            c[k] -= pq * sgn * libm::tgamma(q as f64 + 1.0) / libm::tgamma(k as f64 + 1.0);
        }
    }
    let lf = libm::tgamma(l as f64 + 1.0);
    let c0 = (0..=l).map(|k| lf / libm::tgamma(k as f64 + 1.0) * ln3.powi(k as i32)).sum::<f64>() / 3.0;
    Ok(Nm0Expansion { power: 1, coeffs: c, constant: c0 })
}

/// Estimate of the coefficient `c₁` of `a^{−n−1} ln a` in
/// [`nm0_integral`]: slope of `a^{n+1}·I` in `ln a` between `a` and `2a`
/// (the constant `c₀` cancels; valid for `l ≤ 1`).
pub fn leading_log_coefficient(n: i32, l: u32, a: f64) -> Result<f64> {
    let g = |b: f64| -> Result<f64> { Ok(b.powi(n + 1) * nm0_integral(n, l, b)?) };
    let b = (2.0 * a).min(1.0);
    Ok((g(b)? - g(a)?) / (b.ln() - a.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_m_values() {
        assert_eq!(j_m(3, 2), 2);
        assert_eq!(j_m(3, 3), 3);
        assert_eq!(j_m(4, 4), 5);
    }

    #[test]
    fn k_constant_zero_is_minus_euler() {
        assert!((k_constant(0).unwrap() + 0.577_215_664_901_532_9).abs() < 1e-12);
    }
}
