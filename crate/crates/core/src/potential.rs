//! Admissible potential families with exact inverse-power tails and a
//! polynomial smoothstep bridge in the middle region.
//!
//! On each side the potential is
//! `V(x) = (1 − S(x))·depth + S(x)·tail(x)`, where `S` rises from 0 to 1 on
//! `x_plus/2 ≤ x ≤ x_plus` (mirrored for `x < 0`) with `K = m + 2` vanishing
//! derivatives at both ends, so `V ∈ C^{m+2}` and `V` equals the tail exactly
//! for `x ≥ x_plus` and `x ≤ x_minus`.

use crate::error::invalid;
use crate::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::prelude::*;

/// Potential family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `v± |x|^{−m}` tails.
    PureInversePower,
    /// `v± Σ_k c_k |x|^{−α_k}` tails.
    InversePowerSum,
    /// `v± |x|^{−m} + c_corr |x|^{−p_corr}` tails with `p_corr > m + 3`.
    PowerPlusCorrection,
}

/// One inverse-power term `coeff · |x|^{−alpha}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    /// Decay exponent α.
    pub alpha: f64,
    /// Coefficient.
    pub coeff: f64,
}

/// Which semi-infinite tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `x → +∞`.
    Plus,
    /// `x → −∞`.
    Minus,
}

impl Side {
    /// `+1` or `−1`.
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// A validated potential.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    family: Family,
    m: u32,
    v_plus: f64,
    v_minus: f64,
    x_plus: f64,
    x_minus: f64,
    depth: f64,
    sum_terms: Vec<PowerTerm>,
    correction: Option<PowerTerm>,
    // derived
    plus_terms: Vec<PowerTerm>,
    minus_terms: Vec<PowerTerm>,
    smooth: Vec<f64>,
}

/// Builder for [`PotentialSpec`].
#[derive(Debug, Clone)]
pub struct PotentialBuilder {
    family: Family,
    m: u32,
    v_plus: f64,
    v_minus: f64,
    x_plus: f64,
    x_minus: f64,
    depth: Option<f64>,
    sum_terms: Vec<PowerTerm>,
    correction: Option<PowerTerm>,
}

impl PotentialBuilder {
    /// Tail constants `v±`.
    pub fn tails(mut self, v_plus: f64, v_minus: f64) -> Self {
        self.v_plus = v_plus;
        self.v_minus = v_minus;
        self
    }
    /// Cutoffs `x_plus ≥ 1`, `x_minus ≤ −1`.
    pub fn cutoffs(mut self, x_plus: f64, x_minus: f64) -> Self {
        self.x_plus = x_plus;
        self.x_minus = x_minus;
        self
    }
    /// Constant value in the core `x_minus/2 ≤ x ≤ x_plus/2`.
    pub fn depth(mut self, depth: f64) -> Self {
        self.depth = Some(depth);
        self
    }
    /// Terms of the inverse-power-sum family.
    pub fn sum_terms(mut self, terms: &[PowerTerm]) -> Self {
        self.family = Family::InversePowerSum;
        self.sum_terms = terms.to_vec();
        self
    }
    /// Correction `coeff·|x|^{−exponent}` of the power-plus-correction family.
    pub fn correction(mut self, exponent: f64, coeff: f64) -> Self {
        self.family = Family::PowerPlusCorrection;
        self.correction = Some(PowerTerm { alpha: exponent, coeff });
        self
    }
    /// Validate and build.
    pub fn build(self) -> Result<PotentialSpec> {
        let m = self.m;
        if m < 3 {
            return Err(invalid!("m = {m} < 3 is not supported"));
        }
        if !(self.x_plus >= 1.0) || !(self.x_minus <= -1.0) {
            return Err(invalid!("cutoffs must satisfy x_plus ≥ 1, x_minus ≤ −1 (got {}, {})", self.x_plus, self.x_minus));
        }
        for v in [self.v_plus, self.v_minus] {
            if !v.is_finite() {
                return Err(invalid!("non-finite tail constant"));
            }
        }
        let mf = m as f64;
        let (plus_terms, minus_terms) = match self.family {
            Family::PureInversePower => (
                vec![PowerTerm { alpha: mf, coeff: self.v_plus }],
                vec![PowerTerm { alpha: mf, coeff: self.v_minus }],
            ),
            Family::InversePowerSum => {
                if self.sum_terms.is_empty() {
                    return Err(invalid!("inverse-power sum needs at least one term"));
                }
                for t in &self.sum_terms {
                    if !(t.alpha > 2.0) || !t.coeff.is_finite() {
                        return Err(invalid!("sum term exponent must exceed 2 (got {})", t.alpha));
                    }
                }
                let scaled = |v: f64| self.sum_terms.iter().map(|t| PowerTerm { alpha: t.alpha, coeff: v * t.coeff }).collect();
                (scaled(self.v_plus), scaled(self.v_minus))
            }
            Family::PowerPlusCorrection => {
                let c = self.correction.ok_or_else(|| invalid!("correction family without correction term"))?;
                if !(c.alpha > mf + 3.0) {
                    return Err(invalid!("correction exponent {} must exceed m + 3", c.alpha));
                }
                (
                    vec![PowerTerm { alpha: mf, coeff: self.v_plus }, c],
                    vec![PowerTerm { alpha: mf, coeff: self.v_minus }, c],
                )
            }
        };
        let strip = |v: Vec<PowerTerm>| -> Vec<PowerTerm> { v.into_iter().filter(|t| t.coeff != 0.0).collect() };
        let plus_terms = strip(plus_terms);
        let minus_terms = strip(minus_terms);
        let tail_at = |terms: &[PowerTerm], r: f64| terms.iter().map(|t| t.coeff * r.powf(-t.alpha)).sum::<f64>();
        let depth = self
            .depth
            .unwrap_or_else(|| 0.5 * (tail_at(&plus_terms, self.x_plus) + tail_at(&minus_terms, -self.x_minus)));
        if !depth.is_finite() {
            return Err(invalid!("non-finite bridge depth"));
        }
        Ok(PotentialSpec {
            family: self.family,
            m,
            v_plus: self.v_plus,
            v_minus: self.v_minus,
            x_plus: self.x_plus,
            x_minus: self.x_minus,
            depth,
            sum_terms: self.sum_terms,
            correction: self.correction,
            plus_terms,
            minus_terms,
            smooth: smoothstep_coefficients(m as usize + 2),
        })
    }
}

/// Coefficients (ascending powers of u) of the degree-`2K+1` smoothstep with
/// `K` vanishing derivatives at u = 0 and u = 1.
fn smoothstep_coefficients(k: usize) -> Vec<f64> {
    // S(u) = u^{K+1} Σ_{n=0}^{K} C(K+n, n) C(2K+1, K−n) (−u)^n
    let mut c = vec![0.0; 2 * k + 2];
    for n in 0..=k {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        c[k + 1 + n] = sign * binom(k + n, n) * binom(2 * k + 1, k - n);
    }
    c
}

fn binom(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// `d^k/dr^k r^{−α}` for `r > 0`.
fn power_derivative(alpha: f64, r: f64, k: usize) -> f64 {
    let mut fall = 1.0;
    for i in 0..k {
        fall *= -alpha - i as f64;
    }
    fall * r.powf(-alpha - k as f64)
}

impl PotentialSpec {
    /// Start a pure inverse-power potential with decay power `m`
    /// (defaults: `v± = 1`, cutoffs `±2`, automatic bridge depth).
    pub fn builder(m: u32) -> PotentialBuilder {
        PotentialBuilder {
            family: Family::PureInversePower,
            m,
            v_plus: 1.0,
            v_minus: 1.0,
            x_plus: 2.0,
            x_minus: -2.0,
            depth: None,
            sum_terms: Vec::new(),
            correction: None,
        }
    }

    /// Pure inverse power with the given tails and cutoffs.
    pub fn pure(m: u32, v_plus: f64, v_minus: f64, x_plus: f64, x_minus: f64) -> Result<Self> {
        Self::builder(m).tails(v_plus, v_minus).cutoffs(x_plus, x_minus).build()
    }

    /// The zero potential (free wave equation), represented with `m = 3`.
    pub fn zero() -> Self {
        Self::builder(3).tails(0.0, 0.0).depth(0.0).build().expect("zero potential is valid")
    }

    /// Family.
    pub fn family(&self) -> Family {
        self.family
    }
    /// Decay power `m` (sets the required smoothness `C^{m+2}`).
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Tail constant on `x → +∞`.
    pub fn v_plus(&self) -> f64 {
        self.v_plus
    }
    /// Tail constant on `x → −∞`.
    pub fn v_minus(&self) -> f64 {
        self.v_minus
    }
    /// Right cutoff.
    pub fn x_plus(&self) -> f64 {
        self.x_plus
    }
    /// Left cutoff.
    pub fn x_minus(&self) -> f64 {
        self.x_minus
    }
    /// Core value of the bridge.
    pub fn depth(&self) -> f64 {
        self.depth
    }
    /// Raw sum terms (inverse-power-sum family).
    pub fn sum_terms(&self) -> &[PowerTerm] {
        &self.sum_terms
    }
    /// Correction term (power-plus-correction family).
    pub fn correction(&self) -> Option<PowerTerm> {
        self.correction
    }

    /// Tail as `Σ c_k r^{−α_k}` in the reflected coordinate `r = ±x ≥ tail_start`.
    pub fn tail_terms(&self, side: Side) -> &[PowerTerm] {
        match side {
            Side::Plus => &self.plus_terms,
            Side::Minus => &self.minus_terms,
        }
    }

    /// `|x|` beyond which the tail formula is exact.
    pub fn tail_start(&self, side: Side) -> f64 {
        match side {
            Side::Plus => self.x_plus,
            Side::Minus => -self.x_minus,
        }
    }

    /// True when the potential vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.plus_terms.is_empty() && self.minus_terms.is_empty() && self.depth == 0.0
    }

    /// Smallest tail exponent on either side (the predicted sine decay rate).
    pub fn decay_exponent(&self) -> f64 {
        self.plus_terms
            .iter()
            .chain(self.minus_terms.iter())
            .map(|t| t.alpha)
            .fold(f64::INFINITY, f64::min)
            .min(if self.is_zero() { f64::INFINITY } else { self.m as f64 })
    }

    fn tail_derivative(&self, side: Side, r: f64, k: usize) -> f64 {
        // d^k/dx^k of tail(|x|) with r = |x|; x = sign·r so d/dx = sign·d/dr.
        let s = if side == Side::Minus && k % 2 == 1 { -1.0 } else { 1.0 };
        s * self.tail_terms(side).iter().map(|t| t.coeff * power_derivative(t.alpha, r, k)).sum::<f64>()
    }

    /// `V(x)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.derivative_unchecked(x, 0)
    }

    /// `V^{(k)}(x)` for `0 ≤ k ≤ m + 2`.
    pub fn derivative(&self, x: f64, k: u32) -> Result<f64> {
        if k > self.m + 2 {
            return Err(Error::OutOfRange(format!("derivative order {k} exceeds m + 2 = {}", self.m + 2)));
        }
        Ok(self.derivative_unchecked(x, k as usize))
    }

    fn derivative_unchecked(&self, x: f64, k: usize) -> f64 {
        let (side, cut) = if x >= 0.0 { (Side::Plus, self.x_plus) } else { (Side::Minus, -self.x_minus) };
        let r = x.abs();
        let inner = 0.5 * cut;
        if r >= cut {
            return self.tail_derivative(side, r, k);
        }
        if r <= inner {
            return if k == 0 { self.depth } else { 0.0 };
        }
        // u = (r − inner)/(cut − inner); du/dx = sign/(cut − inner)
        let width = cut - inner;
        let u = (r - inner) / width;
        let dudx = side.sign() / width;
        // V − depth = S·(tail − depth); Leibniz rule.
        let mut acc = 0.0;
        for j in 0..=k {
            let sj = poly_derivative(&self.smooth, u, j) * dudx.powi(j as i32);
            let tj = if k - j == 0 { self.tail_derivative(side, r, 0) - self.depth } else { self.tail_derivative(side, r, k - j) };
            acc += binom(k, j) * sj * tj;
        }
        if k == 0 {
            acc + self.depth
        } else {
            acc
        }
    }

    /// Sup-norm of `V` (attained in the bridge or at the cutoffs).
    pub fn sup_norm(&self) -> f64 {
        self.sample_extrema().1
    }

    /// Minimum of `V` over the line (0 is the infimum at infinity).
    pub fn min_value(&self) -> f64 {
        self.sample_extrema().0
    }

    fn sample_extrema(&self) -> (f64, f64) {
        let lo = self.x_minus * 1.5;
        let hi = self.x_plus * 1.5;
        let n = 6000;
        let mut vmin: f64 = 0.0;
        let mut vmax: f64 = 0.0;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let v = self.evaluate(x);
            vmin = vmin.min(v);
            vmax = vmax.max(v.abs());
        }
        (vmin, vmax)
    }
}

fn poly_derivative(c: &[f64], u: f64, j: usize) -> f64 {
    let mut acc = 0.0;
    for p in (j..c.len()).rev() {
        let mut fall = 1.0;
        for i in 0..j {
            fall *= (p - i) as f64;
        }
        acc = acc * u + c[p] * fall;
    }
    // Horner above multiplies by u once per power from len−1 down to j.
    acc
}
