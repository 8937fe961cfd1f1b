//! Numerical inverse Laplace transforms.
//!
//! * Bromwich line integrals `f(t) = (1/2πi)∫_{c−i∞}^{c+i∞} e^{εt}F(ε)dε`,
//!   either with a shared-node trapezoid rule (many times, expensive samplers)
//!   or with Gauss–Kronrod half-cycles accelerated by Wynn's ε-algorithm
//!   (slowly decaying, cheap samplers).
//! * A deformed hairpin contour for model terms `r ε^p ln ε/(1+ε⟨x⟩)^M`,
//!   which wraps the logarithmic cut on the negative axis and makes large
//!   times cheap and accurate.
//! * Watson's lemma for the leading late-time behaviour of such terms.
//! * Pointwise time-domain reconstruction of the wave from `ψ̂(x₀, ε)`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64 as C;

use crate::error::{invalid, Error, Result};
use crate::jost::Frequency;
use crate::numerics::{fd, gk, wynn::Wynn};
use crate::potential::PotentialSpec;
use crate::resolvent::{GridFunction, Green, ResolventConfig};

/// Evaluates a sampler at many contour nodes; lets callers fan the work out
/// (the std crate provides a thread-pool implementation).
pub trait NodeMap {
    /// Return `f(z)` for every node, in order.
    fn map_nodes(&self, nodes: &[C], f: &(dyn Fn(C) -> Result<C> + Sync)) -> Result<Vec<C>>;
}

/// Evaluate nodes one after another.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl NodeMap for Sequential {
    fn map_nodes(&self, nodes: &[C], f: &(dyn Fn(C) -> Result<C> + Sync)) -> Result<Vec<C>> {
        nodes.iter().map(|&z| f(z)).collect()
    }
}

/// Quadrature rule along a vertical line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineRule {
    /// Equispaced nodes shared by all requested times; the imaginary
    /// truncation is doubled until the tail is negligible.
    Trapezoid,
    /// Adaptive Gauss–Kronrod on half-cycles of `e^{iωt}` with Wynn
    /// extrapolation of the partial sums (one time per call).
    CycleExtrapolated,
}

/// Vertical Bromwich line `Re ε = c`.
#[derive(Debug, Clone, Copy)]
pub struct VerticalLine {
    /// Abscissa `c > 0`; `None` selects `min(0.1, 1/t_max)`.
    pub shift: Option<f64>,
    /// Quadrature rule.
    pub rule: LineRule,
    /// Tolerance relative to the largest result magnitude.
    pub tol: f64,
    /// Initial number of (one-sided) trapezoid nodes; at least 64.
    pub min_nodes: usize,
    /// Hard limit on (one-sided) trapezoid nodes or half-cycles.
    pub max_nodes: usize,
}

impl Default for VerticalLine {
    fn default() -> Self {
        Self { shift: None, rule: LineRule::Trapezoid, tol: 1e-8, min_nodes: 64, max_nodes: 1 << 16 }
    }
}

impl VerticalLine {
    /// Default line with the cycle-extrapolated rule.
    pub fn cycle() -> Self {
        Self { rule: LineRule::CycleExtrapolated, tol: 1e-11, max_nodes: 20_000, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if let Some(c) = self.shift {
            if !(c > 0.0 && c.is_finite()) {
                return Err(invalid!("Bromwich shift must be positive, got {c}"));
            }
        }
        if self.min_nodes < 64 {
            return Err(invalid!("at least 64 contour nodes required, got {}", self.min_nodes));
        }
        if !(self.tol > 0.0) || self.max_nodes < self.min_nodes {
            return Err(invalid!("invalid line tolerance or node limits"));
        }
        Ok(())
    }

    fn shift_for(&self, t_max: f64) -> f64 {
        self.shift.unwrap_or_else(|| 0.1f64.min(1.0 / t_max))
    }
}

/// Hairpin around the cut `(−∞, 0]`, closed by vertical legs at `Re ε = −d`.
#[derive(Debug, Clone, Copy)]
pub struct Hairpin {
    /// Depth `d` of the legs (reduced automatically to stay right of the pole).
    pub cut_depth: f64,
    /// Radius of the excluded disc around the branch point; the disc's own
    /// contribution is `O(δ^{p+1} ln δ)` and is dropped.
    pub delta_cut: f64,
    /// Tolerance of the leg and cut quadratures.
    pub tol: f64,
    /// Half-cycle limit for the legs.
    pub max_cycles: usize,
}

impl Default for Hairpin {
    fn default() -> Self {
        Self { cut_depth: 0.5, delta_cut: 1e-12, tol: 1e-12, max_cycles: 20_000 }
    }
}

/// Contour choice.
#[derive(Debug, Clone, Copy)]
pub enum ContourSpec {
    /// Straight Bromwich line.
    VerticalLine(VerticalLine),
    /// Deformed contour (model terms only).
    DeformedHairpin(Hairpin),
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid!("time must be positive and finite, got {t}"));
    }
    Ok(())
}

/// `f(t)` for a single time along a vertical line.
///
/// With `real_symmetric` the sampler is assumed to satisfy
/// `F(ε̄) = conj F(ε)` and only the upper half line is sampled (the result is
/// then real).
pub fn bromwich<F>(sampler: &F, t: f64, line: &VerticalLine, real_symmetric: bool) -> Result<C>
where
    F: Fn(C) -> Result<C> + Sync,
{
    check_time(t)?;
    line.validate()?;
    match line.rule {
        LineRule::Trapezoid => Ok(bromwich_many(sampler, &[t], line, real_symmetric, &Sequential)?[0]),
        LineRule::CycleExtrapolated => {
            let c = line.shift_for(t);
            let half = cycle_integral(
                &|w: f64| {
                    let up = sampler(C::new(c, w))? * C::from_polar(1.0, w * t);
                    if real_symmetric {
                        Ok(up)
                    } else {
                        Ok(up + sampler(C::new(c, -w))? * C::from_polar(1.0, -w * t))
                    }
                },
                t,
                line.tol,
                line.max_nodes,
            )?;
            let pre = libm::exp(c * t) / (2.0 * PI);
            Ok(if real_symmetric { C::new(2.0 * pre * half.re, 0.0) } else { half * pre })
        }
    }
}

/// `∫_0^∞ g(ω)dω` for oscillatory `g` with frequency `t`: half-cycle panels,
/// partial sums extrapolated with Wynn's ε-algorithm.
fn cycle_integral(g: &dyn Fn(f64) -> Result<C>, t: f64, tol: f64, max_cycles: usize) -> Result<C> {
    let step = PI / t;
    let opts = gk::GkOptions { abs_tol: 1e-300, rel_tol: tol * 1e-2, max_intervals: 200 };
    let first_err: core::cell::RefCell<Option<Error>> = core::cell::RefCell::new(None);
    let mut eval = |w: f64| match g(w) {
        Ok(v) => v,
        Err(e) => {
            first_err.borrow_mut().get_or_insert(e);
            C::new(0.0, 0.0)
        }
    };
    let mut wynn = Wynn::new();
    let mut partial = C::new(0.0, 0.0);
    let mut settled = 0;
    let mut last = C::new(f64::NAN, 0.0);
    for k in 0..max_cycles {
        let piece = gk::integrate(&mut eval, k as f64 * step, (k + 1) as f64 * step, opts)?;
        partial += piece;
        let est = wynn.push(partial);
        if let Some(e) = first_err.borrow_mut().take() {
            return Err(e);
        }
        let change = (est - last).norm();
        let scale = est.norm().max(partial.norm()).max(1e-300);
        last = est;
        if k >= 8 && change <= tol * scale {
            settled += 1;
            if settled >= 3 {
                return Ok(est);
            }
        } else {
            settled = 0;
        }
    }
    Err(Error::Quadrature(alloc::format!("half-cycle extrapolation did not settle after {max_cycles} cycles")))
}

/// Geometry of the shared-node trapezoid rule for a set of times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidPlan {
    /// Line abscissa.
    pub shift: f64,
    /// Node spacing `Δω`.
    pub step: f64,
}

impl TrapezoidPlan {
    /// `c = min(0.1, 1/t_max)` (unless fixed) and `Δω = 2π/T` with the alias
    /// period `T = max(20 t_max, 30/c)`, which damps aliased copies by at
    /// least `e^{−30}`.
    pub fn new(t_max: f64, line: &VerticalLine) -> Self {
        let c = line.shift_for(t_max);
        let period = (20.0 * t_max).max(30.0 / c);
        Self { shift: c, step: 2.0 * PI / period }
    }
}

/// `f(t)` for many times from one set of sampler evaluations (trapezoid rule
/// on shared nodes; `line.rule` is ignored).
pub fn bromwich_many<F, M>(sampler: &F, ts: &[f64], line: &VerticalLine, real_symmetric: bool, map: &M) -> Result<Vec<C>>
where
    F: Fn(C) -> Result<C> + Sync,
    M: NodeMap + ?Sized,
{
    line.validate()?;
    if ts.is_empty() {
        return Ok(Vec::new());
    }
    for &t in ts {
        check_time(t)?;
    }
    let t_max = ts.iter().copied().fold(0.0, f64::max);
    let plan = TrapezoidPlan::new(t_max, line);
    let (c, dw) = (plan.shift, plan.step);
    let mut sums = alloc::vec![C::new(0.0, 0.0); ts.len()];
    let mut done = 0usize; // nodes k < done (k ≥ 0) already summed
    let mut target = line.min_nodes;
    loop {
        let ks: Vec<i64> = (done..target).map(|k| k as i64).collect();
        let mut nodes: Vec<C> = ks.iter().map(|&k| C::new(c, k as f64 * dw)).collect();
        if !real_symmetric {
            nodes.extend(ks.iter().filter(|&&k| k > 0).map(|&k| C::new(c, -(k as f64) * dw)));
        }
        let vals = map.map_nodes(&nodes, sampler)?;
        let mut block = alloc::vec![C::new(0.0, 0.0); ts.len()];
        let mut block_mag = 0.0f64;
        for (z, v) in nodes.iter().zip(&vals) {
            let w = z.im;
            let weight = if w == 0.0 && real_symmetric { 0.5 } else { 1.0 };
            block_mag += v.norm() * weight;
            for (b, &t) in block.iter_mut().zip(ts) {
                *b += *v * C::from_polar(weight, w * t);
            }
        }
        for (s, b) in sums.iter_mut().zip(&block) {
            *s += *b;
        }
        let pre_max = libm::exp(c * t_max) * dw / (2.0 * PI) * if real_symmetric { 2.0 } else { 1.0 };
        let scale = ts
            .iter()
            .zip(&sums)
            .map(|(&t, s)| libm::exp(c * t) * dw / (2.0 * PI) * s.norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        let tail = pre_max * block_mag;
        done = target;
        if done > line.min_nodes && tail <= line.tol * scale.max(line.tol) {
            break;
        }
        if target >= line.max_nodes {
            return Err(Error::Quadrature(alloc::format!(
                "trapezoid tail {tail:e} still above tolerance after {} nodes; sampler does not decay",
                target
            )));
        }
        target = (2 * target).min(line.max_nodes);
    }
    Ok(ts
        .iter()
        .zip(&sums)
        .map(|(&t, s)| {
            let pre = libm::exp(c * t) * dw / (2.0 * PI);
            if real_symmetric {
                C::new(2.0 * pre * s.re, 0.0)
            } else {
                *s * pre
            }
        })
        .collect())
}

/// Model term `r ε^p [ln ε] / (1 + ε⟨x⟩)^M` with `⟨x⟩ = √(1+x²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelTerm {
    /// Coefficient `r`.
    pub coefficient: f64,
    /// Power `p`.
    pub power: u32,
    /// Whether the term carries `ln ε`.
    pub log: bool,
    /// Scale `⟨x⟩ > 0`.
    pub scale: f64,
    /// Regularising exponent `M`.
    pub exponent: u32,
}

impl ModelTerm {
    /// `r ε^p ln ε/(1+ε⟨x⟩)^M` at the position `x`.
    pub fn log_term(coefficient: f64, power: u32, x: f64, exponent: u32) -> Self {
        Self { coefficient, power, log: true, scale: libm::sqrt(1.0 + x * x), exponent }
    }

    /// Value at `ε` (principal logarithm).
    pub fn eval(&self, e: C) -> C {
        let mut v = e.powu(self.power) * self.coefficient / (C::new(1.0, 0.0) + e * self.scale).powu(self.exponent);
        if self.log {
            v *= crate::clog(e);
        }
        v
    }

    fn validate(&self) -> Result<()> {
        if self.power < 1 {
            return Err(invalid!("hairpin contour needs p ≥ 1 (integrable branch point), got p = {}", self.power));
        }
        if !(self.scale > 0.0) || self.exponent <= self.power {
            return Err(invalid!("model term needs ⟨x⟩ > 0 and M > p"));
        }
        Ok(())
    }
}

/// Pieces of a hairpin evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HairpinResult {
    /// Total `f(t)`.
    pub value: f64,
    /// Contribution of the two cut banks.
    pub cut: f64,
    /// Contribution of the vertical legs.
    pub legs: f64,
    /// Leg depth actually used.
    pub depth: f64,
    /// Leading Watson approximation at this time.
    pub watson: f64,
}

/// Inverse transform of a model term along the hairpin contour.
///
/// The two banks of the cut combine to `−∫_δ^d e^{−ut} r(−u)^p/(1−u⟨x⟩)^M du`
/// (the jump of `ln ε` is `2πi`); the legs at `Re ε = −d` are damped by
/// `e^{−dt}`. The depth is halved towards the pole when `1/⟨x⟩ < 2d`.
pub fn deformed_cut_integral(model: &ModelTerm, t: f64, hairpin: &Hairpin) -> Result<HairpinResult> {
    check_time(t)?;
    model.validate()?;
    if !(hairpin.cut_depth > 0.0 && hairpin.delta_cut > 0.0 && hairpin.delta_cut < hairpin.cut_depth) {
        return Err(invalid!("hairpin needs 0 < δ < d"));
    }
    let d = hairpin.cut_depth.min(0.5 / model.scale);
    let opts = gk::GkOptions { abs_tol: 1e-300, rel_tol: hairpin.tol, max_intervals: 500 };
    let cut = if model.log {
        let sign = if model.power % 2 == 0 { 1.0 } else { -1.0 };
        let p = model.power as i32;
        let m = model.exponent as i32;
        -gk::integrate(
            |u: f64| libm::exp(-u * t) * model.coefficient * sign * libm::pow(u, p as f64) / libm::pow(1.0 - u * model.scale, m as f64),
            hairpin.delta_cut,
            d,
            opts,
        )?
    } else {
        0.0
    };
    let legs_half = cycle_integral(
        &|w: f64| {
            Ok(model.eval(C::new(-d, w)) * C::from_polar(1.0, w * t) + model.eval(C::new(-d, -w)) * C::from_polar(1.0, -w * t))
        },
        t,
        hairpin.tol,
        hairpin.max_cycles,
    )?;
    let legs = libm::exp(-d * t) / (2.0 * PI) * legs_half.re;
    Ok(HairpinResult { value: cut + legs, cut, legs, depth: d, watson: watson_leading(model.coefficient, model.power, t) })
}

/// Leading late-time behaviour of the inverse transform of `r ε^p ln ε`
/// (Watson's lemma applied to the cut integral): `(−1)^{p+1} p! r t^{−p−1}`.
pub fn watson_leading(coefficient: f64, power: u32, t: f64) -> f64 {
    let fact: f64 = (1..=power).map(|k| k as f64).product();
    let sign = if power % 2 == 0 { -1.0 } else { 1.0 };
    sign * fact * coefficient * libm::pow(t, -(power as f64) - 1.0)
}

/// Settings for [`reconstruct_time_solution`].
#[derive(Debug, Clone, Copy)]
pub struct ReconstructOptions {
    /// Green operator settings.
    pub resolvent: ResolventConfig,
    /// Bromwich line (trapezoid rule).
    pub line: VerticalLine,
    /// Assume real data and potential (sample the upper half line only).
    pub assume_real: bool,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self { resolvent: ResolventConfig::default(), line: VerticalLine::default(), assume_real: true }
    }
}

/// Number of local large-ε terms subtracted by [`reconstruct_time_solution`].
pub const LOCAL_TERMS: usize = 6;

/// `ψ(x₀, t)` on `t_grid` from the transform `ψ̂(x₀, ε)`.
///
/// The transform's local large-ε terms `a_k/ε^k` (k = 1..6: `a_{2j+1} =
/// L^jψ₀(x₀)`, `a_{2j+2} = L^jψ₁(x₀)` with `L = d²/dx² − V`, evaluated by
/// repeated 7-point differences on the data grid) are re-expanded in powers
/// of `1/(ε+1)` and subtracted; the inverses `b_j t^{j−1}e^{−t}/(j−1)!` of the
/// re-expanded terms are added back analytically, and the `O(ε^{−7})`
/// remainder decays fast enough for the trapezoid rule.
pub fn reconstruct_time_solution<M: NodeMap + ?Sized>(
    spec: &PotentialSpec,
    psi0: &GridFunction,
    psi1: &GridFunction,
    x0: f64,
    t_grid: &[f64],
    opts: &ReconstructOptions,
    map: &M,
) -> Result<Vec<C>> {
    if psi0.grid() != psi1.grid() {
        return Err(invalid!("ψ₀ and ψ₁ must share a grid"));
    }
    let k = psi1.node(x0).ok_or_else(|| invalid!("x0 = {x0} is not a node of the data grid"))?;
    let grid = psi1.grid();
    let pot: Vec<f64> = grid.iter().map(|&x| spec.evaluate(x)).collect();
    let apply_l = |f: &[C]| -> Vec<C> {
        let d2 = fd::derivative(grid, f, 2, 7);
        d2.iter().zip(f).zip(&pot).map(|((d, v), p)| d - v * p).collect()
    };
    let mut a = [C::new(0.0, 0.0); LOCAL_TERMS];
    let (mut l0, mut l1) = (psi0.values().to_vec(), psi1.values().to_vec());
    for j in 0..LOCAL_TERMS / 2 {
        if j > 0 {
            l0 = apply_l(&l0);
            l1 = apply_l(&l1);
        }
        a[2 * j] = l0[k];
        a[2 * j + 1] = l1[k];
    }
    // Σ_k a_k ε^{−k} = Σ_j b_j (ε+1)^{−j} + O(ε^{−7}), since
    // ε^{−k} = Σ_{n≥0} C(n+k−1, n) (ε+1)^{−k−n}.
    let binom = |n: usize, r: usize| -> f64 { (0..r).map(|i| (n - i) as f64 / (i + 1) as f64).product() };
    let mut b = [C::new(0.0, 0.0); LOCAL_TERMS];
    for (j, bj) in b.iter_mut().enumerate() {
        for (kk, ak) in a.iter().enumerate().take(j + 1) {
            *bj += *ak * binom(j, j - kk);
        }
    }
    let one = C::new(1.0, 0.0);
    let sampler = |e: C| -> Result<C> {
        let eps = Frequency::new(e)?;
        let g = psi1.combine(one, psi0, e)?;
        let full = -Green::new(spec, eps, grid, &opts.resolvent)?.apply(&g)?.values()[k];
        let inv = one / (e + 1.0);
        let mut pow = inv;
        let mut sub = C::new(0.0, 0.0);
        for bk in b {
            sub += bk * pow;
            pow *= inv;
        }
        Ok(full - sub)
    };
    let rem = bromwich_many(&sampler, t_grid, &opts.line, opts.assume_real, map)?;
    Ok(t_grid
        .iter()
        .zip(rem)
        .map(|(&t, r)| {
            // t^{j}e^{−t}/j!
            let mut w = libm::exp(-t);
            let mut back = C::new(0.0, 0.0);
            for (j, bj) in b.iter().enumerate() {
                back += bj * w;
                w *= t / (j + 1) as f64;
            }
            if opts.assume_real {
                C::new(r.re + back.re, 0.0)
            } else {
                r + back
            }
        })
        .collect())
}
