//! Direct time-domain oracles for `ψ_tt − ψ_xx + V(x)ψ = 0`.
//!
//! * [`Leapfrog`]: second-order centred scheme on `[−L, L]` with Dirichlet
//!   ends placed outside the light cone, a conserved discrete energy and
//!   exact time reversibility.
//! * [`duhamel_solve`]: fixed-point iteration of
//!   `u = u_free − ½∬_{cone} V u` on the characteristic grid (`h = k`),
//!   with the increments measured in the weighted norm
//!   `sup_t e^{−νt}‖u(·, t)‖₁`.
//! * [`decay_fit`]: power-law fits of recorded time series.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::numerics::{gk, lsq};
use crate::potential::PotentialSpec;
#[allow(unused_imports)]
use crate::prelude::*;
use crate::resolvent::GridFunction;

/// Gaussians are cut off at this many widths (relative size `e^{−32}`).
pub const GAUSSIAN_CUTOFF: f64 = 8.0;

/// One Gaussian component `w·exp(−(x−c)²/(2σ²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    /// Weight `w`.
    pub weight: f64,
    /// Centre `c`.
    pub centre: f64,
    /// Width `σ > 0`.
    pub width: f64,
}

impl GaussianComponent {
    fn eval(&self, x: f64) -> f64 {
        let z = (x - self.centre) / self.width;
        if z.abs() > GAUSSIAN_CUTOFF {
            0.0
        } else {
            self.weight * (-0.5 * z * z).exp()
        }
    }
}

/// Spatial profile of the initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// Truncated Gaussian of standard deviation `width`.
    Gaussian {
        /// Centre.
        centre: f64,
        /// Standard deviation.
        width: f64,
    },
    /// Smooth compact bump `exp(1 − 1/(1 − r²))`, `r = (x−centre)/width`.
    Bump {
        /// Centre.
        centre: f64,
        /// Half-width of the support.
        width: f64,
    },
    /// Sum of truncated Gaussians (used for seeded random data).
    Sum(Vec<GaussianComponent>),
}

impl Profile {
    /// Value at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Gaussian { centre, width } => GaussianComponent { weight: 1.0, centre: *centre, width: *width }.eval(x),
            Profile::Bump { centre, width } => {
                let r = (x - centre) / width;
                if r.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - r * r)).exp()
                }
            }
            Profile::Sum(parts) => parts.iter().map(|p| p.eval(x)).sum(),
        }
    }

    /// Closed support interval.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Profile::Gaussian { centre, width } => (centre - GAUSSIAN_CUTOFF * width, centre + GAUSSIAN_CUTOFF * width),
            Profile::Bump { centre, width } => (centre - width, centre + width),
            Profile::Sum(parts) => parts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                (a.min(p.centre - GAUSSIAN_CUTOFF * p.width), b.max(p.centre + GAUSSIAN_CUTOFF * p.width))
            }),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            Profile::Gaussian { centre, width } | Profile::Bump { centre, width } => centre.is_finite() && *width > 0.0,
            Profile::Sum(parts) => {
                !parts.is_empty() && parts.iter().all(|p| p.centre.is_finite() && p.weight.is_finite() && p.width > 0.0)
            }
        };
        if ok && self.support().1.is_finite() {
            Ok(())
        } else {
            Err(invalid!("initial profile needs finite centres and positive widths"))
        }
    }
}

/// Which initial slot carries the profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// `ψ(·,0) = profile`, `ψ_t(·,0) = 0` ("cosine" evolution).
    Psi0,
    /// `ψ(·,0) = 0`, `ψ_t(·,0) = profile` ("sine" evolution).
    Psi1,
}

/// Initial data: one profile in one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    /// Spatial profile.
    pub profile: Profile,
    /// Slot it occupies.
    pub slot: Slot,
}

impl InitialData {
    /// Data with validated profile.
    pub fn new(profile: Profile, slot: Slot) -> Result<Self> {
        profile.validate()?;
        Ok(Self { profile, slot })
    }

    /// `ψ(x, 0)`.
    pub fn psi0(&self, x: f64) -> f64 {
        if self.slot == Slot::Psi0 {
            self.profile.eval(x)
        } else {
            0.0
        }
    }

    /// `ψ_t(x, 0)`.
    pub fn psi1(&self, x: f64) -> f64 {
        if self.slot == Slot::Psi1 {
            self.profile.eval(x)
        } else {
            0.0
        }
    }

    /// Support of the data.
    pub fn support(&self) -> (f64, f64) {
        self.profile.support()
    }

    /// `(ψ₀, ψ₁)` sampled on `grid` (for the frequency-domain pipeline).
    pub fn grid_functions(&self, grid: &[f64]) -> Result<(GridFunction, GridFunction)> {
        Ok((
            GridFunction::sample(grid.to_vec(), |x| self.psi0(x))?,
            GridFunction::sample(grid.to_vec(), |x| self.psi1(x))?,
        ))
    }
}

/// Leapfrog settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    /// Domain half-width `L`.
    pub half_width: f64,
    /// Spatial step `h`.
    pub h: f64,
    /// Courant number `λ = k/h < 1`.
    pub courant: f64,
    /// Final time `T`.
    pub t_final: f64,
    /// Recorder positions (grid nodes `−L + jh`).
    pub recorders: Vec<f64>,
    /// Record every this many steps.
    pub record_every: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { half_width: 600.0, h: 0.05, courant: 0.5, t_final: 400.0, recorders: vec![0.0], record_every: 1 }
    }
}

impl SimulationConfig {
    /// Time step `k = λh`.
    pub fn k(&self) -> f64 {
        self.courant * self.h
    }

    /// Number of steps `⌈T/k⌉`.
    pub fn steps(&self) -> usize {
        (self.t_final / self.k() - 1e-9).ceil().max(0.0) as usize
    }

    /// Check the Courant condition, the light cone and the recorder positions
    /// against the data support.
    pub fn validate(&self, support: (f64, f64)) -> Result<()> {
        if !(self.h > 0.0 && self.half_width > 0.0 && self.t_final >= 0.0 && self.record_every > 0) {
            return Err(invalid!("simulation needs h > 0, L > 0, T ≥ 0 and record_every ≥ 1"));
        }
        if !(self.courant > 0.0 && self.courant < 1.0) {
            return Err(invalid!("Courant number k/h = {} must lie in (0, 1)", self.courant));
        }
        let reach = support.0.abs().max(support.1.abs()) + self.t_final;
        if !(self.half_width > reach) {
            return Err(Error::OutOfRange(alloc::format!(
                "light cone: L = {} must exceed max|support| + T = {reach}",
                self.half_width
            )));
        }
        for &x in &self.recorders {
            node_index(x, self.half_width, self.h)?;
        }
        Ok(())
    }
}

fn node_index(x: f64, half_width: f64, h: f64) -> Result<usize> {
    let j = ((x + half_width) / h).round();
    if j < 0.0 || j > (2.0 * half_width / h).round() || ((x + half_width) / h - j).abs() > 1e-6 {
        return Err(invalid!("recorder {x} is not a grid node"));
    }
    Ok(j as usize)
}

/// Leapfrog stepper holding two time levels.
#[derive(Debug, Clone)]
pub struct Leapfrog {
    x: Vec<f64>,
    v: Vec<f64>,
    prev: Vec<f64>,
    cur: Vec<f64>,
    next: Vec<f64>,
    k: f64,
    lambda2: f64,
    step: i64,
    dir: i64,
}

impl Leapfrog {
    /// Set up `u⁰ = ψ₀` and `u¹` from a third-order Taylor start.
    pub fn new(spec: &PotentialSpec, data: &InitialData, cfg: &SimulationConfig) -> Result<Self> {
        cfg.validate(data.support())?;
        let n = (2.0 * cfg.half_width / cfg.h).round() as usize + 1;
        let x: Vec<f64> = (0..n).map(|j| -cfg.half_width + cfg.h * j as f64).collect();
        let v: Vec<f64> = x.iter().map(|&x| spec.evaluate(x)).collect();
        let u0: Vec<f64> = x.iter().map(|&x| data.psi0(x)).collect();
        let u1d: Vec<f64> = x.iter().map(|&x| data.psi1(x)).collect();
        let k = cfg.k();
        let h2 = cfg.h * cfg.h;
        let lap = |f: &[f64], j: usize| -> f64 {
            if j == 0 || j == n - 1 {
                0.0
            } else {
                (f[j - 1] - 2.0 * f[j] + f[j + 1]) / h2
            }
        };
        let mut u1 = vec![0.0; n];
        for j in 1..n - 1 {
            let a0 = lap(&u0, j) - v[j] * u0[j];
            let a1 = lap(&u1d, j) - v[j] * u1d[j];
            u1[j] = u0[j] + k * u1d[j] + 0.5 * k * k * a0 + k * k * k / 6.0 * a1;
        }
        Ok(Self { x, v, prev: u0, cur: u1, next: vec![0.0; n], k, lambda2: cfg.courant * cfg.courant, step: 1, dir: 1 })
    }

    /// Advance one step.
    pub fn step(&mut self) {
        let n = self.cur.len();
        let (l2, k2) = (self.lambda2, self.k * self.k);
        let (p, c, nx, v) = (&self.prev, &self.cur, &mut self.next, &self.v);
        for j in 1..n - 1 {
            nx[j] = 2.0 * c[j] - p[j] + l2 * (c[j - 1] - 2.0 * c[j] + c[j + 1]) - k2 * v[j] * c[j];
        }
        nx[0] = 0.0;
        nx[n - 1] = 0.0;
        core::mem::swap(&mut self.prev, &mut self.cur);
        core::mem::swap(&mut self.cur, &mut self.next);
        self.step += self.dir;
    }

    /// Reverse the direction of time: swap the two stored levels, so the
    /// current field becomes `u^{n−1}` and further steps run backwards.
    pub fn reverse(&mut self) {
        core::mem::swap(&mut self.prev, &mut self.cur);
        self.dir = -self.dir;
        self.step += self.dir;
    }

    /// Time level of the current field.
    pub fn time(&self) -> f64 {
        self.step as f64 * self.k
    }

    /// Grid nodes.
    pub fn grid(&self) -> &[f64] {
        &self.x
    }

    /// Current field `u^n`.
    pub fn field(&self) -> &[f64] {
        &self.cur
    }

    /// Discrete energy between the two stored levels,
    /// `½Σ[((u^{n}−u^{n−1})/k)² + (Δ₊u^n)(Δ₊u^{n−1})/h² + V u^n u^{n−1}] h`,
    /// which the scheme conserves exactly.
    pub fn energy(&self) -> f64 {
        let n = self.cur.len();
        let h = self.x[1] - self.x[0];
        let k = self.k;
        let (p, c) = (&self.prev, &self.cur);
        let mut e = 0.0;
        for j in 0..n {
            let dt = (c[j] - p[j]) / k;
            e += dt * dt + self.v[j] * c[j] * p[j];
            if j + 1 < n {
                e += (c[j + 1] - c[j]) * (p[j + 1] - p[j]) / (h * h);
            }
        }
        0.5 * e * h
    }
}

/// Recorded leapfrog run.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    /// Recorder positions.
    pub recorders: Vec<f64>,
    /// Sample times (starting at 0).
    pub times: Vec<f64>,
    /// `values[r][i] = ψ(recorders[r], times[i])`.
    pub values: Vec<Vec<f64>>,
    /// Discrete energy at the sample times (after the first step).
    pub energy: Vec<f64>,
}

impl TimeSeries {
    /// Relative energy drift `max|E − E₀|/|E₀|`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy.first().copied().unwrap_or(0.0);
        let worst = self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
        if e0 == 0.0 {
            worst
        } else {
            worst / e0.abs()
        }
    }

    /// `(t, ψ)` samples of one recorder.
    pub fn samples(&self, recorder: usize) -> Vec<(f64, f64)> {
        self.times.iter().copied().zip(self.values[recorder].iter().copied()).collect()
    }
}

/// Evolve with the leapfrog scheme and record `ψ` at the recorder nodes.
pub fn leapfrog_solve(spec: &PotentialSpec, data: &InitialData, cfg: &SimulationConfig) -> Result<TimeSeries> {
    let mut lf = Leapfrog::new(spec, data, cfg)?;
    let idx: Vec<usize> = cfg.recorders.iter().map(|&x| node_index(x, cfg.half_width, cfg.h)).collect::<Result<_>>()?;
    let mut ts = TimeSeries {
        recorders: cfg.recorders.clone(),
        times: vec![0.0],
        values: idx.iter().map(|&j| vec![data.psi0(lf.x[j])]).collect(),
        energy: vec![lf.energy()],
    };
    let steps = cfg.steps();
    let record = |lf: &Leapfrog, ts: &mut TimeSeries| {
        ts.times.push(lf.time());
        for (r, &j) in idx.iter().enumerate() {
            ts.values[r].push(lf.cur[j]);
        }
        ts.energy.push(lf.energy());
    };
    if steps >= 1 && cfg.record_every == 1 {
        record(&lf, &mut ts);
    }
    for n in 2..=steps {
        lf.step();
        if n % cfg.record_every == 0 || n == steps {
            record(&lf, &mut ts);
        }
    }
    Ok(ts)
}

/// Duhamel iteration settings.
#[derive(Debug, Clone, PartialEq)]
pub struct DuhamelConfig {
    /// Final time `T`.
    pub t_final: f64,
    /// Characteristic step `h = k`.
    pub step: f64,
    /// Stop when the weighted increment drops below this.
    pub tolerance: f64,
    /// Weight `ν` of the stopping norm; `None` selects `1.1·√(2‖V‖∞)`.
    pub nu: Option<f64>,
    /// Iteration limit.
    pub max_iter: usize,
    /// Recorder positions.
    pub recorders: Vec<f64>,
}

impl Default for DuhamelConfig {
    fn default() -> Self {
        Self { t_final: 10.0, step: 0.01, tolerance: 1e-10, nu: None, max_iter: 200, recorders: vec![0.0] }
    }
}

/// Outcome of [`duhamel_solve`].
#[derive(Debug, Clone)]
pub struct DuhamelResult {
    /// Recorded series (on the characteristic time grid).
    pub series: TimeSeries,
    /// Iterations performed (1 when `V ≡ 0`).
    pub iterations: usize,
    /// `‖V‖∞` over the region reached by the data.
    pub v_sup: f64,
    /// `ν` used for the stopping rule.
    pub nu: f64,
    /// Per iteration, `‖u^{i+1}(·, t_n) − u^i(·, t_n)‖₁` for every time level.
    pub increment_profiles: Vec<Vec<f64>>,
    step: f64,
}

impl DuhamelResult {
    /// Weighted increments `sup_n e^{−ν t_n}‖Δu(·, t_n)‖₁` for any `ν`.
    pub fn weighted_increments(&self, nu: f64) -> Vec<f64> {
        self.increment_profiles
            .iter()
            .map(|p| p.iter().enumerate().map(|(n, d)| (-nu * n as f64 * self.step).exp() * d).fold(0.0, f64::max))
            .collect()
    }

    /// Ratios of successive weighted increments for `ν` (only pairs whose
    /// earlier increment is above `floor`).
    pub fn contraction_ratios(&self, nu: f64, floor: f64) -> Vec<f64> {
        let w = self.weighted_increments(nu);
        w.windows(2).filter(|p| p[0] > floor).map(|p| p[1] / p[0]).collect()
    }

    /// The contraction bound `2‖V‖∞/ν²`.
    pub fn contraction_bound(&self, nu: f64) -> f64 {
        2.0 * self.v_sup / (nu * nu)
    }
}

/// Solve by Duhamel fixed-point iteration `u ← u_free − ½D[Vu]`, where `D[q]`
/// integrates `q` over the backward light cone.
///
/// On the characteristic grid `D` obeys the diamond recursion
/// `D(x,t+k) = D(x−k,t) + D(x+k,t) − D(x,t−k) + ∫_diamond q`, with a 5-point
/// rule (exact for quadratics) on each diamond and a vertex rule on the first
/// triangle; `q = V u` uses the previous iterate.
pub fn duhamel_solve(spec: &PotentialSpec, data: &InitialData, cfg: &DuhamelConfig) -> Result<DuhamelResult> {
    let k = cfg.step;
    if !(k > 0.0 && cfg.t_final > 0.0 && cfg.tolerance > 0.0 && cfg.max_iter > 0) {
        return Err(invalid!("Duhamel iteration needs step, T, tolerance and max_iter positive"));
    }
    let nt = (cfg.t_final / k).round() as usize;
    if ((nt as f64) * k - cfg.t_final).abs() > 1e-9 * cfg.t_final {
        return Err(invalid!("T = {} is not a multiple of the step {k}", cfg.t_final));
    }
    let (a, b) = data.support();
    let x_lo = a - cfg.t_final - 2.0 * k;
    let nx = ((b - a + 2.0 * cfg.t_final + 4.0 * k) / k).ceil() as usize + 1;
    let x: Vec<f64> = (0..nx).map(|j| x_lo + k * j as f64).collect();
    let v: Vec<f64> = x.iter().map(|&x| spec.evaluate(x)).collect();
    let v_sup = v.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let nu = cfg.nu.unwrap_or(1.1 * (2.0 * v_sup).sqrt());
    let rec_idx: Vec<usize> = cfg
        .recorders
        .iter()
        .map(|&r| {
            let j = ((r - x_lo) / k).round();
            if j < 0.0 || j as usize >= nx || ((r - x_lo) / k - j).abs() > 1e-6 {
                Err(invalid!("recorder {r} is not a node of the characteristic grid"))
            } else {
                Ok(j as usize)
            }
        })
        .collect::<Result<_>>()?;

    // Free solution by d'Alembert with the exact antiderivative of ψ₁ on the grid.
    let mut big_psi1 = vec![0.0; nx];
    let opts = gk::GkOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 200 };
    for j in 1..nx {
        big_psi1[j] = big_psi1[j - 1] + gk::integrate(|s: f64| data.psi1(s), x[j - 1], x[j], opts)?;
    }
    let at = |f: &[f64], j: i64| -> f64 { f[j.clamp(0, nx as i64 - 1) as usize] };
    let psi0: Vec<f64> = x.iter().map(|&x| data.psi0(x)).collect();
    let free: Vec<Vec<f64>> = (0..=nt)
        .map(|n| {
            (0..nx)
                .map(|j| {
                    let (jm, jp) = (j as i64 - n as i64, j as i64 + n as i64);
                    let p0 = |i: i64| if i < 0 || i >= nx as i64 { 0.0 } else { psi0[i as usize] };
                    0.5 * (p0(jm) + p0(jp)) + 0.5 * (at(&big_psi1, jp) - at(&big_psi1, jm))
                })
                .collect()
        })
        .collect();

    let mut u = free.clone();
    let mut profiles = Vec::new();
    let mut iterations = 0;
    let mut rising = 0;
    let mut last_w = f64::INFINITY;
    loop {
        iterations += 1;
        let new = duhamel_map(&free, &u, &v, k);
        let prof: Vec<f64> =
            new.iter().zip(&u).map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum::<f64>() * k).collect();
        let w = prof.iter().enumerate().map(|(n, d)| (-nu * n as f64 * k).exp() * d).fold(0.0, f64::max);
        profiles.push(prof);
        u = new;
        if w < cfg.tolerance {
            break;
        }
        rising = if w > last_w { rising + 1 } else { 0 };
        if rising >= 3 {
            return Err(Error::NonContraction(alloc::format!(
                "Duhamel increments grew for 3 iterations (ν = {nu}, 2‖V‖/ν² = {})",
                2.0 * v_sup / (nu * nu)
            )));
        }
        last_w = w;
        if iterations >= cfg.max_iter {
            return Err(Error::NonContraction(alloc::format!(
                "Duhamel iteration not converged after {iterations} iterations (increment {w:e})"
            )));
        }
    }

    let series = TimeSeries {
        recorders: cfg.recorders.clone(),
        times: (0..=nt).map(|n| n as f64 * k).collect(),
        values: rec_idx.iter().map(|&j| u.iter().map(|row| row[j]).collect()).collect(),
        energy: Vec::new(),
    };
    Ok(DuhamelResult { series, iterations, v_sup, nu, increment_profiles: profiles, step: k })
}

/// One application `u_free − ½D[V u]`.
fn duhamel_map(free: &[Vec<f64>], u: &[Vec<f64>], v: &[f64], k: f64) -> Vec<Vec<f64>> {
    let nt = free.len() - 1;
    let nx = v.len();
    let q: Vec<Vec<f64>> = u.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).collect()).collect();
    let get = |row: &[f64], j: i64| -> f64 { if j < 0 || j >= nx as i64 { 0.0 } else { row[j as usize] } };
    let mut out = Vec::with_capacity(nt + 1);
    out.push(free[0].clone());
    if nt == 0 {
        return out;
    }
    let mut d_prev = vec![0.0; nx];
    // First level: triangle (x∓k, 0), (x, k) of area k².
    let mut d_cur: Vec<f64> = (0..nx as i64)
        .map(|j| k * k * (get(&q[0], j - 1) + get(&q[0], j + 1) + get(&q[1], j)) / 3.0)
        .collect();
    out.push(free[1].iter().zip(&d_cur).map(|(f, d)| f - 0.5 * d).collect());
    let area = 2.0 * k * k;
    for n in 1..nt {
        let d_next: Vec<f64> = (0..nx as i64)
            .map(|j| {
                let diamond = area
                    * (2.0 / 3.0 * get(&q[n], j)
                        + (get(&q[n], j - 1) + get(&q[n], j + 1) + get(&q[n - 1], j) + get(&q[n + 1], j)) / 12.0);
                get(&d_cur, j - 1) + get(&d_cur, j + 1) - get(&d_prev, j) + diamond
            })
            .collect();
        out.push(free[n + 1].iter().zip(&d_next).map(|(f, d)| f - 0.5 * d).collect());
        d_prev = core::mem::replace(&mut d_cur, d_next);
    }
    out
}

/// Power-law fit of a recorded series.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    /// Recorder position.
    pub x0: f64,
    /// Fitted decay exponent `α` in `|ψ| ~ t^{−α}`.
    pub exponent: f64,
    /// Standard error of the exponent.
    pub stderr: f64,
    /// Exponent fit window.
    pub window: (f64, f64),
    /// Weighted RMS residual of the log-log fit.
    pub fit_residual: f64,
    /// Integer exponent used for the amplitude.
    pub rounded_exponent: i32,
    /// Mean of `t^{n}ψ` over the amplitude window (`n` the rounded exponent).
    pub amplitude: f64,
    /// Amplitude window.
    pub amplitude_window: (f64, f64),
    /// `(max − min)/|mean|` of `t^{n}ψ` over the amplitude window.
    pub amplitude_variation: f64,
    /// Local exponent `p(t) = −d ln|ψ|/d ln t` on log-spaced times.
    pub local_exponent: Vec<(f64, f64)>,
}

/// Number of points of the local-exponent curve.
pub const LOCAL_EXPONENT_POINTS: usize = 200;

/// Samples inside `[lo, hi]` with trapezoid weights in `ln t` (so that the
/// fit is not dominated by the densely sampled late times).
fn log_weighted(samples: &[(f64, f64)], lo: f64, hi: f64) -> Vec<(f64, f64, f64)> {
    let inside: Vec<(f64, f64)> = samples.iter().copied().filter(|s| s.0 >= lo && s.0 <= hi).collect();
    let n = inside.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { inside[i].0.ln() - inside[i - 1].0.ln() } else { 0.0 };
            let right = if i + 1 < n { inside[i + 1].0.ln() - inside[i].0.ln() } else { 0.0 };
            (inside[i].0, inside[i].1, 0.5 * (left + right))
        })
        .collect()
}

/// Fit `|ψ| ~ A t^{−α}` on `window` (least squares in `ln t` with
/// log-trapezoid weights) and estimate the amplitude on `amplitude_window`
/// (defaults to `window`).
///
/// Fails when `ψ` changes sign (or vanishes) inside either window — a sign
/// that oscillatory transients still dominate and the window should shrink.
pub fn decay_fit(x0: f64, samples: &[(f64, f64)], window: (f64, f64), amplitude_window: Option<(f64, f64)>) -> Result<DecayReport> {
    if samples.len() < 3 || samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(invalid!("decay fit needs ≥ 3 samples with increasing times"));
    }
    let (t_first, t_last) = (samples[0].0, samples[samples.len() - 1].0);
    let aw = amplitude_window.unwrap_or(window);
    for (lo, hi) in [window, aw] {
        if !(lo > 0.0 && hi > lo && lo >= t_first && hi <= t_last * (1.0 + 1e-12)) {
            return Err(invalid!("window [{lo}, {hi}] outside the sampled range [{t_first}, {t_last}]"));
        }
    }
    let check_sign = |lo: f64, hi: f64| -> Result<()> {
        let inside: Vec<f64> = samples.iter().filter(|s| s.0 >= lo && s.0 <= hi).map(|s| s.1).collect();
        let pos = inside.iter().any(|&v| v > 0.0);
        let neg = inside.iter().any(|&v| v < 0.0);
        if (pos && neg) || inside.iter().any(|&v| v == 0.0) {
            return Err(Error::Fit(alloc::format!(
                "ψ changes sign or vanishes inside [{lo}, {hi}]: oscillations not yet decayed, shrink or move the window"
            )));
        }
        Ok(())
    };
    check_sign(window.0, window.1)?;
    check_sign(aw.0, aw.1)?;

    let pts = log_weighted(samples, window.0, window.1);
    if pts.len() < 3 {
        return Err(Error::Fit(alloc::format!("fewer than 3 samples inside [{}, {}]", window.0, window.1)));
    }
    let rows: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.2.sqrt(), p.2.sqrt() * p.0.ln()]).collect();
    let rhs: Vec<f64> = pts.iter().map(|p| p.2.sqrt() * p.1.abs().ln()).collect();
    let fit = lsq::solve(&rows, &rhs)?;
    let slope = fit.coef[1];
    let wsum: f64 = pts.iter().map(|p| p.2).sum();
    let mean_l = pts.iter().map(|p| p.2 * p.0.ln()).sum::<f64>() / wsum;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0.ln() - mean_l).powi(2)).sum();
    let ssr: f64 = pts.iter().map(|p| p.2 * (p.1.abs().ln() - fit.coef[0] - slope * p.0.ln()).powi(2)).sum();
    let n = pts.len() as f64;
    let stderr = (ssr / sxx / (n - 2.0)).sqrt();
    let fit_residual = (ssr / wsum).sqrt();

    let exponent = -slope;
    let rounded = exponent.round() as i32;
    let apts = log_weighted(samples, aw.0, aw.1);
    if apts.is_empty() {
        return Err(Error::Fit(alloc::format!("no samples inside [{}, {}]", aw.0, aw.1)));
    }
    let aw_sum: f64 = apts.iter().map(|p| p.2).sum();
    let scaled: Vec<f64> = apts.iter().map(|p| p.0.powi(rounded) * p.1).collect();
    let amplitude = if aw_sum > 0.0 {
        apts.iter().zip(&scaled).map(|(p, v)| p.2 * v).sum::<f64>() / aw_sum
    } else {
        scaled[0]
    };
    let (mn, mx) = scaled.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let amplitude_variation = if amplitude == 0.0 { f64::INFINITY } else { (mx - mn) / amplitude.abs() };

    // Local exponent from raw samples picked near log-spaced times.
    let t_lo = samples.iter().find(|s| s.0 > 0.0).map(|s| s.0).unwrap_or(window.0).max(t_last * 1e-3);
    let mut picks: Vec<usize> = (0..LOCAL_EXPONENT_POINTS)
        .map(|i| {
            let t = t_lo * (t_last / t_lo).powf(i as f64 / (LOCAL_EXPONENT_POINTS - 1) as f64);
            samples.partition_point(|s| s.0 < t).min(samples.len() - 1)
        })
        .collect();
    picks.dedup();
    let local_exponent = picks
        .windows(3)
        .map(|w| {
            let (a, b, c) = (samples[w[0]], samples[w[1]], samples[w[2]]);
            let p = -((c.1.abs().max(1e-300)).ln() - (a.1.abs().max(1e-300)).ln()) / (c.0.ln() - a.0.ln());
            (b.0, p)
        })
        .collect();

    Ok(DecayReport {
        x0,
        exponent,
        stderr,
        window,
        fit_residual,
        rounded_exponent: rounded,
        amplitude,
        amplitude_window: aw,
        amplitude_variation,
        local_exponent,
    })
}
