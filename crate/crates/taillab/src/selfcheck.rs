//! Fast consistency suite over the closed-form cases: free propagation,
//! free resolvent, elementary inverse Laplace pairs and the first `F_j`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64 as C;
use taillab_core::ilt::{bromwich, VerticalLine};
use taillab_core::jost::Frequency;
use taillab_core::numerics::gk;
use taillab_core::potential::PotentialSpec;
use taillab_core::resolvent::{free_g0, green_apply, GridFunction, ResolventConfig};
use taillab_core::series::{f_initial, ray_grid};
use taillab_core::timedomain::{duhamel_solve, leapfrog_solve, DuhamelConfig, InitialData, Profile, SimulationConfig, Slot};

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct Check {
    /// Short name.
    pub name: &'static str,
    /// The invariant being verified.
    pub invariant: &'static str,
    /// Observed error (or `None` if the check could not run).
    pub observed: Option<f64>,
    /// Admissible error.
    pub tolerance: f64,
    /// Failure detail.
    pub detail: String,
}

impl Check {
    /// Whether the invariant holds.
    pub fn passed(&self) -> bool {
        self.observed.is_some_and(|e| e <= self.tolerance)
    }

    /// One report line.
    pub fn line(&self) -> String {
        match (self.passed(), self.observed) {
            (true, Some(e)) => format!("ok    {:<28} error {e:.2e} ≤ {:.0e}", self.name, self.tolerance),
            (_, Some(e)) => format!("FAIL  {:<28} violated: {} (error {e:.2e} > {:.0e})", self.name, self.invariant, self.tolerance),
            (_, None) => format!("FAIL  {:<28} violated: {} ({})", self.name, self.invariant, self.detail),
        }
    }
}

/// Result of [`selfcheck`].
#[derive(Debug, Clone)]
pub struct SelfcheckReport {
    /// Individual checks.
    pub checks: Vec<Check>,
    /// Wall time in seconds.
    pub seconds: f64,
}

impl SelfcheckReport {
    /// All checks passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Multi-line report.
    pub fn render(&self) -> String {
        let mut s: String = self.checks.iter().map(|c| c.line() + "\n").collect();
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        s += &format!("{} checks, {failed} failed, {:.1} s\n", self.checks.len(), self.seconds);
        s
    }
}

type Measured = Result<f64, String>;

fn check(name: &'static str, invariant: &'static str, tolerance: f64, f: impl FnOnce() -> Measured) -> Check {
    match f() {
        Ok(e) => Check { name, invariant, observed: Some(e), tolerance, detail: String::new() },
        Err(d) => Check { name, invariant, observed: None, tolerance, detail: d },
    }
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn free_leapfrog() -> Measured {
    let data = InitialData::new(Profile::Bump { centre: 0.0, width: 2.0 }, Slot::Psi0).map_err(s)?;
    let cfg = SimulationConfig { half_width: 8.0, h: 0.0025, courant: 0.5, t_final: 3.0, recorders: vec![0.0, 3.0], record_every: 1 };
    let ts = leapfrog_solve(&PotentialSpec::zero(), &data, &cfg).map_err(s)?;
    let mut worst: f64 = 0.0;
    for (r, &x) in cfg.recorders.iter().enumerate() {
        for (t, u) in ts.times.iter().zip(&ts.values[r]) {
            let exact = 0.5 * (data.psi0(x - t) + data.psi0(x + t));
            worst = worst.max((u - exact).abs());
        }
    }
    Ok(worst)
}

fn free_duhamel() -> Measured {
    let data = InitialData::new(Profile::Gaussian { centre: 1.0, width: 0.5 }, Slot::Psi1).map_err(s)?;
    let dc = DuhamelConfig { t_final: 2.0, step: 0.01, ..DuhamelConfig::default() };
    let r = duhamel_solve(&PotentialSpec::zero(), &data, &dc).map_err(s)?;
    if r.iterations != 1 {
        return Err(format!("{} iterations for V = 0", r.iterations));
    }
    let last = *r.series.values[0].last().ok_or("empty series")?;
    let exact = 0.5 * gk::integrate(|y: f64| data.psi1(y), -2.0, 2.0, Default::default()).map_err(s)?;
    Ok((last - exact).abs())
}

fn free_resolvent() -> Measured {
    let n = 1200;
    let grid: Vec<f64> = (0..=n).map(|i| -6.0 + 0.01 * i as f64).collect();
    let f = GridFunction::sample(grid, |x| (-(x - 1.0) * (x - 1.0) / 0.5).exp()).map_err(s)?;
    let mut worst: f64 = 0.0;
    for e in [C::new(0.5, 0.0), C::new(1.0, 2.0)] {
        let eps = Frequency::new(e).map_err(s)?;
        let u = green_apply(&PotentialSpec::zero(), eps, &f, &ResolventConfig::default()).map_err(s)?;
        // 𝒢₀ carries the factor 1/(2(1+ε)); the free resolvent has 1/(2ε).
        let g0 = free_g0(eps, &f);
        let factor = (e + 1.0) / e;
        let scale = g0.sup_norm() * factor.norm();
        for (a, b) in u.values().iter().zip(g0.values()) {
            worst = worst.max((a - b * factor).norm() / scale);
        }
    }
    Ok(worst)
}

fn elementary_pairs() -> Measured {
    let line = VerticalLine::cycle();
    let one = C::new(1.0, 0.0);
    let mut worst: f64 = 0.0;
    let cases: [(Box<dyn Fn(C) -> taillab_core::Result<C> + Sync>, f64, f64); 3] = [
        (Box::new(move |e: C| Ok(one / (e + 1.0))), 2.0, (-2.0f64).exp()),
        (Box::new(move |e: C| Ok(one / (e * e))), 3.0, 3.0),
        (Box::new(|e: C| Ok((e + 1.0).powf(-0.5) * PI.sqrt())), 5.0, (-5.0f64).exp() / 5.0f64.sqrt()),
    ];
    for (f, t, exact) in cases {
        let v = bromwich(&f, t, &line, true).map_err(s)?;
        worst = worst.max((v.re - exact).abs() / exact);
    }
    Ok(worst)
}

fn first_fj() -> Measured {
    let r = ray_grid(10.0, 0.01, 1e-4, &[]);
    let mut worst: f64 = 0.0;
    for m in [3u32, 4, 5] {
        let fact: f64 = (1..m).map(f64::from).product();
        for theta in [0.0, PI / 3.0, 2.0 * PI / 3.0] {
            let f = f_initial(m, 1.0, theta, &r);
            for i in 1..r.len() {
                let exact = f.tau(i).powu(m - 1) / fact;
                worst = worst.max((f.values[i] - exact).norm() / exact.norm());
            }
        }
    }
    Ok(worst)
}

/// Run every check.
pub fn selfcheck() -> SelfcheckReport {
    let start = Instant::now();
    let checks = vec![
        check("free leapfrog", "V = 0 leapfrog reproduces d'Alembert's formula", 1e-4, free_leapfrog),
        check("free duhamel", "V = 0 Duhamel iteration is d'Alembert in one step", 1e-10, free_duhamel),
        check("free resolvent", "Jost-built Green operator equals the closed-form free kernel", 1e-8, free_resolvent),
        check("elementary transform pairs", "Bromwich integral inverts 1/(ε+1), 1/ε², Γ(1/2)(ε+1)^(-1/2)", 1e-4, elementary_pairs),
        check("first F_j", "F_{m−1}(τ) = τ^{m−1}/(m−1)! for m = 3, 4, 5 on three rays", 1e-14, first_fj),
    ];
    SelfcheckReport { checks, seconds: start.elapsed().as_secs_f64() }
}
