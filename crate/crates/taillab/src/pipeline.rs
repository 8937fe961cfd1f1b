//! Stage orchestration: spectral check → frequency-domain objects → inverse
//! Laplace transform → time-domain oracle → reports.

use std::f64::consts::PI;

use taillab_core::ilt::{reconstruct_time_solution, ReconstructOptions, VerticalLine};
use taillab_core::jost::{check_spectral_assumptions, solve_s, Frequency, JostConfig, JostPair, JostSolution, SpectralOptions, SpectralStatus};
use taillab_core::numerics::fd;
use taillab_core::potential::{PotentialSpec, Side};
use taillab_core::series::{bound_ratio, f_sequence, ray_grid, reconstruct_s, SeriesOptions};
use taillab_core::timedomain::{decay_fit, leapfrog_solve, DecayReport, InitialData, SimulationConfig, Slot, TimeSeries};

use crate::config::{ExperimentConfig, Stage};
use crate::error::Failure;
use crate::output::{kv_block, num, ArtifactDir, Table};
use crate::pool::RayonMap;

/// Software version recorded in every run record.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rows of the exported `F_j` tables are thinned to every n-th radius.
const FJ_STRIDE: usize = 25;

/// Result of a run: the human-readable summary, artifact names, and the
/// failure that stopped it, if any.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Summary text (also written to `summary.txt`).
    pub summary: String,
    /// Artifact file names, in the order written.
    pub artifacts: Vec<String>,
    /// Failure that aborted the pipeline.
    pub failure: Option<Failure>,
}

impl RunOutcome {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        self.failure.as_ref().map_or(0, Failure::exit_code)
    }
}

/// Exponent predicted for the configured data: the tail exponent of the
/// potential for `ψ₁` data, one more for `ψ₀` data.
pub fn predicted_exponent(spec: &PotentialSpec, which: Slot) -> f64 {
    let alpha = spec.decay_exponent();
    match which {
        Slot::Psi1 => alpha,
        Slot::Psi0 => alpha + 1.0,
    }
}

/// Verdict tolerance on the fitted exponent.
pub fn verdict_tolerance(predicted: f64) -> f64 {
    (0.05 * predicted).max(0.2)
}

fn fmt_exponent(p: f64) -> String {
    if (p - p.round()).abs() < 1e-12 {
        format!("{}", p.round() as i64)
    } else {
        format!("{p:.3}")
    }
}

/// One-line verdict on a decay fit.
pub fn verdict(report: &DecayReport, predicted: f64, which: Slot) -> String {
    let data = if which == Slot::Psi1 { "ψ₁ (sine) data" } else { "ψ₀ (cosine) data" };
    let fit = format!(
        "fitted {:.4} ± {:.4} on t ∈ [{}, {}]; predicted ⟨t⟩^(-{}) for {data}",
        report.exponent,
        report.stderr,
        report.window.0,
        report.window.1,
        fmt_exponent(predicted)
    );
    if (report.exponent - predicted).abs() <= verdict_tolerance(predicted) {
        format!("decay verdict: exponent ≈ {} — consistent ({fit})", fmt_exponent(predicted))
    } else {
        format!("decay verdict: exponent ≈ {:.2} — INCONSISTENT with the prediction ({fit})", report.exponent)
    }
}

/// Human-readable statement of the spectral assumption.
pub const SPECTRAL_ASSUMPTION: &str = "the late-time analysis requires that −d²/dx² + V has no bound states \
(no negative eigenvalues, i.e. no zero of W(ε) for ε > 0) and no zero-energy resonance (W(0) ≠ 0)";

struct Run<'a> {
    cfg: &'a ExperimentConfig,
    spec: PotentialSpec,
    data: InitialData,
    pool: &'a RayonMap,
    out: ArtifactDir,
    summary: Vec<String>,
    ilt: Option<Vec<(f64, f64)>>,
    series: Option<TimeSeries>,
    decay: Option<DecayReport>,
}

/// Execute the configured stages and write all artifacts into `output_dir`.
/// `command` is recorded in the run record. Validation happens before any
/// file is created.
pub fn run(cfg: &ExperimentConfig, command: &str, pool: &RayonMap) -> Result<RunOutcome, Failure> {
    let spec = cfg.potential.build()?;
    let data = cfg.initial_data.build()?;
    if cfg.pipeline.is_empty() {
        return Err(Failure::validation("empty pipeline: nothing to run"));
    }
    let out = ArtifactDir::create(&cfg.output_dir)?;
    let mut r = Run { cfg, spec, data, pool, out, summary: Vec::new(), ilt: None, series: None, decay: None };
    r.summary.push(format!("taillab {VERSION} — {command}"));
    r.summary.push(format!(
        "potential: {:?}, m = {}, v+ = {}, v− = {}, tail exponent {}",
        r.spec.family(),
        r.spec.m(),
        r.spec.v_plus(),
        r.spec.v_minus(),
        fmt_exponent(r.spec.decay_exponent())
    ));
    let mut failure = None;
    for &stage in &cfg.pipeline {
        let res = match stage {
            Stage::Spectral => r.spectral(),
            Stage::Series => r.series_stage(),
            Stage::Ilt => r.ilt_stage(),
            Stage::Simulate => r.simulate(),
            Stage::Decay => r.decay_stage(),
        };
        if let Err(f) = res {
            r.summary.push(format!("ABORTED in stage `{}`: {f}", stage.name()));
            failure = Some(f.in_stage(stage.name()));
            break;
        }
    }
    if failure.is_none() {
        if let Err(f) = r.reports() {
            r.summary.push(format!("ABORTED while writing reports: {f}"));
            failure = Some(f.in_stage("reports"));
        }
    }
    let status = failure.as_ref().map_or("ok".to_string(), |f| format!("exit {}", f.exit_code()));
    r.summary.push(format!("status: {status}"));
    let summary = r.summary.join("\n") + "\n";
    r.out.text("summary.txt", &summary)?;
    let mut artifacts = r.out.written().to_vec();
    artifacts.push("run_record.txt".into());
    let record = kv_block(&[
        ("taillab_version", VERSION.to_string()),
        ("command", command.to_string()),
        ("status", status),
        ("artifacts", artifacts.join(", ")),
    ]) + "\n# resolved configuration\n"
        + &cfg.resolved();
    r.out.text("run_record.txt", &record)?;
    Ok(RunOutcome { summary, artifacts: r.out.written().to_vec(), failure })
}

fn uniform(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h).round() as usize;
    (0..=n).map(|i| a + h * i as f64).collect()
}

fn jost_table(j: &JostSolution, spec: &PotentialSpec) -> Table {
    let mut t = Table::new(&["x", "re_y", "im_y", "re_s", "im_s", "residual"]);
    let d2 = fd::derivative(&j.grid, &j.y, 2, 7);
    let e2 = j.epsilon.value() * j.epsilon.value();
    for i in 0..j.grid.len() {
        let x = j.grid[i];
        let res = (d2[i] - (e2 + spec.evaluate(x)) * j.y[i]).norm() / j.y[i].norm().max(f64::MIN_POSITIVE);
        t.push(&[x, j.y[i].re, j.y[i].im, j.s[i].re, j.s[i].im, res]);
    }
    t
}

impl Run<'_> {
    fn spectral(&mut self) -> Result<(), Failure> {
        let n = &self.cfg.numeric;
        let opts = SpectralOptions {
            scan_points: n.scan_points,
            eps_lo: n.eps_lo,
            resonance_threshold: n.resonance_threshold,
            ..SpectralOptions::default()
        };
        let status = check_spectral_assumptions(&self.spec, &opts).map_err(|e| Failure::numeric(e.to_string()))?;
        let (kind, detail) = match status {
            SpectralStatus::Ok { w0 } => ("ok", vec![("w0", num(w0))]),
            SpectralStatus::BoundState { eps0 } => ("bound_state", vec![("eps0", num(eps0)), ("energy", num(-eps0 * eps0))]),
            SpectralStatus::Resonance { w0 } => ("zero_resonance", vec![("w0", num(w0))]),
        };
        let mut pairs = vec![("status", kind.to_string())];
        pairs.extend(detail);
        pairs.push(("scan_points", n.scan_points.to_string()));
        pairs.push(("eps_lo", num(n.eps_lo)));
        pairs.push(("resonance_threshold", num(n.resonance_threshold)));
        self.out.text("spectral.txt", &kv_block(&pairs))?;

        match status {
            SpectralStatus::Ok { w0 } => {
                self.summary.push(format!("spectral: no bound state, no zero resonance (W(0) ≈ {w0:.6e})"));
            }
            SpectralStatus::BoundState { eps0 } => {
                let msg = format!(
                    "bound state found: W(ε₀) = 0 at ε₀ = {eps0:.6}, eigenvalue −ε₀² = {:.6}; {SPECTRAL_ASSUMPTION}",
                    -eps0 * eps0
                );
                return Err(Failure::Spectral(msg));
            }
            SpectralStatus::Resonance { w0 } => {
                let msg = format!("zero-energy resonance: |W(0)| ≈ {:.3e} below threshold; {SPECTRAL_ASSUMPTION}", w0.abs());
                return Err(Failure::Spectral(msg));
            }
        }

        let eps = Frequency::real(n.diagnostic_eps)?;
        let reach = 4.0 * self.spec.x_plus().abs().max(self.spec.x_minus().abs()) + 10.0;
        let grid = uniform(-reach, reach, 0.05);
        let pair = JostPair::solve(&self.spec, eps, &grid, &JostConfig::default()).map_err(|e| Failure::numeric(e.to_string()))?;
        let w = pair.wronskian()?;
        self.out.table("jost_plus.csv", &jost_table(&pair.plus, &self.spec))?;
        self.out.table("jost_minus.csv", &jost_table(&pair.minus, &self.spec))?;
        self.summary.push(format!(
            "jost: ε = {}, W = {:.10e}, relative x-spread of W = {:.2e}",
            n.diagnostic_eps,
            w.value.re,
            w.relative_spread()
        ));
        Ok(())
    }

    fn series_stage(&mut self) -> Result<(), Failure> {
        let n = &self.cfg.numeric;
        let m = self.spec.m();
        let v1 = self.spec.v_plus();
        let j_max = n.series_j_max.unwrap_or(m + 5);
        if j_max < m - 1 {
            return Err(Failure::validation(format!("series_j_max must be ≥ m − 1 = {}", m - 1)));
        }
        let r = ray_grid(50.0, 0.004, 1e-6, &[]);
        let mut table = Table::new(&["theta", "j", "r", "re_f", "im_f"]);
        let mut worst: f64 = 0.0;
        for theta in [0.0, PI / 3.0, 2.0 * PI / 3.0] {
            let fs = f_sequence(m, v1, theta, &r, j_max).map_err(|e| Failure::numeric(e.to_string()))?;
            for (k, f) in fs.iter().enumerate() {
                let j = m - 1 + k as u32;
                worst = worst.max(bound_ratio(f, m, j, v1, 1e-3));
                for i in (0..f.r.len()).step_by(FJ_STRIDE) {
                    table.push_raw(vec![num(theta), j.to_string(), num(f.r[i]), num(f.values[i].re), num(f.values[i].im)]);
                }
            }
        }
        self.out.table("series_fj.csv", &table)?;

        let (x, e) = (n.series_x.unwrap_or(20.0), n.series_eps.unwrap_or(0.02));
        let eps = Frequency::real(e)?;
        let lap = reconstruct_s(&self.spec, eps, x, &SeriesOptions::default()).map_err(|e| Failure::numeric(e.to_string()))?;
        let sol = solve_s(&self.spec, eps, Side::Plus, &[x], &JostConfig::default()).map_err(|e| Failure::numeric(e.to_string()))?;
        let i = sol.grid.iter().position(|&g| g == x).ok_or_else(|| Failure::numeric("requested x missing from the Jost grid"))?;
        let direct = sol.s[i];
        let rel = (lap.s - direct).norm() / direct.norm().max(f64::MIN_POSITIVE);
        self.out.text(
            "series.txt",
            &kv_block(&[
                ("j_max_exported", j_max.to_string()),
                ("max_bound_ratio", num(worst)),
                ("x", num(x)),
                ("eps", num(e)),
                ("s_laplace_re", num(lap.s.re)),
                ("s_laplace_im", num(lap.s.im)),
                ("s_picard_re", num(direct.re)),
                ("s_picard_im", num(direct.im)),
                ("relative_difference", num(rel)),
                ("terms_kept", lap.j_max.to_string()),
            ]),
        )?;
        self.summary.push(format!(
            "series: max |F_j|/bound = {worst:.3} (j ≤ {j_max}, three rays); s(x={x}, ε={e}) Laplace vs Picard relative difference {rel:.2e}"
        ));
        Ok(())
    }

    fn ilt_stage(&mut self) -> Result<(), Failure> {
        let n = &self.cfg.numeric;
        let times = n.ilt_times.clone().unwrap_or_default();
        let h = n.ilt_h;
        let x0 = n.x0;
        let (a, b) = self.data.support();
        let lo = ((a.min(x0) - 2.0 - x0) / h).floor() as i64;
        let hi = ((b.max(x0) + 2.0 - x0) / h).ceil() as i64;
        let grid: Vec<f64> = (lo..=hi).map(|k| x0 + k as f64 * h).collect();
        let (psi0, psi1) = self.data.grid_functions(&grid)?;
        let opts = ReconstructOptions { line: VerticalLine { tol: n.ilt_tol, ..VerticalLine::default() }, ..ReconstructOptions::default() };
        let v = reconstruct_time_solution(&self.spec, &psi0, &psi1, x0, &times, &opts, self.pool)
            .map_err(|e| Failure::numeric(e.to_string()))?;
        self.ilt = Some(times.iter().zip(&v).map(|(&t, z)| (t, z.re)).collect());
        self.summary.push(format!(
            "ilt: ψ(x₀={x0}, t) reconstructed at {} times from the resolvent on {} grid points ({} worker threads)",
            times.len(),
            grid.len(),
            self.pool.threads()
        ));
        Ok(())
    }

    fn simulate(&mut self) -> Result<(), Failure> {
        let n = &self.cfg.numeric;
        let sim = SimulationConfig {
            half_width: self.cfg.half_width()?,
            h: n.h.unwrap_or(0.05),
            courant: n.courant,
            t_final: n.t_final.unwrap_or(0.0),
            recorders: vec![n.x0],
            record_every: n.record_every,
        };
        let ts = leapfrog_solve(&self.spec, &self.data, &sim)?;
        let mut table = Table::new(&["t", "psi"]);
        for (t, v) in ts.times.iter().zip(&ts.values[0]) {
            table.push(&[*t, *v]);
        }
        self.out.table("timeseries.csv", &table)?;
        self.summary.push(format!(
            "simulate: leapfrog L = {}, h = {}, λ = {}, T = {}; relative energy drift {:.2e}",
            sim.half_width,
            sim.h,
            sim.courant,
            sim.t_final,
            ts.energy_drift()
        ));
        self.series = Some(ts);
        Ok(())
    }

    fn decay_stage(&mut self) -> Result<(), Failure> {
        let ts = self.series.as_ref().ok_or_else(|| Failure::validation("decay needs the simulate stage"))?;
        let x0 = self.cfg.numeric.x0;
        let samples = ts.samples(0);
        let rep = decay_fit(x0, &samples, self.cfg.fit_window(), Some(self.cfg.amplitude_window()))?;
        let predicted = predicted_exponent(&self.spec, self.cfg.initial_data.which);
        let line = verdict(&rep, predicted, self.cfg.initial_data.which);
        let pairs = [
            ("x0", num(rep.x0)),
            ("exponent", num(rep.exponent)),
            ("stderr", num(rep.stderr)),
            ("window_lo", num(rep.window.0)),
            ("window_hi", num(rep.window.1)),
            ("fit_residual", num(rep.fit_residual)),
            ("rounded_exponent", rep.rounded_exponent.to_string()),
            ("amplitude", num(rep.amplitude)),
            ("amplitude_window_lo", num(rep.amplitude_window.0)),
            ("amplitude_window_hi", num(rep.amplitude_window.1)),
            ("amplitude_variation", num(rep.amplitude_variation)),
            ("predicted_exponent", num(predicted)),
        ];
        self.out.text("decay_report.txt", &kv_block(&pairs))?;
        let mut row = Table::new(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
        row.push_raw(pairs.iter().map(|p| p.1.clone()).collect());
        self.out.table("decay_report.csv", &row)?;
        let mut curve = Table::new(&["t", "p"]);
        for &(t, p) in &rep.local_exponent {
            curve.push(&[t, p]);
        }
        self.out.table("local_exponent.csv", &curve)?;
        self.summary.push(line);
        self.summary.push(format!(
            "amplitude: t^{} ψ ≈ {:.6e} on [{}, {}], relative variation {:.3}",
            rep.rounded_exponent, rep.amplitude, rep.amplitude_window.0, rep.amplitude_window.1, rep.amplitude_variation
        ));
        self.decay = Some(rep);
        Ok(())
    }

    fn reports(&mut self) -> Result<(), Failure> {
        let Some(ilt) = self.ilt.clone() else { return Ok(()) };
        let mut table = Table::new(&["t", "psi", "predicted_tail", "ratio"]);
        for &(t, v) in &ilt {
            let pred = self.decay.as_ref().map_or(f64::NAN, |d| d.amplitude * t.powi(-d.rounded_exponent));
            table.push(&[t, v, pred, v / pred]);
        }
        self.out.table("ilt.csv", &table)?;
        if let Some(ts) = &self.series {
            let samples = ts.samples(0);
            let peak = samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
            let mut worst: f64 = 0.0;
            let mut compared = 0;
            for &(t, v) in &ilt {
                if let Some(o) = interpolate(&samples, t) {
                    worst = worst.max((v - o).abs());
                    compared += 1;
                }
            }
            if compared > 0 && peak > 0.0 {
                self.summary.push(format!(
                    "ilt vs leapfrog: max |Δψ|/peak = {:.2e} over {compared} times (peak |ψ| = {peak:.4e})",
                    worst / peak
                ));
            }
        }
        Ok(())
    }
}

fn interpolate(samples: &[(f64, f64)], t: f64) -> Option<f64> {
    let i = samples.partition_point(|s| s.0 < t);
    if i < samples.len() && (samples[i].0 - t).abs() < 1e-9 {
        return Some(samples[i].1);
    }
    if i == 0 || i >= samples.len() {
        return None;
    }
    let (a, b) = (samples[i - 1], samples[i]);
    Some(a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0))
}
