//! Experiment configuration files.
//!
//! The grammar is a flat INI dialect:
//!
//! ```text
//! line     = blank | comment | section | entry
//! comment  = ("#" | ";") any-text          (whole lines only)
//! section  = "[" name "]"
//! entry    = key "=" value                  (surrounding whitespace trimmed)
//! list     = item { "," item }              (for list-valued keys)
//! ```
//!
//! Entries before the first section belong to the root, which only knows
//! `output_dir`. Unknown sections or keys, duplicate keys and unparsable
//! values are validation errors. See the README for every key.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use taillab_core::potential::{PotentialSpec, PowerTerm};
use taillab_core::timedomain::{InitialData, Profile, Slot};

use crate::data::random_profile;
use crate::error::Failure;

/// Pipeline stages in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    /// Bound-state / zero-resonance scan and Jost diagnostics.
    Spectral,
    /// `F_j` recurrence and the cross-check of `s`.
    Series,
    /// Inverse Laplace reconstruction of `ψ(x₀, t)`.
    Ilt,
    /// Leapfrog oracle.
    Simulate,
    /// Decay-exponent fit of the simulated series.
    Decay,
}

impl Stage {
    /// All stages in dependency order.
    pub const ALL: [Stage; 5] = [Stage::Spectral, Stage::Series, Stage::Ilt, Stage::Simulate, Stage::Decay];

    /// Config-file name.
    pub fn name(self) -> &'static str {
        match self {
            Stage::Spectral => "spectral",
            Stage::Series => "series",
            Stage::Ilt => "ilt",
            Stage::Simulate => "simulate",
            Stage::Decay => "decay",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|st| st.name() == s)
    }
}

/// Potential family keyword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// `v± |x|^{−m}` tails.
    Pure,
    /// `v± Σ c_k |x|^{−α_k}` tails.
    Sum,
    /// `v± |x|^{−m} + c |x|^{−p}` tails.
    Correction,
}

impl FamilyKind {
    fn name(self) -> &'static str {
        match self {
            FamilyKind::Pure => "pure",
            FamilyKind::Sum => "sum",
            FamilyKind::Correction => "correction",
        }
    }
}

/// `[potential]` section.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialConfig {
    /// Family.
    pub family: FamilyKind,
    /// Leading exponent `m ≥ 3`.
    pub m: u32,
    /// Right tail coefficient.
    pub v_plus: f64,
    /// Left tail coefficient.
    pub v_minus: f64,
    /// Right cutoff.
    pub x_plus: f64,
    /// Left cutoff.
    pub x_minus: f64,
    /// Bridge depth (`None`: default of the core crate).
    pub depth: Option<f64>,
    /// `(α_k, c_k)` for the sum family.
    pub sum_terms: Vec<(f64, f64)>,
    /// Correction exponent `p`.
    pub correction_exponent: Option<f64>,
    /// Correction coefficient.
    pub correction_coeff: f64,
}

impl PotentialConfig {
    /// Build the core potential.
    pub fn build(&self) -> Result<PotentialSpec, Failure> {
        let mut b = PotentialSpec::builder(self.m).tails(self.v_plus, self.v_minus).cutoffs(self.x_plus, self.x_minus);
        if let Some(d) = self.depth {
            b = b.depth(d);
        }
        match self.family {
            FamilyKind::Pure => {}
            FamilyKind::Sum => {
                let terms: Vec<PowerTerm> = self.sum_terms.iter().map(|&(alpha, coeff)| PowerTerm { alpha, coeff }).collect();
                b = b.sum_terms(&terms);
            }
            FamilyKind::Correction => {
                let p = self.correction_exponent.ok_or_else(|| Failure::validation("correction family needs potential.correction_exponent"))?;
                b = b.correction(p, self.correction_coeff);
            }
        }
        b.build().map_err(|e| Failure::validation(format!("potential: {e}")))
    }
}

/// Initial-data kind keyword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    /// Smooth compact bump.
    Bump,
    /// Gaussian (truncated at 8σ).
    Gaussian,
    /// Seeded random sum of three Gaussians.
    Random,
}

/// `[initial_data]` section.
#[derive(Debug, Clone, PartialEq)]
pub struct DataConfig {
    /// Profile kind.
    pub kind: DataKind,
    /// Centre.
    pub center: f64,
    /// Width (bump half-width, Gaussian σ, or spread of random centres).
    pub width: f64,
    /// Slot receiving the profile.
    pub which: Slot,
    /// Seed of the random kind.
    pub seed: u64,
}

impl DataConfig {
    /// Build the core initial data.
    pub fn build(&self) -> Result<InitialData, Failure> {
        let profile = match self.kind {
            DataKind::Bump => Profile::Bump { centre: self.center, width: self.width },
            DataKind::Gaussian => Profile::Gaussian { centre: self.center, width: self.width },
            DataKind::Random => random_profile(self.seed, self.center, self.width),
        };
        InitialData::new(profile, self.which).map_err(|e| Failure::validation(format!("initial_data: {e}")))
    }
}

/// `[numeric]` section (stage-specific keys are `None` when absent).
#[derive(Debug, Clone, PartialEq)]
pub struct NumericConfig {
    /// Observation point.
    pub x0: f64,
    /// Spectral scan points.
    pub scan_points: usize,
    /// Lowest scan frequency.
    pub eps_lo: f64,
    /// Relative zero-resonance threshold.
    pub resonance_threshold: f64,
    /// Frequency of the exported Jost profiles.
    pub diagnostic_eps: f64,
    /// Position of the `s` cross-check.
    pub series_x: Option<f64>,
    /// Frequency of the `s` cross-check.
    pub series_eps: Option<f64>,
    /// Highest `F_j` exported (`None`: `m + 5`).
    pub series_j_max: Option<u32>,
    /// Reconstruction times.
    pub ilt_times: Option<Vec<f64>>,
    /// Data-grid spacing for the reconstruction.
    pub ilt_h: f64,
    /// Trapezoid truncation tolerance.
    pub ilt_tol: f64,
    /// Final simulated time.
    pub t_final: Option<f64>,
    /// Spatial step.
    pub h: Option<f64>,
    /// Domain half-width (`None`: smallest light-cone-safe value + 10).
    pub half_width: Option<f64>,
    /// Courant number.
    pub courant: f64,
    /// Record every n-th step.
    pub record_every: usize,
    /// Exponent fit window (`None`: `[T/8, T/2]`).
    pub fit_window: Option<(f64, f64)>,
    /// Amplitude window (`None`: `[T/4, T/2]`).
    pub amplitude_window: Option<(f64, f64)>,
}

/// A fully validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Potential.
    pub potential: PotentialConfig,
    /// Initial data.
    pub initial_data: DataConfig,
    /// Requested stages, sorted in dependency order.
    pub pipeline: Vec<Stage>,
    /// Numerical settings.
    pub numeric: NumericConfig,
    /// Artifact directory.
    pub output_dir: PathBuf,
}

type Section = BTreeMap<String, (String, usize)>;

const KEYS: &[(&str, &[&str])] = &[
    ("", &["output_dir"]),
    (
        "potential",
        &["family", "m", "v_plus", "v_minus", "x_plus", "x_minus", "depth", "sum_terms", "correction_exponent", "correction_coeff"],
    ),
    ("initial_data", &["kind", "center", "width", "which", "seed"]),
    ("pipeline", &["stages"]),
    (
        "numeric",
        &[
            "x0",
            "scan_points",
            "eps_lo",
            "resonance_threshold",
            "diagnostic_eps",
            "series_x",
            "series_eps",
            "series_j_max",
            "ilt_times",
            "ilt_h",
            "ilt_tol",
            "t_final",
            "h",
            "half_width",
            "courant",
            "record_every",
            "fit_window",
            "amplitude_window",
        ],
    ),
    ("output", &["dir"]),
];

fn tokenize(text: &str) -> Result<BTreeMap<String, Section>, Failure> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    out.insert(String::new(), Section::new());
    let mut current = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Failure::validation(format!("line {lineno}: unterminated section header")))?
                .trim();
            if !KEYS.iter().any(|(s, _)| *s == name) || name.is_empty() {
                return Err(Failure::validation(format!("line {lineno}: unknown section [{name}]")));
            }
            if out.contains_key(name) {
                return Err(Failure::validation(format!("line {lineno}: section [{name}] appears twice")));
            }
            current = name.to_string();
            out.insert(current.clone(), Section::new());
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Failure::validation(format!("line {lineno}: expected `key = value`")))?;
        let key = key.trim();
        let allowed = KEYS.iter().find(|(s, _)| *s == current).map(|(_, k)| *k).unwrap_or(&[]);
        if !allowed.contains(&key) {
            let place = if current.is_empty() { "top level".to_string() } else { format!("[{current}]") };
            return Err(Failure::validation(format!("line {lineno}: unknown key `{key}` in {place}")));
        }
        let sec = out.get_mut(&current).expect("section inserted above");
        if sec.insert(key.to_string(), (value.trim().to_string(), lineno)).is_some() {
            return Err(Failure::validation(format!("line {lineno}: duplicate key `{key}`")));
        }
    }
    Ok(out)
}

struct Reader<'a> {
    name: &'a str,
    sec: Option<&'a Section>,
}

impl Reader<'_> {
    fn raw(&self, key: &str) -> Option<&(String, usize)> {
        self.sec.and_then(|s| s.get(key))
    }

    fn err(&self, key: &str, line: usize, what: &str) -> Failure {
        let prefix = if self.name.is_empty() { String::new() } else { format!("{}.", self.name) };
        Failure::validation(format!("line {line}: {prefix}{key}: {what}"))
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, Failure> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Some(x)),
                _ => Err(self.err(key, *line, &format!("`{v}` is not a finite number"))),
            },
        }
    }

    fn int<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, Failure> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<T>().map(Some).map_err(|_| self.err(key, *line, &format!("`{v}` is not a non-negative integer"))),
        }
    }

    fn list(&self, key: &str) -> Option<(Vec<String>, usize)> {
        self.raw(key).map(|(v, line)| {
            let items = if v.is_empty() { Vec::new() } else { v.split(',').map(|s| s.trim().to_string()).collect() };
            (items, *line)
        })
    }

    fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, Failure> {
        let Some((items, line)) = self.list(key) else { return Ok(None) };
        items
            .iter()
            .map(|s| s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| self.err(key, line, &format!("`{s}` is not a finite number"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn window(&self, key: &str) -> Result<Option<(f64, f64)>, Failure> {
        let Some(v) = self.f64_list(key)? else { return Ok(None) };
        let line = self.raw(key).map(|r| r.1).unwrap_or(0);
        match v.as_slice() {
            [a, b] if 0.0 < *a && a < b => Ok(Some((*a, *b))),
            _ => Err(self.err(key, line, "expected `t_lo, t_hi` with 0 < t_lo < t_hi")),
        }
    }

    fn word<'k>(&self, key: &str, choices: &[&'k str]) -> Result<Option<&'k str>, Failure> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => choices
                .iter()
                .find(|c| **c == v.as_str())
                .map(|c| Some(*c))
                .ok_or_else(|| self.err(key, *line, &format!("`{v}` is not one of {}", choices.join(", ")))),
        }
    }

    fn required<T>(&self, v: Option<T>, key: &str) -> Result<T, Failure> {
        v.ok_or_else(|| Failure::validation(format!("missing required key {}.{key}", self.name)))
    }
}

impl ExperimentConfig {
    /// Parse and validate a config file's text.
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let secs = tokenize(text)?;
        let r = |name: &'static str| Reader { name, sec: secs.get(name) };

        let p = r("potential");
        if p.sec.is_none() {
            return Err(Failure::validation("missing section [potential]"));
        }
        let family = match p.word("family", &["pure", "sum", "correction"])?.unwrap_or("pure") {
            "sum" => FamilyKind::Sum,
            "correction" => FamilyKind::Correction,
            _ => FamilyKind::Pure,
        };
        let sum_terms = match p.list("sum_terms") {
            None => Vec::new(),
            Some((items, line)) => items
                .iter()
                .map(|it| {
                    let bad = || p.err("sum_terms", line, &format!("`{it}` is not `alpha:coeff`"));
                    let (a, c) = it.split_once(':').ok_or_else(bad)?;
                    let a: f64 = a.trim().parse().map_err(|_| bad())?;
                    let c: f64 = c.trim().parse().map_err(|_| bad())?;
                    Ok((a, c))
                })
                .collect::<Result<Vec<_>, Failure>>()?,
        };
        if family == FamilyKind::Sum && sum_terms.is_empty() {
            return Err(Failure::validation("sum family needs potential.sum_terms"));
        }
        if family != FamilyKind::Sum && !sum_terms.is_empty() {
            return Err(Failure::validation("potential.sum_terms is only meaningful for family = sum"));
        }
        let correction_exponent = p.f64("correction_exponent")?;
        if family == FamilyKind::Correction && correction_exponent.is_none() {
            return Err(Failure::validation("correction family needs potential.correction_exponent"));
        }
        if family != FamilyKind::Correction && correction_exponent.is_some() {
            return Err(Failure::validation("potential.correction_exponent is only meaningful for family = correction"));
        }
        let potential = PotentialConfig {
            family,
            m: p.required(p.int("m")?, "m")?,
            v_plus: p.f64("v_plus")?.unwrap_or(1.0),
            v_minus: p.f64("v_minus")?.unwrap_or(1.0),
            x_plus: p.f64("x_plus")?.unwrap_or(1.0),
            x_minus: p.f64("x_minus")?.unwrap_or(-1.0),
            depth: p.f64("depth")?,
            sum_terms,
            correction_exponent,
            correction_coeff: p.f64("correction_coeff")?.unwrap_or(1.0),
        };
        potential.build()?;

        let d = r("initial_data");
        if d.sec.is_none() {
            return Err(Failure::validation("missing section [initial_data]"));
        }
        let kind = match d.required(d.word("kind", &["bump", "gaussian", "random"])?, "kind")? {
            "bump" => DataKind::Bump,
            "gaussian" => DataKind::Gaussian,
            _ => DataKind::Random,
        };
        let seed = d.int::<u64>("seed")?;
        if seed.is_some() && kind != DataKind::Random {
            return Err(Failure::validation("initial_data.seed is only meaningful for kind = random"));
        }
        let initial_data = DataConfig {
            kind,
            center: d.f64("center")?.unwrap_or(0.0),
            width: d.f64("width")?.unwrap_or(1.0),
            which: if d.word("which", &["psi0", "psi1"])?.unwrap_or("psi1") == "psi0" { Slot::Psi0 } else { Slot::Psi1 },
            seed: seed.unwrap_or(0),
        };
        initial_data.build()?;

        let pl = r("pipeline");
        let (names, line) = pl.list("stages").ok_or_else(|| Failure::validation("missing key pipeline.stages"))?;
        let mut pipeline = Vec::new();
        for n in &names {
            if n == "all" {
                pipeline.extend(Stage::ALL);
                continue;
            }
            pipeline.push(Stage::parse(n).ok_or_else(|| pl.err("stages", line, &format!("unknown stage `{n}`")))?);
        }
        pipeline.sort();
        pipeline.dedup();
        if pipeline.is_empty() {
            return Err(Failure::validation("pipeline.stages is empty: nothing to run"));
        }
        if pipeline.contains(&Stage::Decay) && !pipeline.contains(&Stage::Simulate) {
            return Err(Failure::validation("stage `decay` fits the output of stage `simulate`; add it to pipeline.stages"));
        }

        let n = r("numeric");
        let numeric = NumericConfig {
            x0: n.f64("x0")?.unwrap_or(0.0),
            scan_points: n.int("scan_points")?.unwrap_or(60),
            eps_lo: n.f64("eps_lo")?.unwrap_or(1e-3),
            resonance_threshold: n.f64("resonance_threshold")?.unwrap_or(1e-6),
            diagnostic_eps: n.f64("diagnostic_eps")?.unwrap_or(0.5),
            series_x: n.f64("series_x")?,
            series_eps: n.f64("series_eps")?,
            series_j_max: n.int("series_j_max")?,
            ilt_times: n.f64_list("ilt_times")?,
            ilt_h: n.f64("ilt_h")?.unwrap_or(0.02),
            ilt_tol: n.f64("ilt_tol")?.unwrap_or(1e-6),
            t_final: n.f64("t_final")?,
            h: n.f64("h")?,
            half_width: n.f64("half_width")?,
            courant: n.f64("courant")?.unwrap_or(0.5),
            record_every: n.int("record_every")?.unwrap_or(1),
            fit_window: n.window("fit_window")?,
            amplitude_window: n.window("amplitude_window")?,
        };

        let root = r("");
        let out = r("output");
        let output_dir = match (root.raw("output_dir"), out.raw("dir")) {
            (Some(_), Some(_)) => return Err(Failure::validation("give either output_dir or [output] dir, not both")),
            (Some((v, _)), None) | (None, Some((v, _))) if !v.is_empty() => PathBuf::from(v),
            _ => return Err(Failure::validation("missing output_dir")),
        };

        let cfg = Self { potential, initial_data, pipeline, numeric, output_dir };
        cfg.check_stage_keys()?;
        Ok(cfg)
    }

    /// Read and parse a config file.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn check_stage_keys(&self) -> Result<(), Failure> {
        let n = &self.numeric;
        let need = |ok: bool, stage: Stage, key: &str| {
            if ok {
                Ok(())
            } else {
                Err(Failure::validation(format!("stage `{}` needs numeric.{key}", stage.name())))
            }
        };
        let positive = |v: Option<f64>| v.is_some_and(|x| x > 0.0);
        for &s in &self.pipeline {
            match s {
                Stage::Spectral => {
                    need(n.scan_points >= 2, s, "scan_points ≥ 2")?;
                    need(n.eps_lo > 0.0 && n.diagnostic_eps > 0.0, s, "eps_lo and diagnostic_eps > 0")?;
                }
                Stage::Series => {
                    need(positive(n.series_x), s, "series_x > 0")?;
                    need(positive(n.series_eps), s, "series_eps > 0")?;
                    need(self.potential.family == FamilyKind::Pure, s, "a pure potential family (the Laplace representation needs a single tail power)")?;
                }
                Stage::Ilt => {
                    let ok = n.ilt_times.as_ref().is_some_and(|t| !t.is_empty() && t.iter().all(|&x| x > 0.0));
                    need(ok, s, "ilt_times (positive)")?;
                    need(n.ilt_h > 0.0 && n.ilt_tol > 0.0, s, "ilt_h and ilt_tol > 0")?;
                }
                Stage::Simulate => {
                    need(positive(n.t_final), s, "t_final > 0")?;
                    need(positive(n.h), s, "h > 0")?;
                    need(n.courant > 0.0 && n.courant < 1.0, s, "courant in (0, 1)")?;
                    need(n.record_every >= 1, s, "record_every ≥ 1")?;
                }
                Stage::Decay => {
                    let t = n.t_final.unwrap_or(0.0);
                    let (fw, aw) = (self.fit_window(), self.amplitude_window());
                    need(fw.1 <= t && aw.1 <= t, s, "fit_window and amplitude_window inside (0, t_final]")?;
                }
            }
        }
        Ok(())
    }

    /// Exponent fit window (default `[T/8, T/2]`).
    pub fn fit_window(&self) -> (f64, f64) {
        let t = self.numeric.t_final.unwrap_or(0.0);
        self.numeric.fit_window.unwrap_or((t / 8.0, t / 2.0))
    }

    /// Amplitude window (default `[T/4, T/2]`).
    pub fn amplitude_window(&self) -> (f64, f64) {
        let t = self.numeric.t_final.unwrap_or(0.0);
        self.numeric.amplitude_window.unwrap_or((t / 4.0, t / 2.0))
    }

    /// Domain half-width of the simulation.
    pub fn half_width(&self) -> Result<f64, Failure> {
        if let Some(l) = self.numeric.half_width {
            return Ok(l);
        }
        let data = self.initial_data.build()?;
        let (a, b) = data.support();
        let reach = a.abs().max(b.abs()).max(self.numeric.x0.abs()) + self.numeric.t_final.unwrap_or(0.0) + 10.0;
        let h = self.numeric.h.unwrap_or(1.0);
        Ok((reach / h).ceil() * h)
    }

    /// The same config restricted to `stages` (used by the `spectral` and
    /// `decay` subcommands).
    pub fn with_stages(&self, stages: &[Stage]) -> Result<Self, Failure> {
        let mut c = self.clone();
        c.pipeline = stages.to_vec();
        c.pipeline.sort();
        c.check_stage_keys()?;
        Ok(c)
    }

    /// Every key with its resolved value, in config-file syntax.
    pub fn resolved(&self) -> String {
        let mut s = String::new();
        let num = |v: f64| format!("{v:?}");
        let win = |w: (f64, f64)| format!("{}, {}", num(w.0), num(w.1));
        let p = &self.potential;
        let _ = writeln!(s, "output_dir = {}", self.output_dir.display());
        let _ = writeln!(s, "\n[potential]");
        let _ = writeln!(s, "family = {}", p.family.name());
        let _ = writeln!(s, "m = {}", p.m);
        let _ = writeln!(s, "v_plus = {}", num(p.v_plus));
        let _ = writeln!(s, "v_minus = {}", num(p.v_minus));
        let _ = writeln!(s, "x_plus = {}", num(p.x_plus));
        let _ = writeln!(s, "x_minus = {}", num(p.x_minus));
        if let Ok(spec) = p.build() {
            let _ = writeln!(s, "depth = {}", num(spec.depth()));
        }
        if p.family == FamilyKind::Sum {
            let terms: Vec<String> = p.sum_terms.iter().map(|(a, c)| format!("{}:{}", num(*a), num(*c))).collect();
            let _ = writeln!(s, "sum_terms = {}", terms.join(", "));
        }
        if p.family == FamilyKind::Correction {
            let _ = writeln!(s, "correction_exponent = {}", p.correction_exponent.map(num).unwrap_or_default());
            let _ = writeln!(s, "correction_coeff = {}", num(p.correction_coeff));
        }
        let d = &self.initial_data;
        let _ = writeln!(s, "\n[initial_data]");
        let kind = match d.kind {
            DataKind::Bump => "bump",
            DataKind::Gaussian => "gaussian",
            DataKind::Random => "random",
        };
        let _ = writeln!(s, "kind = {kind}");
        let _ = writeln!(s, "center = {}", num(d.center));
        let _ = writeln!(s, "width = {}", num(d.width));
        let _ = writeln!(s, "which = {}", if d.which == Slot::Psi0 { "psi0" } else { "psi1" });
        if d.kind == DataKind::Random {
            let _ = writeln!(s, "seed = {}", d.seed);
        }
        let _ = writeln!(s, "\n[pipeline]");
        let names: Vec<&str> = self.pipeline.iter().map(|s| s.name()).collect();
        let _ = writeln!(s, "stages = {}", names.join(", "));
        let n = &self.numeric;
        let _ = writeln!(s, "\n[numeric]");
        let _ = writeln!(s, "x0 = {}", num(n.x0));
        let _ = writeln!(s, "scan_points = {}", n.scan_points);
        let _ = writeln!(s, "eps_lo = {}", num(n.eps_lo));
        let _ = writeln!(s, "resonance_threshold = {}", num(n.resonance_threshold));
        let _ = writeln!(s, "diagnostic_eps = {}", num(n.diagnostic_eps));
        let mut optional = |key: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(s, "{key} = {v}");
            }
        };
        optional("series_x", n.series_x.map(num));
        optional("series_eps", n.series_eps.map(num));
        optional("series_j_max", Some((n.series_j_max.unwrap_or(p.m + 5)).to_string()));
        optional("ilt_times", n.ilt_times.as_ref().map(|t| t.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ")));
        optional("ilt_h", Some(num(n.ilt_h)));
        optional("ilt_tol", Some(num(n.ilt_tol)));
        optional("t_final", n.t_final.map(num));
        optional("h", n.h.map(num));
        optional("half_width", n.t_final.and(self.half_width().ok()).map(num));
        let _ = writeln!(s, "courant = {}", num(n.courant));
        let _ = writeln!(s, "record_every = {}", n.record_every);
        if n.t_final.is_some() {
            let _ = writeln!(s, "fit_window = {}", win(self.fit_window()));
            let _ = writeln!(s, "amplitude_window = {}", win(self.amplitude_window()));
        }
        s
    }
}
