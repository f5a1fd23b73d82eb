//! Run configuration: TOML schema, validation, and defaults.
//!
//! A config file describes one physical scenario. `alpha_sweep` is the one
//! exception: it expands into independent sub-runs (one per exponent) that
//! share a single output root and manifest.
//!
//! Unit conventions at this boundary:
//! - Ion-trap frequencies are given in cyclic hertz (`*_hz` keys) because
//!   that is how hardware is quoted; they are multiplied by 2π here, once,
//!   and everything downstream is angular.
//! - Times, fields, and thresholds expressed "per J_max" (`*_over_jmax`)
//!   are resolved against the built coupling matrix of each sub-run.

use std::path::Path;

use quench_core::{ChainSpec, CouplingSource, IonTrapParams, Model, Reduce};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

const TWO_PI: f64 = core::f64::consts::TAU;

/// Command-line overrides folded into the config before validation, so the
/// echoed effective config reproduces the run without any flags.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub chain: ChainCfg,
    pub model: ModelCfg,
    #[serde(default)]
    pub time: TimeCfg,
    #[serde(default)]
    pub analysis: AnalysisCfg,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<ShotsCfg>,
    #[serde(default)]
    pub output: OutputCfg,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainCfg {
    pub n: usize,
    /// "power_law" | "nearest_neighbor" | "ion_trap" | "explicit"
    pub coupling: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_sweep: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ion: Option<IonCfg>,
}

/// Trap and beam parameters in cyclic hertz.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonCfg {
    pub axial_hz: f64,
    pub transverse_hz: f64,
    pub rabi_hz: f64,
    pub recoil_hz: f64,
    pub detuning_hz: f64,
    /// Minimum |μ − ω_m| before the run is refused (default 100 Hz).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard_hz: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelCfg {
    /// "ising" | "xy" | "ising_field"
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_b_over_jmax: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max_over_jmax: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_fit: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_fit: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbative: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revivals: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduce: Option<String>,
    /// Separation window for boundary fits (inclusive, in lattice sites).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_r_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_r_max: Option<usize>,
    /// Probe times for the spatial-decay fit, in units of 1/J_max.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_times_over_jmax: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_mask_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revival_window_over_jmax: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revival_prominence: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotsCfg {
    pub n_shots: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    /// "csv" | "json"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub save_trajectory: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<bool>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parse, apply overrides, fill defaults, validate.
pub fn parse_config(path: &Path, overrides: &Overrides) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_str(&text, overrides)
}

/// Same as [`parse_config`] on in-memory text.
pub fn parse_config_str(text: &str, overrides: &Overrides) -> Result<RunConfig> {
    let mut cfg: RunConfig =
        toml::from_str(text).map_err(|e| bad(format!("config parse error: {e}")))?;
    cfg.apply_overrides(overrides)?;
    cfg.fill_defaults();
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    fn apply_overrides(&mut self, ov: &Overrides) -> Result<()> {
        if let Some(seed) = ov.seed {
            match &mut self.shots {
                Some(s) => s.seed = seed,
                None => {
                    return Err(bad(
                        "--seed given but the config has no [shots] section to apply it to",
                    ));
                }
            }
        }
        if let Some(out) = &ov.out {
            self.output.directory = Some(out.clone());
        }
        if let Some(fmt) = &ov.format {
            self.output.format = Some(fmt.clone());
        }
        Ok(())
    }

    /// Materialize every default so the echoed config is fully explicit.
    fn fill_defaults(&mut self) {
        let a = &mut self.analysis;
        a.cone.get_or_insert(true);
        a.boundary_fit.get_or_insert(true);
        a.velocity.get_or_insert(true);
        a.decay_fit.get_or_insert(false);
        a.bounds.get_or_insert(false);
        a.perturbative.get_or_insert(false);
        a.revivals.get_or_insert(false);
        a.thresholds.get_or_insert_with(|| vec![0.04]);
        a.reduce.get_or_insert_with(|| "max".into());
        a.decay_times_over_jmax.get_or_insert_with(|| vec![0.25, 0.5]);
        a.decay_mask_threshold.get_or_insert(0.15);
        a.revival_window_over_jmax.get_or_insert([2.0, 3.0]);
        a.revival_prominence.get_or_insert(0.02);
        let t = &mut self.time;
        if t.t_max.is_none() && t.t_max_over_jmax.is_none() {
            t.t_max_over_jmax = Some(1.5);
        }
        t.n_points.get_or_insert(60);
        let o = &mut self.output;
        o.directory.get_or_insert_with(|| "out".into());
        o.format.get_or_insert_with(|| "csv".into());
        o.save_trajectory.get_or_insert(false);
        o.plot_script.get_or_insert(false);
        if let Some(ion) = &mut self.chain.ion {
            ion.guard_hz.get_or_insert(100.0);
        }
    }

    fn validate(&self) -> Result<()> {
        self.validate_chain()?;
        self.validate_model()?;
        self.validate_time()?;
        self.validate_analysis()?;
        self.validate_shots()?;
        self.validate_output()?;
        Ok(())
    }

    fn validate_chain(&self) -> Result<()> {
        let c = &self.chain;
        if c.n < 2 {
            return Err(bad(format!("chain.n = {}, need at least 2 spins", c.n)));
        }
        let forbid = |present: bool, key: &str| -> Result<()> {
            if present {
                Err(bad(format!(
                    "chain.{key} does not apply to coupling = \"{}\"",
                    c.coupling
                )))
            } else {
                Ok(())
            }
        };
        match c.coupling.as_str() {
            "power_law" => {
                forbid(c.j.is_some(), "j")?;
                forbid(c.rows.is_some(), "rows")?;
                forbid(c.ion.is_some(), "ion")?;
                let j0 = c.j0.ok_or_else(|| bad("chain.j0 is required for power_law"))?;
                if !(j0 > 0.0) {
                    return Err(bad(format!("chain.j0 = {j0} must be positive")));
                }
                match (&c.alpha, &c.alpha_sweep) {
                    (Some(_), Some(_)) => {
                        return Err(bad("give chain.alpha or chain.alpha_sweep, not both"));
                    }
                    (None, None) => {
                        return Err(bad("power_law coupling needs chain.alpha (or alpha_sweep)"));
                    }
                    (Some(a), None) => check_alpha(*a)?,
                    (None, Some(list)) => {
                        if list.is_empty() {
                            return Err(bad("chain.alpha_sweep must not be empty"));
                        }
                        for &a in list {
                            check_alpha(a)?;
                        }
                    }
                }
            }
            "nearest_neighbor" => {
                forbid(c.j0.is_some(), "j0")?;
                forbid(c.alpha.is_some(), "alpha")?;
                forbid(c.alpha_sweep.is_some(), "alpha_sweep")?;
                forbid(c.rows.is_some(), "rows")?;
                forbid(c.ion.is_some(), "ion")?;
                let j = c.j.ok_or_else(|| bad("chain.j is required for nearest_neighbor"))?;
                if !(j > 0.0) {
                    return Err(bad(format!("chain.j = {j} must be positive")));
                }
            }
            "ion_trap" => {
                forbid(c.j0.is_some(), "j0")?;
                forbid(c.alpha.is_some(), "alpha")?;
                forbid(c.alpha_sweep.is_some(), "alpha_sweep")?;
                forbid(c.j.is_some(), "j")?;
                forbid(c.rows.is_some(), "rows")?;
                let ion = c.ion.as_ref().ok_or_else(|| {
                    bad("ion_trap coupling needs a [chain.ion] table of trap parameters")
                })?;
                for (key, v) in [
                    ("axial_hz", ion.axial_hz),
                    ("transverse_hz", ion.transverse_hz),
                    ("rabi_hz", ion.rabi_hz),
                    ("recoil_hz", ion.recoil_hz),
                    ("detuning_hz", ion.detuning_hz),
                ] {
                    if !(v > 0.0) || !v.is_finite() {
                        return Err(bad(format!("chain.ion.{key} = {v} must be positive")));
                    }
                }
                if let Some(g) = ion.guard_hz {
                    if !(g >= 0.0) {
                        return Err(bad(format!("chain.ion.guard_hz = {g} must be nonnegative")));
                    }
                }
                if ion.transverse_hz <= ion.axial_hz {
                    return Err(bad(
                        "chain.ion.transverse_hz must exceed axial_hz for a linear chain",
                    ));
                }
            }
            "explicit" => {
                forbid(c.j0.is_some(), "j0")?;
                forbid(c.alpha.is_some(), "alpha")?;
                forbid(c.alpha_sweep.is_some(), "alpha_sweep")?;
                forbid(c.j.is_some(), "j")?;
                forbid(c.ion.is_some(), "ion")?;
                let rows =
                    c.rows.as_ref().ok_or_else(|| bad("explicit coupling needs chain.rows"))?;
                if rows.len() != c.n || rows.iter().any(|r| r.len() != c.n) {
                    return Err(bad(format!(
                        "chain.rows must be a {n}×{n} matrix to match chain.n",
                        n = c.n
                    )));
                }
            }
            other => {
                return Err(bad(format!(
                    "chain.coupling = \"{other}\"; expected power_law, nearest_neighbor, \
                     ion_trap, or explicit"
                )));
            }
        }
        Ok(())
    }

    fn validate_model(&self) -> Result<()> {
        let m = &self.model;
        let kind = match m.kind.as_str() {
            "ising" => Model::Ising,
            "xy" => Model::Xy,
            "ising_field" => Model::IsingField,
            other => {
                return Err(bad(format!(
                    "model.kind = \"{other}\"; expected ising, xy, or ising_field"
                )));
            }
        };
        match kind {
            Model::IsingField => match (&m.field_b, &m.field_b_over_jmax) {
                (Some(_), Some(_)) => {
                    return Err(bad("give model.field_b or model.field_b_over_jmax, not both"));
                }
                (None, None) => {
                    return Err(bad(
                        "ising_field needs model.field_b (or field_b_over_jmax)",
                    ));
                }
                (Some(b), None) if !(*b > 0.0) => {
                    return Err(bad(format!("model.field_b = {b} must be positive")));
                }
                (None, Some(b)) if !(*b > 0.0) => {
                    return Err(bad(format!("model.field_b_over_jmax = {b} must be positive")));
                }
                _ => {}
            },
            _ => {
                if m.field_b.is_some() || m.field_b_over_jmax.is_some() {
                    return Err(bad(format!(
                        "model.field_b only applies to ising_field, not \"{}\"",
                        m.kind
                    )));
                }
            }
        }
        // State-vector paths carry the 2^N memory cap; the analytic Ising
        // path is exempt unless sampling or trajectory output forces
        // evolution.
        let needs_states = kind != Model::Ising
            || self.shots.is_some()
            || self.output.save_trajectory == Some(true);
        if needs_states && self.chain.n > quench_core::MAX_SPINS {
            return Err(bad(format!(
                "chain.n = {} needs state vectors (model.kind = \"{}\"{}), which caps n at {}",
                self.chain.n,
                m.kind,
                if kind == Model::Ising { ", with shots or trajectory output" } else { "" },
                quench_core::MAX_SPINS
            )));
        }
        Ok(())
    }

    fn validate_time(&self) -> Result<()> {
        let t = &self.time;
        if t.t_max.is_some() && t.t_max_over_jmax.is_some() {
            return Err(bad("give time.t_max or time.t_max_over_jmax, not both"));
        }
        if let Some(v) = t.t_max {
            if !(v > 0.0) || !v.is_finite() {
                return Err(bad(format!("time.t_max = {v} must be positive")));
            }
        }
        if let Some(v) = t.t_max_over_jmax {
            if !(v > 0.0) || !v.is_finite() {
                return Err(bad(format!("time.t_max_over_jmax = {v} must be positive")));
            }
        }
        let np = t.n_points.unwrap_or(60);
        if np < 2 {
            return Err(bad(format!("time.n_points = {np}, need at least 2")));
        }
        Ok(())
    }

    fn validate_analysis(&self) -> Result<()> {
        let a = &self.analysis;
        let thresholds = a.thresholds.as_deref().unwrap_or(&[]);
        if thresholds.is_empty() {
            return Err(bad("analysis.thresholds must not be empty"));
        }
        for &thr in thresholds {
            if !(thr > 0.0 && thr < 1.0) {
                return Err(bad(format!(
                    "analysis.thresholds entry {thr} must lie strictly between 0 and 1"
                )));
            }
        }
        if let Some(r) = &a.reduce {
            if r != "max" && r != "mean" {
                return Err(bad(format!("analysis.reduce = \"{r}\"; expected max or mean")));
            }
        }
        if let (Some(lo), Some(hi)) = (a.fit_r_min, a.fit_r_max) {
            if lo > hi {
                return Err(bad(format!(
                    "analysis.fit_r_min = {lo} exceeds fit_r_max = {hi}"
                )));
            }
        }
        if a.fit_r_min == Some(0) {
            return Err(bad("analysis.fit_r_min counts lattice sites, minimum 1"));
        }
        if let Some(ts) = &a.decay_times_over_jmax {
            if ts.is_empty() {
                return Err(bad("analysis.decay_times_over_jmax must not be empty"));
            }
            for &t in ts {
                if !(t > 0.0) {
                    return Err(bad(format!(
                        "analysis.decay_times_over_jmax entry {t} must be positive"
                    )));
                }
            }
        }
        if let Some(m) = a.decay_mask_threshold {
            if !(m > 0.0 && m < 1.0) {
                return Err(bad(format!(
                    "analysis.decay_mask_threshold = {m} must lie strictly between 0 and 1"
                )));
            }
        }
        if let Some([w0, w1]) = a.revival_window_over_jmax {
            if !(w0 >= 0.0 && w1 > w0) {
                return Err(bad(format!(
                    "analysis.revival_window_over_jmax = [{w0}, {w1}] must be an increasing \
                     nonnegative interval"
                )));
            }
        }
        if let Some(p) = a.revival_prominence {
            if !(p > 0.0) {
                return Err(bad(format!(
                    "analysis.revival_prominence = {p} must be positive"
                )));
            }
        }
        Ok(())
    }

    fn validate_shots(&self) -> Result<()> {
        if let Some(s) = &self.shots {
            if s.n_shots < 2 {
                return Err(bad(format!(
                    "shots.n_shots = {}, need at least 2 for the jackknife",
                    s.n_shots
                )));
            }
        }
        Ok(())
    }

    fn validate_output(&self) -> Result<()> {
        let o = &self.output;
        if o.directory.as_deref() == Some("") {
            return Err(bad("output.directory must not be empty"));
        }
        match o.format.as_deref() {
            None | Some("csv") | Some("json") => Ok(()),
            Some(other) => Err(bad(format!(
                "output.format = \"{other}\"; expected csv or json"
            ))),
        }
    }

    // ---- post-validation accessors (defaults are guaranteed filled) ----

    pub fn n(&self) -> usize {
        self.chain.n
    }

    pub fn model(&self) -> Model {
        match self.model.kind.as_str() {
            "ising" => Model::Ising,
            "xy" => Model::Xy,
            _ => Model::IsingField,
        }
    }

    /// Transverse-field strength, resolved against the sub-run's `J_max`.
    pub fn field_b(&self, j_max: f64) -> f64 {
        match self.model() {
            Model::IsingField => match (self.model.field_b, self.model.field_b_over_jmax) {
                (Some(b), _) => b,
                (None, Some(x)) => x * j_max,
                (None, None) => unreachable!("validated"),
            },
            _ => 0.0,
        }
    }

    /// Coupling recipe for one sub-run (`alpha` set when sweeping).
    pub fn chain_spec(&self, alpha: Option<f64>) -> ChainSpec {
        let c = &self.chain;
        let source = match c.coupling.as_str() {
            "power_law" => CouplingSource::PowerLaw {
                j0: c.j0.unwrap(),
                alpha: alpha.or(c.alpha).expect("sweep expansion supplies alpha"),
            },
            "nearest_neighbor" => CouplingSource::NearestNeighbor { j: c.j.unwrap() },
            "ion_trap" => CouplingSource::IonTrap(self.ion_params()),
            _ => {
                let rows = c.rows.as_ref().unwrap();
                let flat: Vec<f64> = rows.iter().flatten().copied().collect();
                CouplingSource::Explicit(
                    quench_core::CouplingMatrix::from_rows(c.n, flat)
                        .expect("validated shape; symmetry checked at build"),
                )
            }
        };
        ChainSpec { n_spins: c.n, source }
    }

    /// Trap parameters converted from cyclic hertz to angular frequency.
    pub fn ion_params(&self) -> IonTrapParams {
        let ion = self.chain.ion.as_ref().expect("validated");
        IonTrapParams {
            n_ions: self.chain.n,
            axial_freq: TWO_PI * ion.axial_hz,
            transverse_freq: TWO_PI * ion.transverse_hz,
            rabi_freq: TWO_PI * ion.rabi_hz,
            recoil_freq: TWO_PI * ion.recoil_hz,
            detuning: TWO_PI * ion.detuning_hz,
            guard_band: TWO_PI * ion.guard_hz.unwrap_or(100.0),
        }
    }

    /// Uniform time grid, resolved against the sub-run's `J_max`.
    pub fn times(&self, j_max: f64) -> Vec<f64> {
        let t_max = match (self.time.t_max, self.time.t_max_over_jmax) {
            (Some(t), _) => t,
            (None, Some(x)) => x / j_max,
            (None, None) => unreachable!("defaults filled"),
        };
        let np = self.time.n_points.unwrap_or(60);
        (0..np).map(|k| t_max * k as f64 / (np - 1) as f64).collect()
    }

    pub fn thresholds(&self) -> &[f64] {
        self.analysis.thresholds.as_deref().unwrap_or(&[0.04])
    }

    pub fn reduce(&self) -> Reduce {
        match self.analysis.reduce.as_deref() {
            Some("mean") => Reduce::Mean,
            _ => Reduce::Max,
        }
    }

    pub fn fit_window(&self) -> Option<(usize, usize)> {
        let a = &self.analysis;
        match (a.fit_r_min, a.fit_r_max) {
            (None, None) => None,
            (lo, hi) => Some((lo.unwrap_or(1), hi.unwrap_or(usize::MAX))),
        }
    }

    pub fn flag(&self, which: Analysis) -> bool {
        let a = &self.analysis;
        match which {
            Analysis::Cone => a.cone.unwrap_or(true),
            Analysis::BoundaryFit => a.boundary_fit.unwrap_or(true),
            Analysis::Velocity => a.velocity.unwrap_or(true),
            Analysis::DecayFit => a.decay_fit.unwrap_or(false),
            Analysis::Bounds => a.bounds.unwrap_or(false),
            Analysis::Perturbative => a.perturbative.unwrap_or(false),
            Analysis::Revivals => a.revivals.unwrap_or(false),
        }
    }

    pub fn out_dir(&self) -> &str {
        self.output.directory.as_deref().unwrap_or("out")
    }

    pub fn format(&self) -> crate::artifacts::TableFormat {
        match self.output.format.as_deref() {
            Some("json") => crate::artifacts::TableFormat::Json,
            _ => crate::artifacts::TableFormat::Csv,
        }
    }

    pub fn save_trajectory(&self) -> bool {
        self.output.save_trajectory.unwrap_or(false)
    }

    pub fn plot_script(&self) -> bool {
        self.output.plot_script.unwrap_or(false)
    }

    /// Sub-runs of this config: one per sweep entry, or a single run with
    /// artifacts at the output root.
    pub fn sub_runs(&self) -> Vec<SubRun> {
        match &self.chain.alpha_sweep {
            Some(list) => list
                .iter()
                .map(|&a| SubRun { label: Some(format!("alpha_{}", slug(a))), alpha: Some(a) })
                .collect(),
            None => vec![SubRun { label: None, alpha: None }],
        }
    }

    /// The fully explicit config echoed next to the artifacts.
    ///
    /// The output directory is stripped: it says where a run *sits*, not
    /// what it *is*, and the same experiment rerun elsewhere must hash to
    /// the same `config_sha256`.
    pub fn to_toml(&self) -> String {
        let mut c = self.clone();
        c.output.directory = None;
        toml::to_string_pretty(&c).expect("config serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    Cone,
    BoundaryFit,
    Velocity,
    DecayFit,
    Bounds,
    Perturbative,
    Revivals,
}

#[derive(Debug, Clone)]
pub struct SubRun {
    /// Subdirectory name, `None` when the config is a single run.
    pub label: Option<String>,
    pub alpha: Option<f64>,
}

fn check_alpha(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(bad(format!("chain.alpha = {a} must be positive")));
    }
    Ok(())
}

/// File-name fragment for a float: shortest round-trip digits, '.' → 'p'.
pub fn slug(x: f64) -> String {
    format!("{x}").replace('.', "p").replace('-', "m")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> &'static str {
        "[chain]\nn = 11\ncoupling = \"power_law\"\nj0 = 1.0\nalpha = 0.63\n\n\
         [model]\nkind = \"ising\"\n"
    }

    #[test]
    fn minimal_config_fills_documented_defaults() {
        let cfg = parse_config_str(minimal(), &Overrides::default()).unwrap();
        assert_eq!(cfg.time.t_max_over_jmax, Some(1.5));
        assert_eq!(cfg.time.n_points, Some(60));
        assert_eq!(cfg.thresholds(), &[0.04]);
        assert_eq!(cfg.reduce(), Reduce::Max);
        let times = cfg.times(1.0);
        assert_eq!(times.len(), 60);
        assert_eq!(times[0], 0.0);
        assert!((times[59] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn negative_alpha_is_named_in_the_error() {
        let text = minimal().replace("alpha = 0.63", "alpha = -0.5");
        let err = parse_config_str(&text, &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("alpha"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn oversized_xy_chain_hits_the_memory_cap() {
        let text = minimal().replace("n = 11", "n = 30").replace("ising", "xy");
        let err = parse_config_str(&text, &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("caps n at 24"), "{err}");
    }

    #[test]
    fn analytic_ising_is_exempt_from_the_cap_until_sampling() {
        let text = minimal().replace("n = 11", "n = 40");
        assert!(parse_config_str(&text, &Overrides::default()).is_ok());
        let with_shots = format!("{text}\n[shots]\nn_shots = 100\nseed = 1\n");
        assert!(parse_config_str(&with_shots, &Overrides::default()).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{}\nbanana = 3\n", minimal());
        let err = parse_config_str(&text, &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("banana"), "{err}");
    }

    #[test]
    fn thresholds_must_sit_inside_the_unit_interval() {
        let text = format!("{}\n[analysis]\nthresholds = [0.04, 1.5]\n", minimal());
        let err = parse_config_str(&text, &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("between 0 and 1"), "{err}");
    }

    #[test]
    fn seed_override_needs_a_shots_section() {
        let ov = Overrides { seed: Some(7), ..Overrides::default() };
        let err = parse_config_str(minimal(), &ov).unwrap_err();
        assert!(err.to_string().contains("[shots]"), "{err}");
        let with_shots = format!("{}\n[shots]\nn_shots = 100\nseed = 1\n", minimal());
        let cfg = parse_config_str(&with_shots, &ov).unwrap();
        assert_eq!(cfg.shots.as_ref().unwrap().seed, 7);
    }

    #[test]
    fn effective_config_round_trips() {
        let cfg = parse_config_str(minimal(), &Overrides::default()).unwrap();
        let echoed = cfg.to_toml();
        let again = parse_config_str(&echoed, &Overrides::default()).unwrap();
        assert_eq!(again.to_toml(), echoed);
    }

    #[test]
    fn sweep_expands_into_labeled_sub_runs() {
        let text = minimal().replace("alpha = 0.63", "alpha_sweep = [0.63, 1.0]");
        let cfg = parse_config_str(&text, &Overrides::default()).unwrap();
        let subs = cfg.sub_runs();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].label.as_deref(), Some("alpha_0p63"));
        assert_eq!(subs[1].label.as_deref(), Some("alpha_1"));
        assert_eq!(subs[0].alpha, Some(0.63));
    }

    #[test]
    fn hertz_inputs_become_angular_frequencies() {
        let text = "[chain]\nn = 2\ncoupling = \"ion_trap\"\n\
                    [chain.ion]\naxial_hz = 600e3\ntransverse_hz = 4.8e6\nrabi_hz = 50e3\n\
                    recoil_hz = 18.5e3\ndetuning_hz = 4.9e6\n\n[model]\nkind = \"ising\"\n";
        let cfg = parse_config_str(text, &Overrides::default()).unwrap();
        let p = cfg.ion_params();
        assert!((p.axial_freq - TWO_PI * 600e3).abs() < 1e-6);
        assert!((p.guard_band - TWO_PI * 100.0).abs() < 1e-9);
        assert_eq!(p.n_ions, 2);
    }

    #[test]
    fn field_resolves_against_j_max() {
        let text = minimal()
            .replace("kind = \"ising\"", "kind = \"ising_field\"\nfield_b_over_jmax = 20.0");
        let cfg = parse_config_str(&text, &Overrides::default()).unwrap();
        assert!((cfg.field_b(2.0) - 40.0).abs() < 1e-15);
    }
}
