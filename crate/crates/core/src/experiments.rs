// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Config-driven runs: build the system, grids and initial pulse from a
//! [`ScenarioConfig`], optimize, analyze, and write CSV artifacts plus a JSON
//! manifest.
//!
//! Every physical quantity in a config carries its unit in the key name.
//! Level indices are 0-based.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::analysis::{
    adiabatic_decompose, fit_quadratic_phase, linspace, scaled_range, scan_robustness_jobs,
    time_frequency_map, AdiabaticTrace, ChirpFrame, QuadraticFit, RobustnessScan,
    TimeFrequencyMap,
};
use crate::dynamics::{preset_system, propagate, PropagationRecord, QuantumSystem, StateVector};
use crate::error::{Result, SpooError};
use crate::export;
use crate::gradients::ControlProblem;
use crate::optimizer::{
    optimize_with, FilterSpec, IterationRecord, OptimizationState, OptimizerConfig, Termination,
};
use crate::pulse::{gaussian_amplitude, quadratic_phase, SpectralField, TemporalField};
use crate::units::{
    angular_frequency_to_wavenumber, chirp_to_atomic, chirp_to_fs2, make_grids, to_atomic_time,
    to_femtoseconds, wavenumber_to_angular_frequency, TimeGrid,
};

/// Time steps per femtosecond used by the high-resolution switch.
pub const FINE_STEPS_PER_FS: f64 = 320.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    TwoLevel,
    RubidiumResonant,
    RubidiumOffresonant,
}

/// Preset name or explicit level structure.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energies_invcm: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipoles_au: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    pub e0_au: f64,
    /// Carrier given directly...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_invcm: Option<f64>,
    /// ...or as the transition frequency between two levels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonant_with: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau0_fs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_omega_invcm: Option<f64>,
    /// Static detuning `ω_res − ω₀`; only with `resonant_with`.
    #[serde(default)]
    pub detuning_invcm: f64,
    /// Quadratic phase of the initial guess, about ω₀.
    #[serde(default)]
    pub initial_chirp_fs2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowSpec {
    pub duration_fs: f64,
    pub n_steps: usize,
    pub n_freq: usize,
    /// Frequency grid half-width in units of Δω.
    pub freq_halfwidth_bandwidths: f64,
    /// Overrides `n_steps` with 320 steps per fs.
    pub fine_resolution: bool,
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self {
            duration_fs: 1000.0,
            n_steps: 1 << 16,
            n_freq: 2048,
            freq_halfwidth_bandwidths: 6.0,
            fine_resolution: false,
        }
    }
}

impl WindowSpec {
    pub fn effective_steps(&self) -> usize {
        if self.fine_resolution {
            (FINE_STEPS_PER_FS * self.duration_fs).round() as usize
        } else {
            self.n_steps
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSpec {
    /// `false` skips the flow; the initial pulse is analyzed as is.
    pub enabled: bool,
    /// Filter FWHM; absent means unfiltered.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_invcm: Option<f64>,
    pub filter_gain: f64,
    pub target_objective: f64,
    pub max_iterations: usize,
    pub initial_step: f64,
    pub constraints_enabled: bool,
    /// Accepted endpoint drift relative to ℰ₀.
    pub max_constraint_drift_rel: f64,
    pub stall_tolerance: f64,
    pub stall_iterations: usize,
    pub gamma_rcond: f64,
    pub seed_chirp_fs2: f64,
    /// Field strengths optimized first, each stage starting from the
    /// previous phase, before the nominal `e0_au`.
    pub continuation_e0_au: Vec<f64>,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        let d = OptimizerConfig::default();
        Self {
            enabled: true,
            sigma_invcm: None,
            filter_gain: 1.0,
            target_objective: d.target_objective,
            max_iterations: d.max_iterations,
            initial_step: d.initial_step,
            constraints_enabled: d.constraints_enabled,
            max_constraint_drift_rel: d.max_constraint_drift,
            stall_tolerance: d.stall_tolerance,
            stall_iterations: d.stall_iterations,
            gamma_rcond: d.gamma_rcond,
            seed_chirp_fs2: chirp_to_fs2(d.seed_chirp),
            continuation_e0_au: Vec::new(),
        }
    }
}

impl OptimizerSpec {
    pub fn to_config(&self) -> OptimizerConfig {
        let filter = match self.sigma_invcm {
            Some(s) => FilterSpec {
                gain: self.filter_gain,
                ..FilterSpec::gaussian(wavenumber_to_angular_frequency(s))
            },
            None => FilterSpec::disabled(),
        };
        OptimizerConfig {
            filter,
            max_iterations: self.max_iterations,
            target_objective: self.target_objective,
            initial_step: self.initial_step,
            constraints_enabled: self.constraints_enabled,
            max_constraint_drift: self.max_constraint_drift_rel,
            stall_tolerance: self.stall_tolerance,
            stall_iterations: self.stall_iterations,
            gamma_rcond: self.gamma_rcond,
            seed_chirp: chirp_to_atomic(self.seed_chirp_fs2),
            ..OptimizerConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub initial_level: usize,
    pub target_level: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSpec {
    pub scan_min_scale: f64,
    pub scan_max_scale: f64,
    pub scan_points: usize,
    pub fit_amplitude_threshold: f64,
    pub tf_window_fs: f64,
    /// Half-span of the map's time axis; defaults to the half window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tf_half_span_fs: Option<f64>,
    pub tf_times: usize,
    pub tf_freqs: usize,
    /// Half-span of the map's frequency axis in units of Δω.
    pub tf_halfwidth_bandwidths: f64,
}

impl Default for AnalysisSpec {
    fn default() -> Self {
        Self {
            scan_min_scale: 0.8,
            scan_max_scale: 1.2,
            scan_points: 41,
            fit_amplitude_threshold: 1e-3,
            tf_window_fs: 25.0,
            tf_half_span_fs: None,
            tf_times: 161,
            tf_freqs: 121,
            tf_halfwidth_bandwidths: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    pub spectrum: bool,
    pub field: bool,
    pub populations: bool,
    pub history: bool,
    pub robustness: bool,
    pub fit: bool,
    pub adiabatic: bool,
    pub tf_map: bool,
    /// The field CSV is thinned to at most this many rows.
    pub field_max_rows: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            directory: None,
            spectrum: true,
            field: true,
            populations: true,
            history: true,
            robustness: true,
            fit: true,
            adiabatic: true,
            tf_map: true,
            field_max_rows: 8192,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Inferred from the system and task when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioKind>,
    pub system: SystemSpec,
    pub pulse: PulseSpec,
    #[serde(default)]
    pub window: WindowSpec,
    #[serde(default)]
    pub optimizer: OptimizerSpec,
    pub task: TaskSpec,
    #[serde(default)]
    pub analysis: AnalysisSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

/// One problem found by [`ScenarioConfig::diagnostics`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// Dotted key path, e.g. `pulse.e0_au`.
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Everything a run needs, in atomic units.
#[derive(Debug, Clone)]
pub struct Setup {
    pub system: QuantumSystem,
    pub time_grid: TimeGrid,
    /// Initial guess, including any initial chirp.
    pub spectral: SpectralField,
    pub initial: usize,
    pub target: usize,
    pub optimizer: OptimizerConfig,
    pub omega0: f64,
    pub tau0: f64,
    pub e0: f64,
}

impl ScenarioConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a config and applies `key=value` overrides.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut value: Value = serde_json::from_str(&text)?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn system(&self) -> Result<QuantumSystem> {
        let s = &self.system;
        match (&s.preset, &s.energies_invcm, &s.dipoles_au) {
            (Some(name), None, None) => preset_system(name)
                .ok_or_else(|| SpooError::Config(format!("unknown system preset `{name}`"))),
            (None, Some(e), Some(d)) => QuantumSystem::new(
                e.iter().map(|v| wavenumber_to_angular_frequency(*v)).collect(),
                d.clone(),
            ),
            _ => Err(SpooError::Config(
                "system needs either `preset` or both `energies_invcm` and `dipoles_au`".into(),
            )),
        }
    }

    /// Schema and physics checks that do not run anything. Empty means valid.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut d = |field: &str, message: String| {
            out.push(Diagnostic {
                field: field.into(),
                message,
            })
        };
        let system = match self.system() {
            Ok(s) => Some(s),
            Err(e) => {
                d("system", e.to_string());
                None
            }
        };
        let n = system.as_ref().map(|s| s.n_levels());
        let p = &self.pulse;
        if !(p.e0_au >= 0.0 && p.e0_au.is_finite()) {
            d("pulse.e0_au", format!("must be non-negative and finite, got {}", p.e0_au));
        }
        match (p.omega0_invcm, p.resonant_with) {
            (Some(_), Some(_)) => d(
                "pulse",
                "give either `omega0_invcm` or `resonant_with`, not both".into(),
            ),
            (None, None) => d("pulse", "needs `omega0_invcm` or `resonant_with`".into()),
            (Some(w), None) => {
                if !(w > 0.0 && w.is_finite()) {
                    d("pulse.omega0_invcm", format!("must be positive, got {w}"));
                }
                if p.detuning_invcm != 0.0 {
                    d(
                        "pulse.detuning_invcm",
                        "only meaningful together with `resonant_with`".into(),
                    );
                }
            }
            (None, Some([a, b])) => {
                if let (Some(n), Some(sys)) = (n, &system) {
                    if a >= n || b >= n {
                        d(
                            "pulse.resonant_with",
                            format!("level index out of range for a {n}-level system"),
                        );
                    } else {
                        let w = sys.transition_frequency(a, b).unwrap_or(0.0)
                            - wavenumber_to_angular_frequency(p.detuning_invcm);
                        if !(w > 0.0) {
                            d(
                                "pulse.resonant_with",
                                format!("levels {a} and {b} do not resolve to a positive carrier"),
                            );
                        }
                    }
                }
            }
        }
        match (p.tau0_fs, p.delta_omega_invcm) {
            (Some(_), Some(_)) => d(
                "pulse",
                "give either `tau0_fs` or `delta_omega_invcm`, not both".into(),
            ),
            (Some(t), None) if !(t > 0.0 && t.is_finite()) => {
                d("pulse.tau0_fs", format!("must be positive, got {t}"))
            }
            (None, Some(w)) if !(w > 0.0 && w.is_finite()) => {
                d("pulse.delta_omega_invcm", format!("must be positive, got {w}"))
            }
            _ => {}
        }
        if !p.initial_chirp_fs2.is_finite() {
            d("pulse.initial_chirp_fs2", "must be finite".into());
        }

        let w = &self.window;
        if !(w.duration_fs > 0.0 && w.duration_fs.is_finite()) {
            d("window.duration_fs", format!("must be positive, got {}", w.duration_fs));
        }
        if w.effective_steps() < 2 {
            d("window.n_steps", "must be at least 2".into());
        }
        if w.n_freq < 2 {
            d("window.n_freq", "must be at least 2".into());
        }
        if !(w.freq_halfwidth_bandwidths > 0.0) {
            d("window.freq_halfwidth_bandwidths", "must be positive".into());
        }

        let o = &self.optimizer;
        if let Some(s) = o.sigma_invcm {
            if !(s > 0.0 && s.is_finite()) {
                d("optimizer.sigma_invcm", format!("must be positive, got {s}"));
            }
        }
        if let Err(e) = o.to_config().validate() {
            d("optimizer", e.to_string());
        }
        for (i, e) in o.continuation_e0_au.iter().enumerate() {
            if !(*e > 0.0 && e.is_finite()) {
                d(
                    "optimizer.continuation_e0_au",
                    format!("entry {i} must be positive, got {e}"),
                );
            }
        }

        let t = self.task;
        if let Some(n) = n {
            if t.initial_level >= n {
                d(
                    "task.initial_level",
                    format!("index {} out of range for a {n}-level system", t.initial_level),
                );
            }
            if t.target_level >= n {
                d(
                    "task.target_level",
                    format!("index {} out of range for a {n}-level system", t.target_level),
                );
            }
        }
        if t.initial_level == t.target_level {
            d("task", "initial and target level coincide".into());
        }

        let a = &self.analysis;
        if !(a.scan_min_scale > 0.0 && a.scan_max_scale >= a.scan_min_scale) {
            d(
                "analysis",
                "scan scales must satisfy 0 < scan_min_scale ≤ scan_max_scale".into(),
            );
        }
        if a.scan_points == 0 {
            d("analysis.scan_points", "must be positive".into());
        }
        if !(a.fit_amplitude_threshold > 0.0 && a.fit_amplitude_threshold < 1.0) {
            d("analysis.fit_amplitude_threshold", "must lie in (0, 1)".into());
        }
        if !(a.tf_window_fs > 0.0) {
            d("analysis.tf_window_fs", "must be positive".into());
        }
        if let (Some(kind), Some(n)) = (self.scenario, n) {
            let need = if kind == ScenarioKind::TwoLevel { 2 } else { 3 };
            if n != need {
                d(
                    "scenario",
                    format!("{kind:?} needs a {need}-level system, got {n} levels"),
                );
            }
            if kind == ScenarioKind::RubidiumOffresonant && t.initial_level == 0 {
                d(
                    "task.initial_level",
                    "the off-resonant scheme starts from an excited level".into(),
                );
            }
        }
        out
    }

    /// Scenario kind, inferred when not given.
    pub fn kind(&self) -> ScenarioKind {
        if let Some(k) = self.scenario {
            return k;
        }
        match self.system().map(|s| s.n_levels()) {
            Ok(2) => ScenarioKind::TwoLevel,
            _ if self.task.initial_level == 0 => ScenarioKind::RubidiumResonant,
            _ => ScenarioKind::RubidiumOffresonant,
        }
    }

    /// Resolves the config into grids, pulse and optimizer settings.
    pub fn build(&self) -> Result<Setup> {
        let diags = self.diagnostics();
        if !diags.is_empty() {
            let text: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            return Err(SpooError::Config(text.join("; ")));
        }
        let system = self.system()?;
        let p = &self.pulse;
        let omega0 = match (p.omega0_invcm, p.resonant_with) {
            (Some(w), _) => wavenumber_to_angular_frequency(w),
            (None, Some([a, b])) => {
                system.transition_frequency(a, b)? - wavenumber_to_angular_frequency(p.detuning_invcm)
            }
            (None, None) => unreachable!("rejected by diagnostics"),
        };
        let tau0 = match (p.tau0_fs, p.delta_omega_invcm) {
            (_, Some(w)) => 1.0 / wavenumber_to_angular_frequency(w),
            (Some(t), None) => to_atomic_time(t),
            (None, None) => to_atomic_time(10.0),
        };
        let w = &self.window;
        let (time_grid, fgrid) = make_grids(
            to_atomic_time(w.duration_fs),
            w.effective_steps(),
            omega0,
            w.freq_halfwidth_bandwidths / tau0,
            w.n_freq,
        )?;
        let mut spectral = gaussian_amplitude(p.e0_au, omega0, 1.0 / tau0, &fgrid)?;
        if p.initial_chirp_fs2 != 0.0 {
            spectral = spectral.with_phase(&quadratic_phase(
                &fgrid,
                omega0,
                chirp_to_atomic(p.initial_chirp_fs2),
            ))?;
        }
        Ok(Setup {
            system,
            time_grid,
            spectral,
            initial: self.task.initial_level,
            target: self.task.target_level,
            optimizer: self.optimizer.to_config(),
            omega0,
            tau0,
            e0: p.e0_au,
        })
    }

    pub fn output_dir(&self) -> Option<PathBuf> {
        self.outputs.directory.as_ref().map(PathBuf::from)
    }
}

/// Sets `a.b.c=value` in a JSON tree. The value is parsed as JSON and falls
/// back to a plain string; missing objects along the path are created.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| SpooError::Config(format!("override `{assignment}` is not key=value")))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(SpooError::Config(format!("override `{assignment}` has an empty key")));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.into()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| SpooError::Config(format!("override `{key}`: `{part}` is not inside an object")))?;
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| SpooError::Config(format!("override `{key}` does not address an object")))?;
    obj.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

/// One file written by a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Collects artifacts, writing them when a directory is set.
#[derive(Debug, Default)]
pub struct ArtifactSink {
    dir: Option<PathBuf>,
    pub artifacts: Vec<Artifact>,
}

impl ArtifactSink {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            dir,
            artifacts: Vec::new(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn put(&mut self, file: &str, contents: Vec<u8>) -> Result<()> {
        if let Some(dir) = &self.dir {
            export::write_atomic(&dir.join(file), &contents)?;
        }
        self.artifacts.push(Artifact {
            file: file.into(),
            sha256: hex::encode(Sha256::digest(&contents)),
            bytes: contents.len(),
        });
        Ok(())
    }

    /// Writes `manifest.json` (not listed in itself).
    pub fn finish(&self, manifest: &Manifest) -> Result<()> {
        if let Some(dir) = &self.dir {
            let mut text = serde_json::to_vec_pretty(manifest)?;
            text.push(b'\n');
            export::write_atomic(&dir.join("manifest.json"), &text)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub omega_c_invcm: Option<f64>,
    pub beta0_fs2: f64,
    pub phi1_fs: f64,
    pub residual_rad: f64,
}

impl From<&QuadraticFit> for FitSummary {
    fn from(f: &QuadraticFit) -> Self {
        Self {
            omega_c_invcm: f.omega_c.map(angular_frequency_to_wavenumber),
            beta0_fs2: f.beta0_fs2(),
            phi1_fs: to_femtoseconds(f.phi1),
            residual_rad: f.residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub e0_au: f64,
    pub termination: Termination,
    pub iterations: usize,
    pub objective: f64,
    pub seeded: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub termination: Option<Termination>,
    pub converged: bool,
    pub initial_objective: f64,
    pub objective: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// Largest accepted endpoint drift over all stages, relative to ℰ₀.
    pub max_constraint_drift_rel: f64,
    pub stages: Vec<StageSummary>,
    pub final_populations: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_scan_infidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_adiabatic_ground_population: Option<f64>,
}

/// JSON record of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ScenarioConfig,
    pub artifacts: Vec<Artifact>,
    pub timings_s: BTreeMap<String, f64>,
    pub summary: Summary,
}

impl Manifest {
    pub fn new(command: &str, config: &ScenarioConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.clone(),
            artifacts: Vec::new(),
            timings_s: BTreeMap::new(),
            summary: Summary::default(),
        }
    }
}

/// Per-run knobs that are not part of the physics config.
pub struct RunOptions<'a> {
    pub jobs: usize,
    /// Overrides `outputs.directory`.
    pub output_dir: Option<PathBuf>,
    pub progress: Option<&'a mut dyn FnMut(&IterationRecord)>,
}

impl Default for RunOptions<'_> {
    fn default() -> Self {
        Self {
            jobs: crate::analysis::default_jobs(),
            output_dir: None,
            progress: None,
        }
    }
}

/// Optimized pulse with the stages that produced it.
#[derive(Debug, Clone)]
pub struct OptimizationRun {
    pub spectral: SpectralField,
    pub stages: Vec<OptimizationState>,
    /// Field strength of each stage.
    pub stage_e0: Vec<f64>,
}

impl OptimizationRun {
    /// The stage at the nominal field strength.
    pub fn last(&self) -> &OptimizationState {
        self.stages.last().expect("at least one stage")
    }

    pub fn converged(&self) -> bool {
        self.last().converged()
    }

    pub fn history(&self) -> Vec<IterationRecord> {
        let mut out = Vec::new();
        let (mut it, mut s) = (0, 0.0);
        for st in &self.stages {
            for h in &st.history {
                out.push(IterationRecord {
                    iteration: it + h.iteration,
                    s: s + h.s,
                    ..h.clone()
                });
            }
            it += st.iteration;
            s += st.s;
        }
        out
    }
}

/// Runs the flow through the continuation stages and then at nominal ℰ₀.
pub fn run_optimizer(
    setup: &Setup,
    continuation: &[f64],
    progress: &mut dyn FnMut(&IterationRecord),
) -> Result<OptimizationRun> {
    let problem = ControlProblem::new(
        setup.system.clone(),
        &setup.spectral,
        setup.time_grid,
        setup.initial,
        setup.target,
    )?;
    let mut phase = setup.spectral.phase().to_vec();
    let mut stages = Vec::new();
    let mut stage_e0 = Vec::new();
    let mut spectral = setup.spectral.clone();
    for &e0 in continuation.iter().chain(std::iter::once(&setup.e0)) {
        let start = setup.spectral.with_e0(e0)?.with_phase(&phase)?;
        let (out, state) = optimize_with(&problem, &start, &setup.optimizer, progress)?;
        log::info!(
            "stage e0={e0:.4e}: {:?} after {} iterations, P={:.10}",
            state.termination,
            state.iteration,
            state.objective
        );
        phase = out.phase().to_vec();
        spectral = out;
        stages.push(state);
        stage_e0.push(e0);
    }
    Ok(OptimizationRun {
        spectral,
        stages,
        stage_e0,
    })
}

/// Everything a scenario computed, for callers that want more than files.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub kind: ScenarioKind,
    pub setup: Setup,
    pub spectral: SpectralField,
    pub field: TemporalField,
    pub optimization: Option<OptimizationRun>,
    pub record: PropagationRecord,
    pub scan: Option<RobustnessScan>,
    pub fit: Option<QuadraticFit>,
    pub adiabatic: Option<AdiabaticTrace>,
    pub tf_map: Option<TimeFrequencyMap>,
    pub manifest: Manifest,
}

impl ScenarioOutcome {
    pub fn objective(&self) -> f64 {
        self.record.final_state.population(self.setup.target)
    }

    pub fn converged(&self) -> bool {
        self.optimization.as_ref().is_none_or(|o| o.converged())
    }
}

fn timed<T>(timings: &mut BTreeMap<String, f64>, key: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let t = Instant::now();
    let out = f()?;
    timings.insert(key.into(), t.elapsed().as_secs_f64());
    Ok(out)
}

fn field_stride(field: &TemporalField, max_rows: usize) -> usize {
    field.values().len().div_ceil(max_rows.max(1)).max(1)
}

/// Time–frequency map over the configured axes.
pub fn default_tf_map(config: &ScenarioConfig, setup: &Setup, field: &TemporalField) -> Result<TimeFrequencyMap> {
    let a = &config.analysis;
    let half = a
        .tf_half_span_fs
        .map(to_atomic_time)
        .unwrap_or(0.5 * setup.time_grid.window_duration());
    let dw = a.tf_halfwidth_bandwidths / setup.tau0;
    time_frequency_map(
        field,
        to_atomic_time(a.tf_window_fs),
        &linspace(-half, half, a.tf_times),
        &linspace(setup.omega0 - dw, setup.omega0 + dw, a.tf_freqs),
    )
}

/// Full pipeline: optimize, propagate, scan, fit, adiabatic frame (two-level)
/// and time–frequency map, each gated by the output toggles.
pub fn run_scenario(config: &ScenarioConfig, options: RunOptions<'_>) -> Result<ScenarioOutcome> {
    let kind = config.kind();
    let setup = config.build()?;
    let out_dir = options.output_dir.clone().or_else(|| config.output_dir());
    let mut sink = ArtifactSink::new(out_dir);
    let mut manifest = Manifest::new("scenario", config);
    let mut timings = BTreeMap::new();
    let total = Instant::now();

    let mut silent = |_: &IterationRecord| {};
    let progress: &mut dyn FnMut(&IterationRecord) = match options.progress {
        Some(p) => p,
        None => &mut silent,
    };
    let optimization = if config.optimizer.enabled {
        Some(timed(&mut timings, "optimize", || {
            run_optimizer(&setup, &config.optimizer.continuation_e0_au, progress)
        })?)
    } else {
        None
    };
    let spectral = optimization
        .as_ref()
        .map_or_else(|| setup.spectral.clone(), |o| o.spectral.clone());
    let field = crate::pulse::synthesize(&spectral, &setup.time_grid)?;
    let record = timed(&mut timings, "propagate", || {
        propagate(
            &setup.system,
            &field,
            &StateVector::basis(setup.system.n_levels(), setup.initial)?,
            0,
        )
    })?;

    let o = &config.outputs;
    let scan = if o.robustness && setup.e0 > 0.0 {
        let a = &config.analysis;
        let values = scaled_range(setup.e0, a.scan_min_scale, a.scan_max_scale, a.scan_points);
        Some(timed(&mut timings, "scan", || {
            scan_robustness_jobs(
                &setup.system,
                &spectral,
                &setup.time_grid,
                setup.initial,
                setup.target,
                &values,
                options.jobs,
            )
        })?)
    } else {
        None
    };
    let fit = if (o.fit || o.adiabatic) && setup.e0 > 0.0 {
        match fit_quadratic_phase(&spectral, config.analysis.fit_amplitude_threshold) {
            Ok(f) => Some(f),
            Err(e) => {
                log::warn!("phase fit skipped: {e}");
                None
            }
        }
    } else {
        None
    };
    let adiabatic = match (&fit, kind) {
        (Some(f), ScenarioKind::TwoLevel) if o.adiabatic => Some(timed(&mut timings, "adiabatic", || {
            adiabatic_decompose(&setup.system, &ChirpFrame::from_fit(f), &record, setup.e0, setup.tau0)
        })?),
        _ => None,
    };
    let tf_map = if o.tf_map {
        Some(timed(&mut timings, "tf_map", || default_tf_map(config, &setup, &field))?)
    } else {
        None
    };

    if o.spectrum {
        sink.put("spectrum.csv", export::spectrum_csv(&spectral))?;
    }
    if o.field {
        sink.put("field.csv", export::field_csv(&field, field_stride(&field, o.field_max_rows)))?;
    }
    if o.populations {
        sink.put("populations.csv", export::populations_csv(&record))?;
    }
    if let (true, Some(opt)) = (o.history, &optimization) {
        sink.put("history.csv", export::history_csv(&opt.history()))?;
    }
    if let Some(s) = &scan {
        sink.put("robustness.csv", export::robustness_csv(s))?;
    }
    if let (true, Some(f)) = (o.fit, &fit) {
        sink.put("fit.csv", export::fit_csv(f))?;
    }
    if let Some(t) = &adiabatic {
        sink.put("adiabatic.csv", export::adiabatic_csv(t))?;
    }
    if let Some(m) = &tf_map {
        sink.put("tf_map.csv", export::time_frequency_csv(m))?;
    }

    timings.insert("total".into(), total.elapsed().as_secs_f64());
    manifest.summary = summarize(&setup, optimization.as_ref(), &record);
    manifest.summary.fit = fit.as_ref().map(FitSummary::from);
    manifest.summary.max_scan_infidelity = scan.as_ref().map(|s| s.max_infidelity());
    manifest.summary.min_adiabatic_ground_population = adiabatic.as_ref().map(|t| t.min_pop_minus());
    manifest.timings_s = timings;
    manifest.artifacts = sink.artifacts.clone();
    sink.finish(&manifest)?;

    Ok(ScenarioOutcome {
        kind,
        setup,
        spectral,
        field,
        optimization,
        record,
        scan,
        fit,
        adiabatic,
        tf_map,
        manifest,
    })
}

/// Convergence summary of an optimization (or of the bare initial pulse).
pub fn summarize(setup: &Setup, opt: Option<&OptimizationRun>, record: &PropagationRecord) -> Summary {
    let final_populations = record.final_state.populations();
    let objective = final_populations[setup.target];
    match opt {
        Some(o) => {
            let last = o.last();
            let stages: Vec<StageSummary> = o
                .stages
                .iter()
                .zip(&o.stage_e0)
                .map(|(s, &e0)| StageSummary {
                    e0_au: e0,
                    termination: s.termination,
                    iterations: s.iteration,
                    objective: s.objective,
                    seeded: s.seeded,
                })
                .collect();
            let max_drift = o
                .stages
                .iter()
                .zip(&stages)
                .map(|(s, st)| if st.e0_au > 0.0 { s.max_constraint_drift() / st.e0_au } else { 0.0 })
                .fold(0.0, f64::max);
            Summary {
                termination: Some(last.termination),
                converged: last.converged(),
                initial_objective: o.stages[0].initial_objective,
                objective,
                iterations: o.stages.iter().map(|s| s.iteration).sum(),
                evaluations: o.stages.iter().map(|s| s.evaluations).sum(),
                max_constraint_drift_rel: max_drift,
                stages,
                final_populations,
                ..Summary::default()
            }
        }
        None => Summary {
            converged: true,
            initial_objective: objective,
            objective,
            final_populations,
            ..Summary::default()
        },
    }
}
