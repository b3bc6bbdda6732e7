// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success, 2 bad config or input, 3 numerical failure or an
//! optimization that did not converge (artifacts are still written), 4 I/O.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    adiabatic_decompose, fit_quadratic_phase, scaled_range, scan_robustness_jobs, ChirpFrame,
};
use crate::dynamics::{propagate, StateVector};
use crate::error::SpooError;
use crate::experiments::{
    run_optimizer, run_scenario, summarize, ArtifactSink, FitSummary, Manifest, RunOptions,
    ScenarioConfig, Setup,
};
use crate::export;
use crate::optimizer::IterationRecord;
use crate::pulse::{synthesize, SpectralField};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Propagate the configured (or `--phase`) pulse.
    Simulate,
    /// Run the phase flow and write the optimized pulse.
    Optimize,
    /// Transfer probability against scaled field strength.
    Scan,
    /// Quadratic fit of a spectral phase.
    FitPhase,
    /// Adiabatic-basis populations of a two-level run.
    Adiabatic,
    /// Optimize and run every analysis.
    Scenario,
    /// Check a config without running anything.
    Validate,
}

#[derive(Debug, Parser)]
#[command(name = "spoo", version, about = "Spectral-phase-only pulse optimization")]
struct Args {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    Simulate(CommonArgs),
    Optimize(CommonArgs),
    Scan(CommonArgs),
    FitPhase(CommonArgs),
    Adiabatic(CommonArgs),
    Scenario(CommonArgs),
    Validate(CommonArgs),
}

#[derive(Debug, clap::Args)]
struct CommonArgs {
    /// JSON scenario config.
    #[arg(short, long)]
    config: PathBuf,
    /// Output directory; overrides `outputs.directory`.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Config override such as `optimizer.sigma_invcm=5000`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Spectrum CSV whose phase column replaces the initial phase.
    #[arg(long)]
    phase: Option<PathBuf>,
    /// 320 time steps per fs instead of `window.n_steps`.
    #[arg(long)]
    fine_resolution: bool,
    /// Worker threads for scans.
    #[arg(short, long)]
    jobs: Option<usize>,
    /// More output; repeat for debug.
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Only warnings and errors.
    #[arg(short, long)]
    quiet: bool,
}

/// A parsed command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliInvocation {
    pub command: Command,
    pub config_path: PathBuf,
    pub output_dir: Option<PathBuf>,
    pub overrides: Vec<String>,
    pub phase_path: Option<PathBuf>,
    pub fine_resolution: bool,
    pub jobs: Option<usize>,
    /// 0 quiet, 1 normal, 2+ verbose.
    pub verbosity: u8,
}

impl CliInvocation {
    pub fn new(command: Command, config_path: impl Into<PathBuf>) -> Self {
        Self {
            command,
            config_path: config_path.into(),
            output_dir: None,
            overrides: Vec::new(),
            phase_path: None,
            fine_resolution: false,
            jobs: None,
            verbosity: 1,
        }
    }

    pub fn log_level(&self) -> log::LevelFilter {
        match self.verbosity {
            0 => log::LevelFilter::Warn,
            1 => log::LevelFilter::Info,
            _ => log::LevelFilter::Debug,
        }
    }
}

/// Parses `argv`; clap handles `--help` and usage errors itself.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<CliInvocation, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    let (command, c) = match args.command {
        Sub::Simulate(c) => (Command::Simulate, c),
        Sub::Optimize(c) => (Command::Optimize, c),
        Sub::Scan(c) => (Command::Scan, c),
        Sub::FitPhase(c) => (Command::FitPhase, c),
        Sub::Adiabatic(c) => (Command::Adiabatic, c),
        Sub::Scenario(c) => (Command::Scenario, c),
        Sub::Validate(c) => (Command::Validate, c),
    };
    Ok(CliInvocation {
        command,
        config_path: c.config,
        output_dir: c.out,
        overrides: c.overrides,
        phase_path: c.phase,
        fine_resolution: c.fine_resolution,
        jobs: c.jobs,
        verbosity: if c.quiet { 0 } else { 1 + c.verbose },
    })
}

/// Failure with its exit code, reported as one JSON line on stderr.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub exit_code: i32,
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl Failure {
    fn config(message: String, diagnostics: Vec<String>) -> Self {
        Self {
            exit_code: EXIT_CONFIG,
            kind: "config",
            message,
            diagnostics,
        }
    }
}

impl From<SpooError> for Failure {
    fn from(e: SpooError) -> Self {
        let (exit_code, kind) = match &e {
            SpooError::Io(_) => (EXIT_IO, "io"),
            SpooError::Config(_)
            | SpooError::Json(_)
            | SpooError::Csv { .. }
            | SpooError::InvalidParameter { .. }
            | SpooError::LevelOutOfRange { .. }
            | SpooError::InvalidSystem(_)
            | SpooError::LengthMismatch { .. } => (EXIT_CONFIG, "config"),
            SpooError::NonFinite(_)
            | SpooError::NotNormalized(_)
            | SpooError::GridMismatch(_)
            | SpooError::DegenerateFit(_) => (EXIT_NUMERICAL, "numerical"),
        };
        Self {
            exit_code,
            kind,
            message: e.to_string(),
            diagnostics: Vec::new(),
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run(inv: &CliInvocation) -> i32 {
    match execute(inv) {
        Ok(code) => code,
        Err(f) => {
            eprintln!(
                "{}",
                serde_json::to_string(&f).unwrap_or_else(|_| f.message.clone())
            );
            f.exit_code
        }
    }
}

fn load(inv: &CliInvocation) -> Result<ScenarioConfig, Failure> {
    if !inv.config_path.is_file() {
        return Err(Failure::config(
            format!("config file {} not found", inv.config_path.display()),
            Vec::new(),
        ));
    }
    let mut overrides = inv.overrides.clone();
    if inv.fine_resolution {
        overrides.push("window.fine_resolution=true".into());
    }
    let config = ScenarioConfig::load(&inv.config_path, &overrides).map_err(|e| match e {
        SpooError::Io(io) => Failure {
            exit_code: EXIT_CONFIG,
            kind: "config",
            message: format!("cannot read {}: {io}", inv.config_path.display()),
            diagnostics: Vec::new(),
        },
        other => Failure::config(other.to_string(), Vec::new()),
    })?;
    Ok(config)
}

/// Checks a config file; an empty list means it is valid.
pub fn validate_config(path: &Path) -> Result<Vec<String>, SpooError> {
    let text = std::fs::read_to_string(path)?;
    let config = match ScenarioConfig::from_json_str(&text) {
        Ok(c) => c,
        Err(e) => return Ok(vec![format!("schema: {e}")]),
    };
    Ok(config.diagnostics().iter().map(|d| d.to_string()).collect())
}

fn execute(inv: &CliInvocation) -> Result<i32, Failure> {
    let config = load(inv)?;
    let diags: Vec<String> = config.diagnostics().iter().map(|d| d.to_string()).collect();
    if inv.command == Command::Validate {
        if diags.is_empty() {
            println!("{}: ok", inv.config_path.display());
            return Ok(EXIT_OK);
        }
        for d in &diags {
            println!("{d}");
        }
        return Err(Failure::config(
            format!("{} problem(s) in {}", diags.len(), inv.config_path.display()),
            diags,
        ));
    }
    if !diags.is_empty() {
        return Err(Failure::config("invalid config".into(), diags));
    }
    let out_dir = inv
        .output_dir
        .clone()
        .or_else(|| config.output_dir())
        .unwrap_or_else(|| PathBuf::from("spoo-out"));
    let jobs = inv.jobs.unwrap_or_else(crate::analysis::default_jobs).max(1);
    let mut progress = |r: &IterationRecord| {
        log::info!(
            "iter {:>5}  P = {:.10}  step = {:.3e}  drift = {:.1e}",
            r.iteration,
            r.objective,
            r.step,
            r.constraint_drift_ti.max(r.constraint_drift_tf)
        );
    };

    if inv.command == Command::Scenario {
        if inv.phase_path.is_some() {
            log::warn!("--phase is ignored by `scenario`; it always starts from the config");
        }
        let outcome = run_scenario(
            &config,
            RunOptions {
                jobs,
                output_dir: Some(out_dir.clone()),
                progress: Some(&mut progress),
            },
        )?;
        report(&outcome.manifest, &out_dir);
        return Ok(if outcome.converged() {
            EXIT_OK
        } else {
            EXIT_NUMERICAL
        });
    }

    let setup = config.build()?;
    let spectral = match &inv.phase_path {
        Some(p) => setup.spectral.with_phase(&export::read_spectrum_phase(p)?)?,
        None => setup.spectral.clone(),
    };
    let mut sink = ArtifactSink::new(Some(out_dir.clone()));
    let mut manifest = Manifest::new(command_name(inv.command), &config);
    let started = std::time::Instant::now();
    let mut code = EXIT_OK;

    match inv.command {
        Command::Simulate => {
            let (field, record) = simulate(&setup, &spectral)?;
            sink.put("spectrum.csv", export::spectrum_csv(&spectral))?;
            sink.put(
                "field.csv",
                export::field_csv(&field, thin(field.values().len(), config.outputs.field_max_rows)),
            )?;
            sink.put("populations.csv", export::populations_csv(&record))?;
            manifest.summary = summarize(&setup, None, &record);
        }
        Command::Optimize => {
            let start = Setup {
                spectral: spectral.clone(),
                ..setup.clone()
            };
            let run = run_optimizer(&start, &config.optimizer.continuation_e0_au, &mut progress)?;
            let (field, record) = simulate(&setup, &run.spectral)?;
            sink.put("spectrum.csv", export::spectrum_csv(&run.spectral))?;
            sink.put(
                "field.csv",
                export::field_csv(&field, thin(field.values().len(), config.outputs.field_max_rows)),
            )?;
            sink.put("history.csv", export::history_csv(&run.history()))?;
            sink.put("populations.csv", export::populations_csv(&record))?;
            manifest.summary = summarize(&setup, Some(&run), &record);
            if !run.converged() {
                code = EXIT_NUMERICAL;
            }
        }
        Command::Scan => {
            let a = &config.analysis;
            let values = scaled_range(setup.e0, a.scan_min_scale, a.scan_max_scale, a.scan_points);
            let scan = scan_robustness_jobs(
                &setup.system,
                &spectral,
                &setup.time_grid,
                setup.initial,
                setup.target,
                &values,
                jobs,
            )?;
            sink.put("robustness.csv", export::robustness_csv(&scan))?;
            manifest.summary.max_scan_infidelity = Some(scan.max_infidelity());
        }
        Command::FitPhase => {
            let fit = fit_quadratic_phase(&spectral, config.analysis.fit_amplitude_threshold)?;
            sink.put("fit.csv", export::fit_csv(&fit))?;
            manifest.summary.fit = Some(FitSummary::from(&fit));
        }
        Command::Adiabatic => {
            let fit = fit_quadratic_phase(&spectral, config.analysis.fit_amplitude_threshold)?;
            let (_, record) = simulate(&setup, &spectral)?;
            let trace = adiabatic_decompose(
                &setup.system,
                &ChirpFrame::from_fit(&fit),
                &record,
                setup.e0,
                setup.tau0,
            )?;
            sink.put("adiabatic.csv", export::adiabatic_csv(&trace))?;
            manifest.summary = summarize(&setup, None, &record);
            manifest.summary.fit = Some(FitSummary::from(&fit));
            manifest.summary.min_adiabatic_ground_population = Some(trace.min_pop_minus());
        }
        Command::Scenario | Command::Validate => unreachable!("handled above"),
    }
    manifest
        .timings_s
        .insert("total".into(), started.elapsed().as_secs_f64());
    manifest.artifacts = sink.artifacts.clone();
    sink.finish(&manifest)?;
    report(&manifest, &out_dir);
    Ok(code)
}

fn simulate(
    setup: &Setup,
    spectral: &SpectralField,
) -> crate::Result<(crate::pulse::TemporalField, crate::dynamics::PropagationRecord)> {
    let field = synthesize(spectral, &setup.time_grid)?;
    let record = propagate(
        &setup.system,
        &field,
        &StateVector::basis(setup.system.n_levels(), setup.initial)?,
        0,
    )?;
    Ok((field, record))
}

fn thin(len: usize, max_rows: usize) -> usize {
    len.div_ceil(max_rows.max(1)).max(1)
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Simulate => "simulate",
        Command::Optimize => "optimize",
        Command::Scan => "scan",
        Command::FitPhase => "fit-phase",
        Command::Adiabatic => "adiabatic",
        Command::Scenario => "scenario",
        Command::Validate => "validate",
    }
}

fn report(manifest: &Manifest, dir: &Path) {
    let s = &manifest.summary;
    if let Some(t) = s.termination {
        log::info!(
            "{:?}: P = {:.10} after {} iterations",
            t,
            s.objective,
            s.iterations
        );
    }
    if let Some(f) = &s.fit {
        log::info!(
            "fit: beta0 = {:.1} fs², omega_c = {} cm⁻¹, residual = {:.3e} rad",
            f.beta0_fs2,
            f.omega_c_invcm.map_or("-".into(), |w| format!("{w:.2}")),
            f.residual_rad
        );
    }
    log::info!(
        "{} artifact(s) and manifest.json in {}",
        manifest.artifacts.len(),
        dir.display()
    );
}
