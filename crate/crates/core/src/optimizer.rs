// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Constrained, filtered gradient flow on the spectral phase.
//!
//! With `q_0 = δP/δφ` and `q_1, q_2` the endpoint-field gradients, the flow
//! direction is `d = S * Σ_ℓ c_ℓ q_ℓ` with `c = Γ⁻¹ e_0` and
//! `Γ_ℓℓ' = ⟨q_ℓ, S * q_ℓ'⟩`. Then `⟨q_0, d⟩ = 1` and `⟨q_{1,2}, d⟩ = 0`: to first
//! order the step raises P by exactly `δs` and leaves both endpoint fields
//! alone. `S` is a Gaussian kernel in frequency; without it the flow is the
//! bare projected gradient.

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::dynamics::QuantumSystem;
use crate::error::{Result, SpooError};
use crate::gradients::{ControlProblem, Evaluation, GradientBundle};
use crate::pulse::{quadratic_phase, SpectralField};
use crate::units::{chirp_to_atomic, FrequencyGrid, TimeGrid};

/// Gaussian smoothing kernel `S(Δ) = gain · exp(−4 ln2 Δ²/σ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    /// Full width at half maximum, a.u. angular frequency.
    pub sigma: f64,
    pub enabled: bool,
    /// Peak value of the kernel. The flow direction does not depend on it.
    #[serde(default = "unit_gain")]
    pub gain: f64,
}

fn unit_gain() -> f64 {
    1.0
}

impl FilterSpec {
    pub fn disabled() -> Self {
        Self {
            sigma: 1.0,
            enabled: false,
            gain: 1.0,
        }
    }

    pub fn gaussian(sigma: f64) -> Self {
        Self {
            sigma,
            enabled: true,
            gain: 1.0,
        }
    }

    pub fn kernel(&self, delta: f64) -> f64 {
        let x = delta / self.sigma;
        self.gain * (-4.0 * std::f64::consts::LN_2 * x * x).exp()
    }

    /// Offsets beyond this are dropped; the kernel is e^{−25} ≈ 1.4e-11 there.
    pub fn support(&self) -> f64 {
        5.0 * self.sigma / (2.0 * std::f64::consts::LN_2.sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if self.enabled && !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(SpooError::invalid("filter.sigma", "must be positive"));
        }
        if self.enabled && !(self.gain > 0.0 && self.gain.is_finite()) {
            return Err(SpooError::invalid("filter.gain", "must be positive"));
        }
        Ok(())
    }
}

/// `out_k = Σ_k' S(ω_k' − ω_k) w_k' in_k'`; the identity when disabled.
pub fn apply_filter(input: &[f64], filter: &FilterSpec, grid: &FrequencyGrid) -> Vec<f64> {
    if !filter.enabled {
        return input.to_vec();
    }
    let n = grid.len();
    debug_assert_eq!(input.len(), n);
    let dw = grid.spacing();
    let reach = ((filter.support() / dw).floor() as usize).min(n - 1);
    // Gain goes on once at the end: the sum cancels heavily for wide kernels
    // and per-tap rounding of the gain would not.
    let unit = FilterSpec { gain: 1.0, ..*filter };
    let taps: Vec<f64> = (0..=reach).map(|m| unit.kernel(m as f64 * dw)).collect();
    let weighted: Vec<f64> = input
        .iter()
        .zip(grid.weights())
        .map(|(x, w)| x * w)
        .collect();
    (0..n)
        .map(|k| {
            let lo = k.saturating_sub(reach);
            let hi = (k + reach).min(n - 1);
            filter.gain * (lo..=hi).map(|kp| taps[kp.abs_diff(k)] * weighted[kp]).sum::<f64>()
        })
        .collect()
}

/// Gram matrix of the gradients in the filter metric, with the magnitude of
/// the sums that produced each diagonal entry.
///
/// A gradient that oscillates much faster than the kernel width is averaged
/// to roundoff. Measuring rows against `scale` rather than against their own
/// diagonal keeps such rows at their true, negligible size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaMatrix {
    pub values: [[f64; 3]; 3],
    /// `Σ_k w_k |q_a| (S * |q_a|)`; bounds `|Γ_ab| ≤ √(scale_a scale_b)`.
    pub scale: [f64; 3],
}

impl GammaMatrix {
    /// Plain Gram matrix; each row is its own scale.
    pub fn gram(values: [[f64; 3]; 3]) -> Self {
        Self {
            values,
            scale: [values[0][0], values[1][1], values[2][2]],
        }
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a][b]
    }

    fn inv_sqrt_scale(&self) -> [f64; 3] {
        self.scale
            .map(|v| if v > 0.0 && v.is_finite() { 1.0 / v.sqrt() } else { 0.0 })
    }

    /// Largest `|Γ_ab − Γ_ba| / √(scale_a scale_b)`.
    pub fn asymmetry(&self) -> f64 {
        let d = self.inv_sqrt_scale();
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                worst = worst.max((self.values[a][b] - self.values[b][a]).abs() * d[a] * d[b]);
            }
        }
        worst
    }

    /// Symmetric part in scaled units, `D Γ D` with `D = diag(scale)^{-1/2}`.
    fn normalized(&self) -> Matrix3<f64> {
        let d = self.inv_sqrt_scale();
        Matrix3::from_fn(|a, b| d[a] * 0.5 * (self.values[a][b] + self.values[b][a]) * d[b])
    }

    /// Eigenvalues of the normalized symmetric part, ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let mut e: Vec<f64> = SymmetricEigen::new(self.normalized())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        e.sort_by(|a, b| a.total_cmp(b));
        [e[0], e[1], e[2]]
    }

    /// Positive semidefinite up to `tol` in normalized units.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.eigenvalues()[0] >= -tol
    }
}

fn masked(values: &[f64], mask: &[bool]) -> Vec<f64> {
    values
        .iter()
        .zip(mask)
        .map(|(v, &m)| if m { *v } else { 0.0 })
        .collect()
}

fn weighted_dot(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    a.iter().zip(b).zip(w).map(|((x, y), w)| x * y * w).sum()
}

/// `Γ_ℓℓ' = Σ_k w_k q_ℓ(ω_k) (S * q_ℓ')(ω_k)`.
pub fn gamma_matrix(bundle: &GradientBundle, filter: &FilterSpec, grid: &FrequencyGrid) -> GammaMatrix {
    let rows = bundle.rows();
    let filtered: Vec<Vec<f64>> = rows.iter().map(|q| apply_filter(q, filter, grid)).collect();
    gamma_from(&rows, &filtered, filter, grid)
}

fn gamma_from(rows: &[&[f64]; 3], filtered: &[Vec<f64>], filter: &FilterSpec, grid: &FrequencyGrid) -> GammaMatrix {
    let w = grid.weights();
    let mut g = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            g[a][b] = weighted_dot(rows[a], &filtered[b], &w);
        }
    }
    let scale = [0, 1, 2].map(|a| {
        let abs: Vec<f64> = rows[a].iter().map(|x| x.abs()).collect();
        weighted_dot(&abs, &apply_filter(&abs, filter, grid), &w)
    });
    GammaMatrix { values: g, scale }
}

/// Normalized diagonal below which a constraint row is taken to be roundoff:
/// the filter has averaged it away. The sums carry about `√n·ε` relative
/// error. The objective row is never dropped; its filtered part shrinking is
/// what convergence of the filtered flow looks like.
pub const GAMMA_ROW_FLOOR: f64 = 1e-13;

/// Pseudo-inverse of the symmetric part in normalized units, so neither the
/// units of the rows nor the kernel gain enter the cutoff. Constraint rows
/// the filter wiped out are dropped first; `rcond` then acts on the rest relative to
/// the largest eigenvalue. Returns the inverse and whether anything was
/// dropped.
fn scaled_pinv(gamma: &GammaMatrix, rcond: f64) -> (Matrix3<f64>, bool) {
    let d = gamma.inv_sqrt_scale();
    let mut c = gamma.normalized();
    let keep: Vec<bool> = (0..3)
        .map(|a| d[a] > 0.0 && c[(a, a)] > if a == 0 { 0.0 } else { GAMMA_ROW_FLOOR })
        .collect();
    for a in 0..3 {
        for b in 0..3 {
            if !(keep[a] && keep[b]) {
                c[(a, b)] = 0.0;
            }
        }
    }
    let eig = SymmetricEigen::new(c);
    let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut truncated = keep.iter().any(|k| !k);
    let mut inv = Matrix3::zeros();
    for i in 0..3 {
        let l = eig.eigenvalues[i];
        if top > 0.0 && l > rcond * top {
            let v = eig.eigenvectors.column(i);
            inv += (v * v.transpose()) / l;
        } else {
            truncated = true;
        }
    }
    let out = Matrix3::from_fn(|a, b| d[a] * inv[(a, b)] * d[b]);
    (out, truncated)
}

/// Knobs of the flow and its step control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub filter: FilterSpec,
    pub max_iterations: usize,
    pub target_objective: f64,
    /// First δs, in units of predicted objective gain.
    pub initial_step: f64,
    pub step_shrink: f64,
    pub step_grow: f64,
    /// Smallest δs tried before giving up.
    pub min_step: f64,
    /// δs is capped at this fraction of the remaining deficit 1 − P.
    pub max_step_fraction: f64,
    pub gamma_rcond: f64,
    pub constraints_enabled: bool,
    /// Largest accepted endpoint-field drift, relative to ℰ₀.
    pub max_constraint_drift: f64,
    /// An accepted step improving P by less than this counts as stalled.
    pub stall_tolerance: f64,
    pub stall_iterations: usize,
    /// Points with 𝒜 below this fraction of the peak are frozen.
    pub amplitude_cutoff: f64,
    /// Quadratic phase (a.u. time²) added to a start that is an exact
    /// stationary point, e.g. any time-symmetric field of a two-level system.
    pub seed_chirp: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            filter: FilterSpec::disabled(),
            max_iterations: 5000,
            target_objective: 0.9999,
            initial_step: 1e-2,
            step_shrink: 0.5,
            step_grow: 2.0,
            min_step: 1e-15,
            max_step_fraction: 0.5,
            gamma_rcond: 1e-10,
            constraints_enabled: true,
            max_constraint_drift: 1e-7,
            stall_tolerance: 1e-12,
            stall_iterations: 20,
            amplitude_cutoff: 1e-8,
            seed_chirp: chirp_to_atomic(1.0),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        self.filter.validate()?;
        let positive = [
            ("initial_step", self.initial_step),
            ("step_shrink", self.step_shrink),
            ("step_grow", self.step_grow),
            ("min_step", self.min_step),
            ("max_step_fraction", self.max_step_fraction),
            ("gamma_rcond", self.gamma_rcond),
            ("max_constraint_drift", self.max_constraint_drift),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SpooError::invalid("optimizer", format!("{name} must be positive")));
            }
        }
        if self.step_shrink >= 1.0 {
            return Err(SpooError::invalid("optimizer", "step_shrink must be below 1"));
        }
        if self.step_grow < 1.0 {
            return Err(SpooError::invalid("optimizer", "step_grow must be at least 1"));
        }
        if !(self.target_objective > 0.0 && self.target_objective <= 1.0) {
            return Err(SpooError::invalid("target_objective", "must lie in (0, 1]"));
        }
        if self.max_iterations == 0 {
            return Err(SpooError::invalid("max_iterations", "must be positive"));
        }
        if !self.seed_chirp.is_finite() {
            return Err(SpooError::invalid("seed_chirp", "must be finite"));
        }
        Ok(())
    }
}

/// Flow direction and the diagnostics of the Γ solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    pub values: Vec<f64>,
    pub gamma: GammaMatrix,
    /// Coefficients `c_ℓ` of the filtered gradients.
    pub coefficients: [f64; 3],
    /// The pseudo-inverse dropped at least one direction.
    pub truncated: bool,
}

/// `∂φ/∂s` for one gradient bundle. Frozen points (tiny amplitude) get 0.
pub fn update_direction(
    bundle: &GradientBundle,
    filter: &FilterSpec,
    grid: &FrequencyGrid,
    config: &OptimizerConfig,
) -> Direction {
    let mask = vec![true; grid.len()];
    direction_masked(bundle, filter, grid, config, &mask)
}

fn direction_masked(
    bundle: &GradientBundle,
    filter: &FilterSpec,
    grid: &FrequencyGrid,
    config: &OptimizerConfig,
    mask: &[bool],
) -> Direction {
    let rows: Vec<Vec<f64>> = bundle.rows().iter().map(|q| masked(q, mask)).collect();
    let filtered: Vec<Vec<f64>> = rows
        .iter()
        .map(|q| masked(&apply_filter(q, filter, grid), mask))
        .collect();
    let gamma = gamma_from(&[&rows[0], &rows[1], &rows[2]], &filtered, filter, grid);
    let (coefficients, truncated) = if config.constraints_enabled {
        let (inv, truncated) = scaled_pinv(&gamma, config.gamma_rcond);
        ([inv[(0, 0)], inv[(0, 1)], inv[(0, 2)]], truncated)
    } else {
        ([1.0, 0.0, 0.0], false)
    };
    let values = (0..grid.len())
        .map(|k| (0..3).map(|l| coefficients[l] * filtered[l][k]).sum())
        .collect();
    Direction {
        values,
        gamma,
        coefficients,
        truncated,
    }
}

/// One accepted iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub s: f64,
    pub objective: f64,
    pub step: f64,
    pub constraint_drift_ti: f64,
    pub constraint_drift_tf: f64,
    pub gamma_asymmetry: f64,
    pub gamma_min_eigenvalue: f64,
    pub gamma_max_eigenvalue: f64,
    pub pinv_truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Objective reached the target.
    Converged,
    /// Iteration budget used up.
    MaxIterations,
    /// Improvements stayed below the stall tolerance.
    Stalled,
    /// No admissible step above the minimum step size.
    Stagnated,
    /// Zero gradient with nothing to seed from.
    Stationary,
}

/// Where the flow ended and how it got there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationState {
    pub s: f64,
    pub phase: Vec<f64>,
    pub objective: f64,
    pub initial_objective: f64,
    /// ℰ(t_i), ℰ(t_f) of the final field.
    pub constraint_values: (f64, f64),
    pub initial_constraint_values: (f64, f64),
    pub step: f64,
    pub iteration: usize,
    pub history: Vec<IterationRecord>,
    pub termination: Termination,
    /// Some Γ solve needed the pseudo-inverse cutoff.
    pub pinv_used: bool,
    /// The start was stationary and the seed chirp was applied.
    pub seeded: bool,
    pub evaluations: usize,
}

impl OptimizationState {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn max_constraint_drift(&self) -> f64 {
        self.history
            .iter()
            .map(|h| h.constraint_drift_ti.max(h.constraint_drift_tf))
            .fold(0.0, f64::max)
    }
}

/// `ℰ(t) = Σ_k w_k 𝒜_k cos(ω_k t − φ_k)` at a single time.
fn endpoint_field(amplitude: &[f64], phase: &[f64], grid: &FrequencyGrid, w: &[f64], t: f64) -> f64 {
    (0..amplitude.len())
        .map(|k| w[k] * amplitude[k] * (grid.omega(k) * t - phase[k]).cos())
        .sum()
}

/// Newton steps along the endpoint gradients (minimum-norm in the
/// quadrature metric) that pull ℰ(t_i), ℰ(t_f) back to `reference`. The
/// Euler step keeps them fixed only to first order; this removes the
/// second-order part.
#[allow(clippy::too_many_arguments)]
fn retract(
    phase: &mut [f64],
    amplitude: &[f64],
    grid: &FrequencyGrid,
    w: &[f64],
    times: (f64, f64),
    reference: (f64, f64),
    tolerance: f64,
    rcond: f64,
) {
    for _ in 0..4 {
        let r = [
            endpoint_field(amplitude, phase, grid, w, times.0) - reference.0,
            endpoint_field(amplitude, phase, grid, w, times.1) - reference.1,
        ];
        if r[0].abs().max(r[1].abs()) <= tolerance {
            return;
        }
        let q: Vec<Vec<f64>> = [times.0, times.1]
            .iter()
            .map(|&t| {
                (0..amplitude.len())
                    .map(|k| amplitude[k] * (grid.omega(k) * t - phase[k]).sin())
                    .collect()
            })
            .collect();
        let g = [
            [weighted_dot(&q[0], &q[0], w), weighted_dot(&q[0], &q[1], w)],
            [weighted_dot(&q[1], &q[0], w), weighted_dot(&q[1], &q[1], w)],
        ];
        let gamma = GammaMatrix::gram([
            [g[0][0], g[0][1], 0.0],
            [g[1][0], g[1][1], 0.0],
            [0.0, 0.0, 0.0],
        ]);
        let (inv, _) = scaled_pinv(&gamma, rcond);
        // ∂ℰ(t)/∂φ_k = w_k q_k, so δφ = −Σ b_ℓ q_ℓ with G b = r.
        let b = [
            inv[(0, 0)] * r[0] + inv[(0, 1)] * r[1],
            inv[(1, 0)] * r[0] + inv[(1, 1)] * r[1],
        ];
        for k in 0..phase.len() {
            phase[k] -= b[0] * q[0][k] + b[1] * q[1][k];
        }
    }
}

fn drift(field: &[f64], reference: (f64, f64)) -> (f64, f64) {
    (
        (field[0] - reference.0).abs(),
        (field[field.len() - 1] - reference.1).abs(),
    )
}

/// Runs the flow from `spectral0` until the target, a stall, or the iteration
/// budget. `observer` sees every accepted iteration.
pub fn optimize_with(
    problem: &ControlProblem,
    spectral0: &SpectralField,
    config: &OptimizerConfig,
    observer: &mut dyn FnMut(&IterationRecord),
) -> Result<(SpectralField, OptimizationState)> {
    config.validate()?;
    let grid = *spectral0.grid();
    let w = grid.weights();
    let peak = spectral0.amplitude().iter().fold(0.0f64, |m, a| m.max(*a));
    let mask: Vec<bool> = spectral0
        .amplitude()
        .iter()
        .map(|&a| a >= config.amplitude_cutoff * peak && a > 0.0)
        .collect();
    let drift_limit = config.max_constraint_drift * spectral0.e0();
    let tgrid = problem.time_grid();
    let endpoints = (tgrid.t_start(), tgrid.t_end());

    let mut spectral = spectral0.clone();
    let mut eval: Evaluation = problem.evaluate(&spectral)?;
    let mut evaluations = 1;
    let field0 = eval.field.values();
    let reference = (field0[0], field0[field0.len() - 1]);
    let initial_objective = eval.probability;

    let mut seeded = false;
    let q0_norm = weighted_dot(&eval.bundle.dq0_dphi, &eval.bundle.dq0_dphi, &w).sqrt();
    if q0_norm < 1e-6 * initial_objective.max(1e-300).sqrt() * peak.max(1e-300)
        && config.seed_chirp != 0.0
        && peak > 0.0
    {
        // Every time-symmetric field of a two-level system is a stationary
        // point of P. A small chirp picks the branch to follow.
        let seed = quadratic_phase(&grid, spectral.omega0(), config.seed_chirp);
        let phase: Vec<f64> = spectral.phase().iter().zip(&seed).map(|(p, s)| p + s).collect();
        spectral = spectral.with_phase(&phase)?;
        eval = problem.evaluate(&spectral)?;
        evaluations += 1;
        seeded = true;
    }

    let mut state = OptimizationState {
        s: 0.0,
        phase: spectral.phase().to_vec(),
        objective: eval.probability,
        initial_objective,
        constraint_values: (0.0, 0.0),
        initial_constraint_values: reference,
        step: config.initial_step,
        iteration: 0,
        history: Vec::new(),
        termination: Termination::MaxIterations,
        pinv_used: false,
        seeded,
        evaluations,
    };
    let mut stall = 0usize;
    let mut step = config.initial_step;

    loop {
        if state.objective >= config.target_objective {
            state.termination = Termination::Converged;
            break;
        }
        if state.iteration >= config.max_iterations {
            state.termination = Termination::MaxIterations;
            break;
        }
        let dir = direction_masked(&eval.bundle, &config.filter, &grid, config, &mask);
        state.pinv_used |= dir.truncated;
        let gain = weighted_dot(&eval.bundle.dq0_dphi, &dir.values, &w);
        if !(gain > 0.0) || !gain.is_finite() {
            state.termination = if state.iteration == 0 && gain == 0.0 {
                Termination::Stationary
            } else {
                Termination::Stagnated
            };
            break;
        }

        let deficit = (1.0 - state.objective).max(0.0);
        step = step.min(config.max_step_fraction * deficit).max(config.min_step);
        let mut accepted = None;
        while step >= config.min_step {
            let scale = step / gain;
            let mut phase: Vec<f64> = spectral
                .phase()
                .iter()
                .zip(&dir.values)
                .map(|(p, d)| p + scale * d)
                .collect();
            if config.constraints_enabled {
                retract(
                    &mut phase,
                    spectral.amplitude(),
                    &grid,
                    &w,
                    endpoints,
                    reference,
                    1e-3 * drift_limit,
                    config.gamma_rcond,
                );
            }
            let trial = spectral.with_phase(&phase)?;
            let (p, field) = problem.objective(&trial)?;
            state.evaluations += 1;
            let (di, df) = drift(field.values(), reference);
            let drift_ok = !config.constraints_enabled || di.max(df) <= drift_limit;
            if p >= state.objective && drift_ok {
                accepted = Some((trial, p, di, df));
                break;
            }
                step *= config.step_shrink;
        }
        let Some((trial, p, di, df)) = accepted else {
            state.termination = Termination::Stagnated;
            break;
        };

        let improvement = p - state.objective;
        spectral = trial;
        eval = problem.evaluate(&spectral)?;
        state.evaluations += 1;
        state.iteration += 1;
        state.s += step;
        state.objective = eval.probability.max(p);
        state.step = step;
        let eig = dir.gamma.eigenvalues();
        let record = IterationRecord {
            iteration: state.iteration,
            s: state.s,
            objective: state.objective,
            step,
            constraint_drift_ti: di,
            constraint_drift_tf: df,
            gamma_asymmetry: dir.gamma.asymmetry(),
            gamma_min_eigenvalue: eig[0],
            gamma_max_eigenvalue: eig[2],
            pinv_truncated: dir.truncated,
        };
        observer(&record);
        state.history.push(record);

        if improvement < config.stall_tolerance {
            stall += 1;
            if stall >= config.stall_iterations {
                state.termination = Termination::Stalled;
                break;
            }
        } else {
            stall = 0;
        }
        step *= config.step_grow;
    }

    let f = eval.field.values();
    state.constraint_values = (f[0], f[f.len() - 1]);
    state.phase = spectral.phase().to_vec();
    Ok((spectral, state))
}

/// Builds the control problem and runs [`optimize_with`] silently.
pub fn optimize(
    system: &QuantumSystem,
    spectral0: &SpectralField,
    tgrid: &TimeGrid,
    initial: usize,
    target: usize,
    config: &OptimizerConfig,
) -> Result<(SpectralField, OptimizationState)> {
    let problem = ControlProblem::new(system.clone(), spectral0, *tgrid, initial, target)?;
    optimize_with(&problem, spectral0, config, &mut |_| {})
}
