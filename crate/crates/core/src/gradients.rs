// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Derivatives of the transfer probability and of the endpoint field values
//! with respect to the spectral phase.
//!
//! All per-frequency arrays are densities: the derivative of the discrete
//! objective with respect to `φ_k` is `w_k · q_k` with `w_k` the trapezoid
//! weight. Likewise the per-time array is `∂P/∂ℰ_j / dt`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Propagator, QuantumSystem, StateVector};
use crate::error::{Result, SpooError};
use crate::pulse::{SpectralField, Synthesizer, TemporalField};
use crate::units::TimeGrid;

/// Objective and constraint gradients at one point of the flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientBundle {
    /// δP/δφ(ω)
    pub dq0_dphi: Vec<f64>,
    /// δℰ(t_i)/δφ(ω)
    pub dq1_dphi: Vec<f64>,
    /// δℰ(t_f)/δφ(ω)
    pub dq2_dphi: Vec<f64>,
}

impl GradientBundle {
    pub fn len(&self) -> usize {
        self.dq0_dphi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dq0_dphi.is_empty()
    }

    pub fn rows(&self) -> [&[f64]; 3] {
        [&self.dq0_dphi, &self.dq1_dphi, &self.dq2_dphi]
    }
}

/// `∂ℰ(t)/∂φ(ω) = 𝒜(ω) sin(ωt − φ(ω))` per grid point (density; multiply by
/// the trapezoid weight for the discrete derivative).
pub fn field_phase_gradient(spectral: &SpectralField, t: f64) -> Vec<f64> {
    let grid = spectral.grid();
    spectral
        .amplitude()
        .iter()
        .zip(spectral.phase())
        .enumerate()
        .map(|(k, (a, p))| a * (grid.omega(k) * t - p).sin())
        .collect()
}

/// Endpoint-field gradients at `t_i` and `t_f`.
pub fn constraint_gradients(spectral: &SpectralField, t_i: f64, t_f: f64) -> (Vec<f64>, Vec<f64>) {
    (
        field_phase_gradient(spectral, t_i),
        field_phase_gradient(spectral, t_f),
    )
}

/// Transfer probability and its functional derivative with respect to the
/// field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGradient {
    pub probability: f64,
    /// δP/δℰ(t_j) on the field's grid.
    pub density: Vec<f64>,
}

fn check_levels(system: &QuantumSystem, initial: usize, target: usize) -> Result<()> {
    system.check_level(initial)?;
    system.check_level(target)
}

/// δP/δℰ(t) by one forward and one backward sweep.
pub fn objective_field_gradient(
    system: &QuantumSystem,
    field: &TemporalField,
    initial: usize,
    target: usize,
) -> Result<FieldGradient> {
    check_levels(system, initial, target)?;
    let prop = Propagator::new(system, field.grid().dt());
    let init = StateVector::basis(system.n_levels(), initial)?;
    let (amp, density) = prop.transfer_gradient(field.values(), init.coefficients(), target);
    Ok(FieldGradient {
        probability: amp.norm_sqr(),
        density,
    })
}

/// Projects a field-gradient density onto the spectral phase:
/// `q(ω_k) = 𝒜_k Im[e^{−iφ_k} Σ_j dt g_j e^{iω_k t_j}]`.
pub fn chain_to_phase(synth: &Synthesizer, spectral: &SpectralField, density: &[f64]) -> Vec<f64> {
    let dt = synth.time_grid().dt();
    let scaled: Vec<f64> = density.iter().map(|g| g * dt).collect();
    synth
        .pair()
        .to_frequency(&scaled)
        .into_iter()
        .zip(spectral.amplitude())
        .zip(spectral.phase())
        .map(|((z, a), p)| a * (Complex64::from_polar(1.0, -p) * z).im)
        .collect()
}

/// Transfer probability and δP/δφ(ω).
pub fn objective_phase_gradient(
    system: &QuantumSystem,
    spectral: &SpectralField,
    tgrid: &TimeGrid,
    initial: usize,
    target: usize,
) -> Result<(f64, Vec<f64>)> {
    let problem = ControlProblem::new(system.clone(), spectral, *tgrid, initial, target)?;
    let eval = problem.evaluate(spectral)?;
    Ok((eval.probability, eval.bundle.dq0_dphi))
}

/// Everything the optimizer needs from one phase.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub probability: f64,
    pub field: TemporalField,
    pub bundle: GradientBundle,
}

/// A transfer task with cached propagator and transform.
#[derive(Debug, Clone)]
pub struct ControlProblem {
    system: QuantumSystem,
    tgrid: TimeGrid,
    initial: usize,
    target: usize,
    propagator: Propagator,
    synth: Synthesizer,
    init_state: Vec<Complex64>,
}

impl ControlProblem {
    pub fn new(
        system: QuantumSystem,
        spectral: &SpectralField,
        tgrid: TimeGrid,
        initial: usize,
        target: usize,
    ) -> Result<Self> {
        check_levels(&system, initial, target)?;
        let propagator = Propagator::new(&system, tgrid.dt());
        let synth = Synthesizer::new(spectral.grid(), &tgrid);
        let init_state = StateVector::basis(system.n_levels(), initial)?
            .coefficients()
            .to_vec();
        Ok(Self {
            system,
            tgrid,
            initial,
            target,
            propagator,
            synth,
            init_state,
        })
    }

    pub fn system(&self) -> &QuantumSystem {
        &self.system
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.tgrid
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn synthesizer(&self) -> &Synthesizer {
        &self.synth
    }

    fn check(&self, spectral: &SpectralField) -> Result<()> {
        if spectral.grid() != self.synth.frequency_grid() {
            return Err(SpooError::GridMismatch(
                "spectral field does not match the problem's frequency grid".into(),
            ));
        }
        Ok(())
    }

    pub fn field(&self, spectral: &SpectralField) -> Result<TemporalField> {
        self.check(spectral)?;
        self.synth.synthesize(spectral)
    }

    /// Final amplitudes for an already synthesized field.
    pub fn final_amplitudes(&self, field: &TemporalField) -> Vec<Complex64> {
        self.propagator.evolve(field.values(), &self.init_state)
    }

    /// Transfer probability and the field it came from.
    pub fn objective(&self, spectral: &SpectralField) -> Result<(f64, TemporalField)> {
        let field = self.field(spectral)?;
        let p = self.final_amplitudes(&field)[self.target].norm_sqr();
        Ok((p, field))
    }

    pub fn evaluate(&self, spectral: &SpectralField) -> Result<Evaluation> {
        let field = self.field(spectral)?;
        let (amp, density) =
            self.propagator
                .transfer_gradient(field.values(), &self.init_state, self.target);
        let dq0_dphi = chain_to_phase(&self.synth, spectral, &density);
        let (dq1_dphi, dq2_dphi) =
            constraint_gradients(spectral, self.tgrid.t_start(), self.tgrid.t_end());
        Ok(Evaluation {
            probability: amp.norm_sqr(),
            field,
            bundle: GradientBundle {
                dq0_dphi,
                dq1_dphi,
                dq2_dphi,
            },
        })
    }
}
