// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Spectral fields with a fixed Gaussian amplitude and a free phase, and their
//! real temporal fields.
//!
//! The temporal field is the trapezoid sum
//! `ℰ(t_j) = Re Σ_k w_k 𝒜_k exp(iφ_k) exp(−iω_k t_j)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpooError};
use crate::transform::FourierPair;
use crate::units::{FrequencyGrid, TimeGrid};

/// Edge amplitude (relative to peak) above which truncation is reported.
pub const EDGE_TOLERANCE: f64 = 1e-6;

/// Gaussian spectral amplitude `ℰ₀ /√(2πΔω²) · exp(−(ω−ω₀)²/2Δω²)`.
pub fn gaussian_profile(e0: f64, omega0: f64, delta_omega: f64, omega: f64) -> f64 {
    let x = (omega - omega0) / delta_omega;
    e0 / ((2.0 * PI).sqrt() * delta_omega) * (-0.5 * x * x).exp()
}

/// Spectrum on a frequency grid. The amplitude is fixed at construction and
/// only the phase is ever replaced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    grid: FrequencyGrid,
    amplitude: Vec<f64>,
    phase: Vec<f64>,
    omega0: f64,
    delta_omega: f64,
    e0: f64,
}

impl SpectralField {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn len(&self) -> usize {
        self.amplitude.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitude.is_empty()
    }

    /// Same phase, amplitude for a different peak strength.
    pub fn with_e0(&self, e0: f64) -> Result<Self> {
        gaussian_amplitude(e0, self.omega0, self.delta_omega, &self.grid)?.with_phase(&self.phase)
    }

    /// Replaces the phase, keeping the amplitude bit for bit.
    pub fn with_phase(&self, phase: &[f64]) -> Result<Self> {
        if phase.len() != self.amplitude.len() {
            return Err(SpooError::LengthMismatch {
                expected: self.amplitude.len(),
                actual: phase.len(),
            });
        }
        if let Some(i) = phase.iter().position(|p| !p.is_finite()) {
            return Err(SpooError::NonFinite(i));
        }
        Ok(Self {
            phase: phase.to_vec(),
            ..self.clone()
        })
    }

    /// Largest edge amplitude relative to the peak.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.amplitude.iter().cloned().fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        self.amplitude[0].max(self.amplitude[self.amplitude.len() - 1]) / peak
    }

    /// Quadrature-weighted complex spectrum `w_k 𝒜_k e^{iφ_k}`.
    pub fn weighted_spectrum(&self) -> Vec<Complex64> {
        self.grid
            .weights()
            .iter()
            .zip(&self.amplitude)
            .zip(&self.phase)
            .map(|((w, a), p)| Complex64::from_polar(w * a, *p))
            .collect()
    }
}

/// Gaussian amplitude of peak strength `e0` on `grid`, zero phase.
pub fn gaussian_amplitude(
    e0: f64,
    omega0: f64,
    delta_omega: f64,
    grid: &FrequencyGrid,
) -> Result<SpectralField> {
    if !(e0 >= 0.0 && e0.is_finite()) {
        return Err(SpooError::invalid("e0", "must be non-negative"));
    }
    if !(delta_omega > 0.0 && delta_omega.is_finite()) {
        return Err(SpooError::invalid("delta_omega", "must be positive"));
    }
    if !(omega0.is_finite()) {
        return Err(SpooError::invalid("omega0", "must be finite"));
    }
    let amplitude = (0..grid.len())
        .map(|k| gaussian_profile(e0, omega0, delta_omega, grid.omega(k)))
        .collect();
    Ok(SpectralField {
        grid: *grid,
        amplitude,
        phase: vec![0.0; grid.len()],
        omega0,
        delta_omega,
        e0,
    })
}

/// Free-function form of [`SpectralField::with_phase`].
pub fn set_phase(spectral: &SpectralField, phase: &[f64]) -> Result<SpectralField> {
    spectral.with_phase(phase)
}

/// `β₀/2 (ω − ω_c)²` on every grid point.
pub fn quadratic_phase(grid: &FrequencyGrid, omega_c: f64, beta0: f64) -> Vec<f64> {
    (0..grid.len())
        .map(|k| {
            let x = grid.omega(k) - omega_c;
            0.5 * beta0 * x * x
        })
        .collect()
}

/// Real field samples on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalField {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl TemporalField {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(SpooError::LengthMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpooError::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            grid,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `∫ℰ² dt` with the propagation (midpoint) weights.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.dt()
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Time-reversed copy on the mirrored grid (requires a centered grid).
    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self {
            grid: self.grid,
            values,
        }
    }
}

/// Cached transform for repeated synthesis on fixed grids.
#[derive(Debug, Clone)]
pub struct Synthesizer {
    pair: FourierPair,
}

impl Synthesizer {
    pub fn new(fgrid: &FrequencyGrid, tgrid: &TimeGrid) -> Self {
        Self {
            pair: FourierPair::new(fgrid, tgrid),
        }
    }

    pub fn time_grid(&self) -> &TimeGrid {
        self.pair.time_grid()
    }

    pub fn frequency_grid(&self) -> &FrequencyGrid {
        self.pair.frequency_grid()
    }

    pub fn pair(&self) -> &FourierPair {
        &self.pair
    }

    pub fn synthesize(&self, spectral: &SpectralField) -> Result<TemporalField> {
        if spectral.grid() != self.pair.frequency_grid() {
            return Err(SpooError::GridMismatch(
                "spectral field lives on a different frequency grid".into(),
            ));
        }
        warn_on_truncation(spectral);
        let values = self
            .pair
            .to_time(&spectral.weighted_spectrum())
            .into_iter()
            .map(|z| z.re)
            .collect();
        TemporalField::new(*self.pair.time_grid(), values)
    }
}

fn warn_on_truncation(spectral: &SpectralField) {
    let edge = spectral.edge_ratio();
    if edge > EDGE_TOLERANCE {
        log::warn!(
            "spectral amplitude at the grid edge is {edge:.2e} of peak; \
             the synthesized field carries truncation error"
        );
    }
}

/// Temporal field of `spectral` on `tgrid`.
pub fn synthesize(spectral: &SpectralField, tgrid: &TimeGrid) -> Result<TemporalField> {
    Synthesizer::new(spectral.grid(), tgrid).synthesize(spectral)
}

/// Reference synthesis by the direct double sum. Slow; for tests.
pub fn synthesize_direct(spectral: &SpectralField, tgrid: &TimeGrid) -> Result<TemporalField> {
    warn_on_truncation(spectral);
    let times: Vec<f64> = tgrid.times().collect();
    let values = crate::transform::direct_to_time(
        &spectral.weighted_spectrum(),
        spectral.grid(),
        &times,
    )
    .into_iter()
    .map(|z| z.re)
    .collect();
    TemporalField::new(*tgrid, values)
}

/// Gaussian pulse with a quadratic spectral phase, in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpedPulseParams {
    pub e0: f64,
    pub tau0: f64,
    pub beta0: f64,
    pub omega0: f64,
}

impl ChirpedPulseParams {
    pub fn new(e0: f64, tau0: f64, beta0: f64, omega0: f64) -> Result<Self> {
        if !(tau0 > 0.0) {
            return Err(SpooError::invalid("tau0", "must be positive"));
        }
        Ok(Self {
            e0,
            tau0,
            beta0,
            omega0,
        })
    }

    fn stretch(&self) -> f64 {
        let r = self.beta0 / (self.tau0 * self.tau0);
        1.0 + r * r
    }

    /// Temporal chirp rate `β₀/(τ₀⁴ + β₀²)`.
    pub fn beta(&self) -> f64 {
        let t2 = self.tau0 * self.tau0;
        self.beta0 / (t2 * t2 + self.beta0 * self.beta0)
    }

    /// Chirped duration `τ₀ √(1 + β₀²/τ₀⁴)`.
    pub fn tau(&self) -> f64 {
        self.tau0 * self.stretch().sqrt()
    }

    /// Peak reduction `(1 + β₀²/τ₀⁴)^(−1/4)`.
    pub fn f(&self) -> f64 {
        self.stretch().powf(-0.25)
    }

    /// Carrier phase offset `½ atan2(−β₀, τ₀²)`.
    pub fn varphi(&self) -> f64 {
        0.5 * (-self.beta0).atan2(self.tau0 * self.tau0)
    }

    /// Field at time `t`.
    pub fn value(&self, t: f64) -> f64 {
        let tau = self.tau();
        let envelope = self.e0 * self.f() * (-0.5 * t * t / (tau * tau)).exp();
        envelope * ((0.5 * self.beta() * t + self.omega0) * t + self.varphi()).cos()
    }
}

pub fn chirped_field(params: &ChirpedPulseParams, tgrid: &TimeGrid) -> TemporalField {
    TemporalField {
        grid: *tgrid,
        values: tgrid.times().map(|t| params.value(t)).collect(),
    }
}
