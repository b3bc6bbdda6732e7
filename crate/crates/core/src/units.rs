// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Unit conversions and the uniform time/frequency grids every field lives on.
//!
//! Everything inside the crate is in atomic units (ħ = 1, so an energy in
//! Hartree is also an angular frequency in a.u.). Femtoseconds and
//! wavenumbers only appear at configuration and output boundaries.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpooError};

/// Atomic units of time per femtosecond.
pub const TIME_AU_PER_FS: f64 = 41.341374575751;

/// Hartree per cm⁻¹.
pub const HARTREE_PER_WAVENUMBER: f64 = 4.5563352529e-6;

/// The pair of conversion factors used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitConstants {
    pub time_au_per_fs: f64,
    pub energy_hartree_per_wavenumber: f64,
}

impl UnitConstants {
    pub const ATOMIC: UnitConstants = UnitConstants {
        time_au_per_fs: TIME_AU_PER_FS,
        energy_hartree_per_wavenumber: HARTREE_PER_WAVENUMBER,
    };
}

impl Default for UnitConstants {
    fn default() -> Self {
        Self::ATOMIC
    }
}

pub fn to_atomic_time(fs: f64) -> f64 {
    fs * TIME_AU_PER_FS
}

pub fn to_femtoseconds(au: f64) -> f64 {
    au / TIME_AU_PER_FS
}

/// cm⁻¹ → angular frequency in a.u.
pub fn wavenumber_to_angular_frequency(invcm: f64) -> f64 {
    invcm * HARTREE_PER_WAVENUMBER
}

pub fn angular_frequency_to_wavenumber(au: f64) -> f64 {
    au / HARTREE_PER_WAVENUMBER
}

/// Spectral chirp rate fs² → a.u.²
pub fn chirp_to_atomic(fs2: f64) -> f64 {
    fs2 * TIME_AU_PER_FS * TIME_AU_PER_FS
}

pub fn chirp_to_fs2(au2: f64) -> f64 {
    au2 / (TIME_AU_PER_FS * TIME_AU_PER_FS)
}

/// Uniform time grid, `n_steps` samples from `t_start` to `t_end` inclusive.
///
/// Samples are the midpoints of the propagation steps: sample `j` drives the
/// interval `[t_j - dt/2, t_j + dt/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(SpooError::invalid("t_start/t_end", "must be finite"));
        }
        if t_end <= t_start {
            return Err(SpooError::invalid(
                "t_end",
                format!("must exceed t_start ({t_end} <= {t_start})"),
            ));
        }
        if n_steps < 2 {
            return Err(SpooError::invalid("n_steps", "need at least two samples"));
        }
        Ok(Self {
            t_start,
            t_end,
            n_steps,
        })
    }

    /// Grid centered on t = 0 spanning `[-duration/2, duration/2]`.
    pub fn centered(duration: f64, n_steps: usize) -> Result<Self> {
        if !(duration > 0.0) {
            return Err(SpooError::invalid("total_duration", "must be positive"));
        }
        Self::new(-0.5 * duration, 0.5 * duration, n_steps)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn len(&self) -> usize {
        self.n_steps
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_steps - 1) as f64
    }

    #[inline]
    pub fn time(&self, index: usize) -> f64 {
        self.t_start + index as f64 * self.dt()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let dt = self.dt();
        (0..self.n_steps).map(move |j| self.t_start + j as f64 * dt)
    }

    /// Start of the propagation window (half a step before the first sample).
    pub fn window_start(&self) -> f64 {
        self.t_start - 0.5 * self.dt()
    }

    pub fn window_end(&self) -> f64 {
        self.t_end + 0.5 * self.dt()
    }

    /// Total propagation time, `n_steps * dt`.
    pub fn window_duration(&self) -> f64 {
        self.n_steps as f64 * self.dt()
    }
}

/// Uniform grid of positive angular frequencies with trapezoid weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    omega_min: f64,
    omega_max: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, n_points: usize) -> Result<Self> {
        if !(omega_min.is_finite() && omega_max.is_finite()) {
            return Err(SpooError::invalid("omega_min/omega_max", "must be finite"));
        }
        if omega_min < 0.0 {
            return Err(SpooError::invalid(
                "omega_min",
                "frequency grid must be non-negative",
            ));
        }
        if omega_max <= omega_min {
            return Err(SpooError::invalid("omega_max", "must exceed omega_min"));
        }
        if n_points < 2 {
            return Err(SpooError::invalid("n_freq", "need at least two points"));
        }
        Ok(Self {
            omega_min,
            omega_max,
            n_points,
        })
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.omega_max - self.omega_min) / (self.n_points - 1) as f64
    }

    #[inline]
    pub fn omega(&self, index: usize) -> f64 {
        self.omega_min + index as f64 * self.spacing()
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.omega(k)).collect()
    }

    /// Trapezoid quadrature weights (dω inside, dω/2 at both ends).
    pub fn weights(&self) -> Vec<f64> {
        let dw = self.spacing();
        let mut w = vec![dw; self.n_points];
        w[0] *= 0.5;
        w[self.n_points - 1] *= 0.5;
        w
    }
}

/// Builds the symmetric time grid `[-T/2, T/2]` and the frequency grid
/// `[max(0, ω_c - ω_hw), ω_c + ω_hw]`.
pub fn make_grids(
    total_duration: f64,
    n_steps: usize,
    omega_center: f64,
    omega_halfwidth: f64,
    n_freq: usize,
) -> Result<(TimeGrid, FrequencyGrid)> {
    if !(omega_center > 0.0) {
        return Err(SpooError::invalid("omega_center", "must be positive"));
    }
    if !(omega_halfwidth > 0.0) {
        return Err(SpooError::invalid("omega_halfwidth", "must be positive"));
    }
    let tgrid = TimeGrid::centered(total_duration, n_steps)?;
    let fgrid = FrequencyGrid::new(
        (omega_center - omega_halfwidth).max(0.0),
        omega_center + omega_halfwidth,
        n_freq,
    )?;
    Ok((tgrid, fgrid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_conversion_examples() {
        assert_eq!(to_atomic_time(0.0), 0.0);
        assert!((to_atomic_time(10.0) - 413.41374575751).abs() < 1e-9);
        assert!((to_atomic_time(1000.0) - 41341.374575751).abs() < 1e-7);
    }

    #[test]
    fn wavenumber_conversion_examples() {
        assert_eq!(wavenumber_to_angular_frequency(0.0), 0.0);
        let w = wavenumber_to_angular_frequency(12500.0);
        assert!((w - 5.6954190661e-2).abs() < 1e-12, "{w}");
        let w = wavenumber_to_angular_frequency(12816.55);
        assert!((w - 5.839649858555549e-2).abs() < 1e-15, "{w}");
    }

    #[test]
    fn wavenumber_cross_check_via_si() {
        // E = h c ν̃ ; Hartree energy 4.3597447222071e-18 J.
        let h = 6.62607015e-34;
        let c_cm = 2.99792458e10;
        let hartree_j = 4.3597447222071e-18;
        let via_si = h * c_cm * 12500.0 / hartree_j;
        let ours = wavenumber_to_angular_frequency(12500.0);
        assert!((via_si - ours).abs() / ours < 1e-9);
    }

    #[test]
    fn round_trips() {
        for x in [1e-3, 0.5, 10.0, 1234.5, 98765.4321] {
            assert!((to_femtoseconds(to_atomic_time(x)) - x).abs() / x < 1e-12);
            let back = angular_frequency_to_wavenumber(wavenumber_to_angular_frequency(x));
            assert!((back - x).abs() / x < 1e-12);
            assert!((chirp_to_fs2(chirp_to_atomic(x)) - x).abs() / x < 1e-12);
        }
    }

    #[test]
    fn fine_grids_spacing() {
        let w0 = wavenumber_to_angular_frequency(12500.0);
        let dw = 1.0 / to_atomic_time(10.0);
        let (t, f) = make_grids(to_atomic_time(1000.0), 320_000, w0, 5.0 * dw, 2048).unwrap();
        assert!((t.dt() - 41341.374575751 / 319_999.0).abs() < 1e-12);
        assert!((t.dt() - 0.1292).abs() < 1e-4);
        assert_eq!(t.t_start(), -t.t_end());
        assert_eq!(f.len(), 2048);
        assert!((f.omega_min() - (w0 - 5.0 * dw)).abs() < 1e-15);
    }

    #[test]
    fn minimal_and_invalid_grids() {
        let (t, f) = make_grids(to_atomic_time(1000.0), 2, 0.05, 0.01, 2).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(f.len(), 2);
        assert!(make_grids(to_atomic_time(-1.0), 100, 0.05, 0.01, 16).is_err());
        assert!(make_grids(1.0, 1, 0.05, 0.01, 16).is_err());
        assert!(make_grids(1.0, 10, 0.05, 0.01, 1).is_err());
        assert!(make_grids(1.0, 10, -0.05, 0.01, 16).is_err());
    }

    #[test]
    fn frequency_grid_clamps_at_zero() {
        let (_, f) = make_grids(100.0, 10, 0.01, 0.05, 8).unwrap();
        assert_eq!(f.omega_min(), 0.0);
        assert!(FrequencyGrid::new(-1.0, 1.0, 4).is_err());
    }

    #[test]
    fn uniform_spacing() {
        let t = TimeGrid::centered(to_atomic_time(1000.0), 65_536).unwrap();
        let dt = t.dt();
        let times: Vec<f64> = t.times().collect();
        let worst = times
            .windows(2)
            .map(|w| ((w[1] - w[0]) - dt).abs())
            .fold(0.0, f64::max);
        // Index arithmetic: deviations are pure rounding of |t| ~ 2e4.
        assert!(worst <= 4.0 * f64::EPSILON * 2.1e4, "{worst}");
        assert_eq!(times.len(), t.len());
        assert!((times[times.len() - 1] - t.t_end()).abs() < 1e-9);
    }

    #[test]
    fn trapezoid_weights_sum_to_span() {
        let f = FrequencyGrid::new(0.03, 0.08, 101).unwrap();
        let s: f64 = f.weights().iter().sum();
        assert!((s - 0.05).abs() < 1e-15);
    }
}
