// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! N-level Schrödinger propagation under `H(t) = H₀ − μ ℰ(t)`, full field, no
//! rotating-wave approximation.
//!
//! Field sample `ℰ_j` acts over the cell `[t_j − dt/2, t_j + dt/2]`. Each cell
//! is `e^{−iH₀dt/2} · e^{iμℰ_j dt} · e^{−iH₀dt/2}`: the exponential midpoint
//! rule in the interaction picture. Both factors are exact exponentials (H₀ is
//! diagonal, μ is diagonalized once), so every step is unitary to roundoff and
//! the scheme is second order in dt. The dipole factor has the simple field
//! derivative `i dt μ K_j`, which the gradient code relies on.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpooError};
use crate::pulse::TemporalField;
use crate::units::{wavenumber_to_angular_frequency, TimeGrid};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Snapshots kept by [`propagate`] when `store_stride` is 0.
pub const DEFAULT_SNAPSHOTS: usize = 2000;

/// Field-free energies and a real symmetric transition-dipole matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumSystem {
    energies: Vec<f64>,
    dipole: Vec<Vec<f64>>,
}

impl QuantumSystem {
    pub fn new(energies: Vec<f64>, dipole: Vec<Vec<f64>>) -> Result<Self> {
        let n = energies.len();
        if n < 2 {
            return Err(SpooError::InvalidSystem("need at least two levels".into()));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(SpooError::InvalidSystem("energies must be finite".into()));
        }
        if dipole.len() != n || dipole.iter().any(|row| row.len() != n) {
            return Err(SpooError::InvalidSystem(format!(
                "dipole matrix must be {n}×{n}"
            )));
        }
        for (a, row) in dipole.iter().enumerate() {
            if row[a] != 0.0 {
                return Err(SpooError::InvalidSystem(format!(
                    "permanent dipole μ[{a}][{a}] = {} must be zero",
                    row[a]
                )));
            }
            for (b, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(SpooError::InvalidSystem("dipoles must be finite".into()));
                }
                if v != dipole[b][a] {
                    return Err(SpooError::InvalidSystem(format!(
                        "dipole matrix not symmetric at ({a},{b})"
                    )));
                }
            }
        }
        Ok(Self { energies, dipole })
    }

    /// Two levels separated by `gap` with transition dipole `mu12`.
    pub fn two_level(gap: f64, mu12: f64) -> Result<Self> {
        Self::new(vec![0.0, gap], vec![vec![0.0, mu12], vec![mu12, 0.0]])
    }

    /// `E₂ = 12500 cm⁻¹`, `μ₁₂ = 1`.
    pub fn two_level_12500() -> Self {
        Self::two_level(wavenumber_to_angular_frequency(12500.0), 1.0)
            .expect("preset is valid")
    }

    /// Rubidium 87 ground state 5S₁/₂ with the 5P₁/₂ and 5P₃/₂ levels; the
    /// 5P–5P dipole is zero.
    pub fn rubidium87_5s5p() -> Self {
        let e = [0.0, 12578.95, 12816.55].map(wavenumber_to_angular_frequency);
        let (m12, m13) = (2.9931, 4.2275);
        Self::new(
            e.to_vec(),
            vec![
                vec![0.0, m12, m13],
                vec![m12, 0.0, 0.0],
                vec![m13, 0.0, 0.0],
            ],
        )
        .expect("preset is valid")
    }

    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dipole(&self) -> &[Vec<f64>] {
        &self.dipole
    }

    pub fn dipole_element(&self, a: usize, b: usize) -> f64 {
        self.dipole[a][b]
    }

    /// `|E_b − E_a|`.
    pub fn transition_frequency(&self, a: usize, b: usize) -> Result<f64> {
        self.check_level(a)?;
        self.check_level(b)?;
        Ok((self.energies[b] - self.energies[a]).abs())
    }

    pub fn check_level(&self, index: usize) -> Result<()> {
        if index >= self.n_levels() {
            return Err(SpooError::LevelOutOfRange {
                index,
                levels: self.n_levels(),
            });
        }
        Ok(())
    }
}

/// Preset lookup shared by configs and the CLI.
pub fn preset_system(name: &str) -> Option<QuantumSystem> {
    match name {
        "two_level_12500" => Some(QuantumSystem::two_level_12500()),
        "rubidium87_5s5p" => Some(QuantumSystem::rubidium87_5s5p()),
        _ => None,
    }
}

pub fn rubidium_system() -> QuantumSystem {
    QuantumSystem::rubidium87_5s5p()
}

/// Amplitudes in the eigenbasis of H₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector(Vec<Complex64>);

impl StateVector {
    /// Normalized state; rejects norms off by more than 1e-10.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        let s = Self(coefficients);
        let n2 = s.norm_sqr();
        if !n2.is_finite() || (n2 - 1.0).abs() > 1e-10 {
            return Err(SpooError::NotNormalized(n2));
        }
        Ok(s)
    }

    pub fn basis(n_levels: usize, index: usize) -> Result<Self> {
        if index >= n_levels {
            return Err(SpooError::LevelOutOfRange {
                index,
                levels: n_levels,
            });
        }
        let mut c = vec![ZERO; n_levels];
        c[index] = Complex64::new(1.0, 0.0);
        Ok(Self(c))
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn population(&self, index: usize) -> f64 {
        self.0[index].norm_sqr()
    }
}

/// Output of [`propagate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationRecord {
    pub grid: TimeGrid,
    /// Cell-boundary times of the snapshots, starting at the window start.
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub final_state: StateVector,
    /// `U(t_f, t_i)` as a row-major matrix.
    pub final_unitary: Vec<Vec<Complex64>>,
}

impl PropagationRecord {
    pub fn populations(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(|s| s.populations()).collect()
    }

    /// `max |U†U − I|`.
    pub fn unitarity_error(&self) -> f64 {
        let u = &self.final_unitary;
        let n = u.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut s = ZERO;
                for row in u.iter() {
                    s += row[a].conj() * row[b];
                }
                if a == b {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

/// Reusable stepper for one system and one step length.
#[derive(Debug, Clone)]
pub struct Propagator {
    n: usize,
    dt: f64,
    /// Row-major eigenvectors of μ: μ = W Λ W⁻¹.
    w: Vec<f64>,
    /// Numerical inverse of W. Using it instead of Wᵀ removes the slow,
    /// one-signed norm drift that an orthogonal-to-one-ulp Wᵀ leaves.
    w_inv: Vec<f64>,
    lambda: Vec<f64>,
    half_free: Vec<Complex64>,
}

impl Propagator {
    pub fn new(system: &QuantumSystem, dt: f64) -> Self {
        let n = system.n_levels();
        let mu = DMatrix::from_fn(n, n, |a, b| system.dipole[a][b]);
        let eig = SymmetricEigen::new(mu);
        let inv = eig
            .eigenvectors
            .clone()
            .try_inverse()
            .unwrap_or_else(|| eig.eigenvectors.transpose());
        let mut w = vec![0.0; n * n];
        let mut w_inv = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                w[a * n + b] = eig.eigenvectors[(a, b)];
                w_inv[a * n + b] = inv[(a, b)];
            }
        }
        let half_free = system
            .energies
            .iter()
            .map(|e| Complex64::from_polar(1.0, -0.5 * e * dt))
            .collect();
        Self {
            n,
            dt,
            w,
            w_inv,
            lambda: eig.eigenvalues.iter().copied().collect(),
            half_free,
        }
    }

    pub fn n_levels(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    #[inline]
    fn enter_dipole_basis(&self, psi: &[Complex64], out: &mut [Complex64]) {
        for (o, row) in out.iter_mut().zip(self.w_inv.chunks_exact(self.n)) {
            *o = psi.iter().zip(row).fold(ZERO, |s, (p, w)| s + p * w);
        }
    }

    #[inline]
    fn leave_dipole_basis(&self, tilde: &[Complex64], psi: &mut [Complex64]) {
        for (p, row) in psi.iter_mut().zip(self.w.chunks_exact(self.n)) {
            *p = tilde.iter().zip(row).fold(ZERO, |s, (t, w)| s + t * w);
        }
    }

    #[inline]
    fn half_free_step(&self, psi: &mut [Complex64], forward: bool) {
        for (p, f) in psi.iter_mut().zip(&self.half_free) {
            *p *= if forward { *f } else { f.conj() };
        }
    }

    /// `psi ← K_j^{±1} psi` with `K_j = exp(i μ ℰ dt)`.
    #[inline]
    fn kick(&self, psi: &mut [Complex64], field: f64, sign: f64, scratch: &mut [Complex64]) {
        self.enter_dipole_basis(psi, scratch);
        for (s, l) in scratch.iter_mut().zip(&self.lambda) {
            *s *= Complex64::from_polar(1.0, sign * field * l * self.dt);
        }
        self.leave_dipole_basis(scratch, psi);
    }

    /// One full cell forward.
    #[inline]
    pub fn step(&self, psi: &mut [Complex64], field: f64, scratch: &mut [Complex64]) {
        self.half_free_step(psi, true);
        self.kick(psi, field, 1.0, scratch);
        self.half_free_step(psi, true);
    }

    /// Exact inverse of [`Propagator::step`].
    #[inline]
    pub fn step_back(&self, psi: &mut [Complex64], field: f64, scratch: &mut [Complex64]) {
        self.half_free_step(psi, false);
        self.kick(psi, field, -1.0, scratch);
        self.half_free_step(psi, false);
    }

    /// Final amplitudes only.
    pub fn evolve(&self, field: &[f64], initial: &[Complex64]) -> Vec<Complex64> {
        let mut psi = initial.to_vec();
        let mut scratch = vec![ZERO; self.n];
        for &e in field {
            self.step(&mut psi, e, &mut scratch);
        }
        psi
    }

    /// Forward then backward sweep. Returns the overlap `a = ⟨f|ψ(t_f)⟩` and
    /// `∂|a|²/∂ℰ_j / dt` for every field sample.
    pub fn transfer_gradient(
        &self,
        field: &[f64],
        initial: &[Complex64],
        target: usize,
    ) -> (Complex64, Vec<f64>) {
        let n = self.n;
        let mut psi = self.evolve(field, initial);
        let amp = psi[target];
        let mut chi = vec![ZERO; n];
        chi[target] = Complex64::new(1.0, 0.0);
        let mut psi_t = vec![ZERO; n];
        let mut chi_t = vec![ZERO; n];
        let mut density = vec![0.0; field.len()];
        for (j, &e) in field.iter().enumerate().rev() {
            self.half_free_step(&mut psi, false);
            self.half_free_step(&mut chi, false);
            self.enter_dipole_basis(&psi, &mut psi_t);
            self.enter_dipole_basis(&chi, &mut chi_t);
            let mut m = ZERO;
            for b in 0..n {
                m += chi_t[b].conj() * self.lambda[b] * psi_t[b];
            }
            density[j] = -2.0 * (amp.conj() * m).im;
            for b in 0..n {
                let k = Complex64::from_polar(1.0, -e * self.lambda[b] * self.dt);
                psi_t[b] *= k;
                chi_t[b] *= k;
            }
            self.leave_dipole_basis(&psi_t, &mut psi);
            self.leave_dipole_basis(&chi_t, &mut chi);
            self.half_free_step(&mut psi, false);
            self.half_free_step(&mut chi, false);
        }
        (amp, density)
    }
}

/// Propagates `initial` through `field`, keeping every `store_stride`-th cell
/// boundary (0 picks a stride giving about [`DEFAULT_SNAPSHOTS`] snapshots) and
/// the full propagator.
pub fn propagate(
    system: &QuantumSystem,
    field: &TemporalField,
    initial: &StateVector,
    store_stride: usize,
) -> Result<PropagationRecord> {
    let n = system.n_levels();
    if initial.len() != n {
        return Err(SpooError::LengthMismatch {
            expected: n,
            actual: initial.len(),
        });
    }
    let n2 = initial.norm_sqr();
    if (n2 - 1.0).abs() > 1e-10 {
        return Err(SpooError::NotNormalized(n2));
    }
    let grid = *field.grid();
    let steps = grid.len();
    let stride = if store_stride == 0 {
        (steps / DEFAULT_SNAPSHOTS).max(1)
    } else {
        store_stride
    };
    let prop = Propagator::new(system, grid.dt());

    // Columns of U plus the state, stepped together.
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|k| StateVector::basis(n, k).unwrap().0)
        .collect();
    let mut psi = initial.0.clone();
    let mut scratch = vec![ZERO; n];
    let t0 = grid.window_start();
    let dt = grid.dt();
    let mut times = vec![t0];
    let mut states = vec![initial.clone()];
    for (j, &e) in field.values().iter().enumerate() {
        prop.step(&mut psi, e, &mut scratch);
        for c in cols.iter_mut() {
            prop.step(c, e, &mut scratch);
        }
        let done = j + 1;
        if done % stride == 0 || done == steps {
            times.push(t0 + done as f64 * dt);
            states.push(StateVector(psi.clone()));
        }
    }
    let final_unitary = (0..n)
        .map(|a| (0..n).map(|b| cols[b][a]).collect())
        .collect();
    Ok(PropagationRecord {
        grid,
        times,
        states,
        final_state: StateVector(psi),
        final_unitary,
    })
}

/// `|⟨target|ψ(t_f)⟩|²`.
pub fn transfer_probability(record: &PropagationRecord, target_index: usize) -> Result<f64> {
    let n = record.final_state.len();
    if target_index >= n {
        return Err(SpooError::LevelOutOfRange {
            index: target_index,
            levels: n,
        });
    }
    Ok(record.final_state.population(target_index))
}

/// Area `μ₁₂ ℰ₀ ∫ exp(−t²/2τ₀²) dt` of a resonant Gaussian pulse over the
/// propagation window of `tgrid`.
pub fn pulse_area(e0: f64, mu12: f64, tau0: f64, tgrid: &TimeGrid) -> f64 {
    let s = std::f64::consts::SQRT_2 * tau0;
    let window = 0.5 * (libm::erf(tgrid.window_end() / s) - libm::erf(tgrid.window_start() / s));
    mu12 * e0 * (2.0 * PI).sqrt() * tau0 * window
}

/// Resonant two-level transfer `sin²(A/2)` for a transform-limited Gaussian
/// pulse of area `A = μ₁₂ ℰ₀ √(2π) τ₀`.
///
/// This is the rotating-wave result for `H = H₀ − μℰ(t)` with
/// `ℰ(t) = ℰ₀ exp(−t²/2τ₀²) cos ω₀t`. It neglects the counter-rotating
/// (Bloch–Siegert) terms, which the full-field propagation keeps; at
/// ℰ₀ ~ 1e-2 a.u. they shift P by up to a few 1e-3.
pub fn analytic_rabi_probability(e0: f64, mu12: f64, tau0: f64, tgrid: &TimeGrid) -> f64 {
    let a = pulse_area(e0, mu12, tau0, tgrid);
    (0.5 * a).sin().powi(2)
}

/// Field strength of a resonant π pulse (A = π).
pub fn pi_pulse_strength(mu12: f64, tau0: f64) -> f64 {
    PI / (mu12 * (2.0 * PI).sqrt() * tau0)
}
