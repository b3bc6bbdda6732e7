// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Post-optimization analysis: field-strength scans, chirp extraction,
//! adiabatic-frame decomposition and time–frequency maps.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Propagator, PropagationRecord, QuantumSystem, StateVector};
use crate::error::{Result, SpooError};
use crate::pulse::{ChirpedPulseParams, SpectralField, Synthesizer, TemporalField};
use crate::units::{chirp_to_fs2, TimeGrid};

/// Transfer probability against peak field strength at fixed phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessScan {
    pub e0_values: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub infidelities: Vec<f64>,
}

impl RobustnessScan {
    pub fn max_infidelity(&self) -> f64 {
        self.infidelities.iter().cloned().fold(0.0, f64::max)
    }
}

/// Number of worker threads to use when the caller does not say.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Rescales the amplitude to each `e0` (phase fixed) and propagates.
pub fn scan_robustness(
    system: &QuantumSystem,
    spectral: &SpectralField,
    tgrid: &TimeGrid,
    initial: usize,
    target: usize,
    e0_values: &[f64],
) -> Result<RobustnessScan> {
    scan_robustness_jobs(system, spectral, tgrid, initial, target, e0_values, default_jobs())
}

/// [`scan_robustness`] with an explicit thread count.
pub fn scan_robustness_jobs(
    system: &QuantumSystem,
    spectral: &SpectralField,
    tgrid: &TimeGrid,
    initial: usize,
    target: usize,
    e0_values: &[f64],
    jobs: usize,
) -> Result<RobustnessScan> {
    system.check_level(initial)?;
    system.check_level(target)?;
    if let Some(bad) = e0_values.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(SpooError::invalid("e0_values", format!("{bad} is not positive")));
    }
    let synth = Synthesizer::new(spectral.grid(), tgrid);
    let prop = Propagator::new(system, tgrid.dt());
    let init = StateVector::basis(system.n_levels(), initial)?;
    let run = |e0: f64| -> Result<f64> {
        let field = synth.synthesize(&spectral.with_e0(e0)?)?;
        Ok(prop.evolve(field.values(), init.coefficients())[target].norm_sqr())
    };

    let jobs = jobs.max(1).min(e0_values.len().max(1));
    let mut probabilities = vec![0.0; e0_values.len()];
    if jobs == 1 {
        for (p, &e) in probabilities.iter_mut().zip(e0_values) {
            *p = run(e)?;
        }
    } else {
        let chunk = e0_values.len().div_ceil(jobs);
        std::thread::scope(|scope| -> Result<()> {
            let handles: Vec<_> = probabilities
                .chunks_mut(chunk)
                .zip(e0_values.chunks(chunk))
                .map(|(out, es)| {
                    let run = &run;
                    scope.spawn(move || -> Result<()> {
                        for (p, &e) in out.iter_mut().zip(es) {
                            *p = run(e)?;
                        }
                        Ok(())
                    })
                })
                .collect();
            for h in handles {
                h.join().expect("scan worker panicked")?;
            }
            Ok(())
        })?;
    }
    let infidelities = probabilities.iter().map(|p| 1.0 - p).collect();
    Ok(RobustnessScan {
        e0_values: e0_values.to_vec(),
        probabilities,
        infidelities,
    })
}

/// `n` evenly spaced multiples of `nominal` from `lo` to `hi`.
pub fn scaled_range(nominal: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![nominal * lo];
    }
    (0..n)
        .map(|i| nominal * (lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Quadratic model of a spectral phase,
/// `φ(ω) ≈ c₀ + c₁ x + c₂ x²` with `x = ω − ω_ref`, also written as
/// `offset + β₀/2 (ω − ω_c)²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    /// Expansion point (the spectral center).
    pub omega_ref: f64,
    /// Vertex of the parabola; `None` when the curvature vanishes.
    pub omega_c: Option<f64>,
    /// Spectral chirp `2 c₂`, a.u. time².
    pub beta0: f64,
    /// Linear coefficient `c₁`, a.u. time (a group delay).
    pub phi1: f64,
    /// Phase at the vertex (or `c₀` without curvature).
    pub offset: f64,
    /// Weighted RMS deviation over the band, radians.
    pub residual: f64,
    /// Frequency interval used.
    pub band: (f64, f64),
    pub n_points: usize,
    /// `[c₀, c₁, c₂]`.
    pub coefficients: [f64; 3],
}

impl QuadraticFit {
    pub fn beta0_fs2(&self) -> f64 {
        chirp_to_fs2(self.beta0)
    }

    pub fn value(&self, omega: f64) -> f64 {
        let x = omega - self.omega_ref;
        let [c0, c1, c2] = self.coefficients;
        c0 + x * (c1 + x * c2)
    }
}

/// Weighted (𝒜²) least-squares quadratic fit of the phase over the band
/// where `𝒜 ≥ amplitude_threshold · max 𝒜`.
pub fn fit_quadratic_phase(spectral: &SpectralField, amplitude_threshold: f64) -> Result<QuadraticFit> {
    if !(amplitude_threshold > 0.0 && amplitude_threshold < 1.0) {
        return Err(SpooError::invalid("amplitude_threshold", "must lie in (0, 1)"));
    }
    let grid = spectral.grid();
    let amp = spectral.amplitude();
    let peak = amp.iter().cloned().fold(0.0, f64::max);
    let band: Vec<usize> = (0..amp.len())
        .filter(|&k| amp[k] >= amplitude_threshold * peak && amp[k] > 0.0)
        .collect();
    if band.len() < 5 {
        return Err(SpooError::DegenerateFit(format!(
            "only {} points above the amplitude threshold",
            band.len()
        )));
    }
    let omega_ref = spectral.omega0();
    let lo = grid.omega(band[0]);
    let hi = grid.omega(*band.last().unwrap());
    let scale = (hi - omega_ref).abs().max((lo - omega_ref).abs());
    let n = band.len();
    let mut a = DMatrix::zeros(n, 3);
    let mut b = DVector::zeros(n);
    for (row, &k) in band.iter().enumerate() {
        let sw = amp[k] / peak;
        let u = (grid.omega(k) - omega_ref) / scale;
        a[(row, 0)] = sw;
        a[(row, 1)] = sw * u;
        a[(row, 2)] = sw * u * u;
        b[row] = sw * spectral.phase()[k];
    }
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| SpooError::DegenerateFit(e.to_string()))?;
    let c = [sol[0], sol[1] / scale, sol[2] / (scale * scale)];

    let mut num = 0.0;
    let mut den = 0.0;
    for &k in &band {
        let x = grid.omega(k) - omega_ref;
        let r = spectral.phase()[k] - (c[0] + x * (c[1] + x * c[2]));
        let w = amp[k] * amp[k];
        num += w * r * r;
        den += w;
    }
    let residual = (num / den).sqrt();

    // Curvature below this contributes under 1e-12 rad anywhere in the band
    // beyond roundoff of the other terms.
    let magnitude = sol.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let flat = sol[2].abs() <= 1e-12 * magnitude.max(1.0);
    let (omega_c, beta0, offset) = if flat {
        (None, 0.0, c[0])
    } else {
        (
            Some(omega_ref - c[1] / (2.0 * c[2])),
            2.0 * c[2],
            c[0] - c[1] * c[1] / (4.0 * c[2]),
        )
    };
    Ok(QuadraticFit {
        omega_ref,
        omega_c,
        beta0,
        phi1: c[1],
        offset,
        residual,
        band: (lo, hi),
        n_points: n,
        coefficients: c,
    })
}

/// Rotating frame of a linearly chirped Gaussian pulse
/// `ℰ(t) = ℰ₀ f exp(−(t−t_d)²/2τ²) cos Ψ(t)`,
/// `Ψ(t) = ω₀ t + β (t−t_d)²/2 + φ_A − c₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpFrame {
    pub omega0: f64,
    pub beta0: f64,
    /// Envelope center (the linear spectral phase coefficient).
    pub delay: f64,
    /// Constant spectral phase `c₀` about ω₀.
    pub phase_offset: f64,
}

impl ChirpFrame {
    pub fn from_fit(fit: &QuadraticFit) -> Self {
        Self {
            omega0: fit.omega_ref,
            beta0: fit.beta0,
            delay: fit.phi1,
            phase_offset: fit.coefficients[0],
        }
    }

    pub fn from_params(params: &ChirpedPulseParams) -> Self {
        Self {
            omega0: params.omega0,
            beta0: params.beta0,
            delay: 0.0,
            phase_offset: 0.0,
        }
    }
}

/// Two-level state in the adiabatic basis of the rotating-wave Hamiltonian
/// `½[[−Δ, Ω], [Ω, Δ]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticTrace {
    pub times: Vec<f64>,
    pub detuning: Vec<f64>,
    pub rabi: Vec<f64>,
    pub mixing_angle: Vec<f64>,
    /// `E₊ = +½√(Δ²+Ω²)`; `E₋ = −E₊`.
    pub energy_plus: Vec<f64>,
    pub pop_minus: Vec<f64>,
    pub pop_plus: Vec<f64>,
    pub adiabaticity_ratio: Vec<f64>,
}

impl AdiabaticTrace {
    pub fn energy_minus(&self) -> Vec<f64> {
        self.energy_plus.iter().map(|e| -e).collect()
    }

    pub fn min_pop_minus(&self) -> f64 {
        self.pop_minus.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_adiabaticity_ratio(&self) -> f64 {
        self.adiabaticity_ratio.iter().cloned().fold(0.0, f64::max)
    }
}

/// Mixing angle `ϑ` with `2ϑ = atan2(Ω, Δ)`.
pub fn mixing_angle(detuning: f64, rabi: f64) -> f64 {
    0.5 * rabi.atan2(detuning)
}

/// Lower adiabatic state `(cos ϑ, −sin ϑ)`.
pub fn adiabatic_minus(theta: f64) -> [f64; 2] {
    [theta.cos(), -theta.sin()]
}

/// Projects a propagated two-level record onto the adiabatic states of the
/// chirp model. `e0` and `tau0` are the transform-limited strength and
/// duration; β, τ and f follow from `chirp.beta0`.
pub fn adiabatic_decompose(
    system: &QuantumSystem,
    chirp: &ChirpFrame,
    record: &PropagationRecord,
    e0: f64,
    tau0: f64,
) -> Result<AdiabaticTrace> {
    if system.n_levels() != 2 {
        return Err(SpooError::InvalidSystem(format!(
            "adiabatic decomposition needs two levels, got {}",
            system.n_levels()
        )));
    }
    let p = ChirpedPulseParams::new(e0, tau0, chirp.beta0, chirp.omega0)?;
    let (beta, tau, f, phi_a) = (p.beta(), p.tau(), p.f(), p.varphi());
    let w12 = system.transition_frequency(0, 1)?;
    let mu = system.dipole_element(0, 1);
    let delta = w12 - chirp.omega0;

    let n = record.times.len();
    let mut out = AdiabaticTrace {
        times: record.times.clone(),
        detuning: Vec::with_capacity(n),
        rabi: Vec::with_capacity(n),
        mixing_angle: Vec::with_capacity(n),
        energy_plus: Vec::with_capacity(n),
        pop_minus: Vec::with_capacity(n),
        pop_plus: Vec::with_capacity(n),
        adiabaticity_ratio: Vec::with_capacity(n),
    };
    for (&t, state) in record.times.iter().zip(&record.states) {
        let u = t - chirp.delay;
        let det = delta - beta * u;
        let rabi = -mu * e0 * f * (-0.5 * u * u / (tau * tau)).exp();
        let theta = mixing_angle(det, rabi);
        let r2 = det * det + rabi * rabi;
        let psi = chirp.omega0 * t + 0.5 * beta * u * u + phi_a - chirp.phase_offset;
        let c = state.coefficients();
        let a1 = c[0] * Complex64::from_polar(1.0, 0.5 * (w12 * t - psi));
        let a2 = c[1] * Complex64::from_polar(1.0, 0.5 * (w12 * t + psi));
        let [m1, m2] = adiabatic_minus(theta);
        let minus = a1 * m1 + a2 * m2;
        let plus = a1 * theta.sin() + a2 * theta.cos();
        let rabi_dot = -rabi * u / (tau * tau);
        let det_dot = -beta;
        let theta_dot = if r2 > 0.0 {
            0.5 * (rabi_dot * det - rabi * det_dot) / r2
        } else {
            0.0
        };
        out.detuning.push(det);
        out.rabi.push(rabi);
        out.mixing_angle.push(theta);
        out.energy_plus.push(0.5 * r2.sqrt());
        out.pop_minus.push(minus.norm_sqr());
        out.pop_plus.push(plus.norm_sqr());
        out.adiabaticity_ratio.push(if r2 > 0.0 {
            theta_dot.abs() / r2.sqrt()
        } else {
            0.0
        });
    }
    Ok(out)
}

/// Squared Gabor transform on a time × frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeFrequencyMap {
    pub times: Vec<f64>,
    pub omegas: Vec<f64>,
    /// Row-major, `intensity[i * omegas.len() + k]` at `(times[i], omegas[k])`.
    pub intensity: Vec<f64>,
    pub window_width: f64,
}

impl TimeFrequencyMap {
    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.intensity[i * self.omegas.len() + k]
    }

    /// Frequency of maximum intensity at each time (parabolic refinement).
    pub fn ridge(&self) -> Vec<f64> {
        let nw = self.omegas.len();
        (0..self.times.len())
            .map(|i| {
                let row = &self.intensity[i * nw..(i + 1) * nw];
                let k = row
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(k, _)| k)
                    .unwrap_or(0);
                if k == 0 || k + 1 == nw {
                    return self.omegas[k];
                }
                let (l, c, r) = (row[k - 1], row[k], row[k + 1]);
                let denom = l - 2.0 * c + r;
                let shift = if denom != 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
                self.omegas[k] + shift * (self.omegas[k + 1] - self.omegas[k])
            })
            .collect()
    }

    /// Row sums (marginal over frequency) at each time.
    pub fn time_marginal(&self) -> Vec<f64> {
        let nw = self.omegas.len();
        (0..self.times.len())
            .map(|i| self.intensity[i * nw..(i + 1) * nw].iter().sum())
            .collect()
    }

    /// Intensity-weighted correlation of `t` and `ω`, in [−1, 1]. Near 0 for
    /// an upright spot, near ±1 for a ridge tilted by a chirp of that sign.
    pub fn tilt_correlation(&self) -> f64 {
        let nw = self.omegas.len();
        let (mut m, mut mt, mut mw) = (0.0, 0.0, 0.0);
        for (i, t) in self.times.iter().enumerate() {
            for (k, w) in self.omegas.iter().enumerate() {
                let v = self.intensity[i * nw + k];
                m += v;
                mt += v * t;
                mw += v * w;
            }
        }
        if m <= 0.0 {
            return 0.0;
        }
        let (mt, mw) = (mt / m, mw / m);
        let (mut stt, mut sww, mut stw) = (0.0, 0.0, 0.0);
        for (i, t) in self.times.iter().enumerate() {
            for (k, w) in self.omegas.iter().enumerate() {
                let v = self.intensity[i * nw + k];
                stt += v * (t - mt) * (t - mt);
                sww += v * (w - mw) * (w - mw);
                stw += v * (t - mt) * (w - mw);
            }
        }
        if stt <= 0.0 || sww <= 0.0 {
            return 0.0;
        }
        stw / (stt * sww).sqrt()
    }

    /// Trapezoid integral over the output grid.
    pub fn total(&self) -> f64 {
        let tw = trapezoid_weights(&self.times);
        let ww = trapezoid_weights(&self.omegas);
        let nw = self.omegas.len();
        let mut s = 0.0;
        for (i, a) in tw.iter().enumerate() {
            for (k, b) in ww.iter().enumerate() {
                s += a * b * self.intensity[i * nw + k];
            }
        }
        s
    }
}

fn trapezoid_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let left = if i > 0 { x[i] - x[i - 1] } else { 0.0 };
            let right = if i + 1 < n { x[i + 1] - x[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

/// Gabor map `|∫ℰ(s) g(s−t) e^{iωs} ds|² / (π‖g‖²)` with the Gaussian window
/// `g(s) = exp(−s²/2w²)`. Normalized so that integrating over all t and
/// positive ω gives `∫ℰ² dt`.
///
/// The window sum skips samples down to a spacing that still places the
/// aliases of the `ω + ω₀` component far outside the envelope spectrum.
pub fn time_frequency_map(
    field: &TemporalField,
    window_width: f64,
    times: &[f64],
    omegas: &[f64],
) -> Result<TimeFrequencyMap> {
    if !(window_width > 0.0 && window_width.is_finite()) {
        return Err(SpooError::invalid("window_width", "must be positive"));
    }
    let grid = field.grid();
    let dt = grid.dt();
    let w_max = omegas.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let stride = if w_max > 0.0 {
        ((std::f64::consts::PI / (2.0 * w_max * dt)).floor() as usize).max(1)
    } else {
        1
    };
    let h = stride as f64 * dt;
    let norm = std::f64::consts::PI * window_width * std::f64::consts::PI.sqrt();
    let reach = 7.0 * window_width;
    let values = field.values();
    let mut intensity = Vec::with_capacity(times.len() * omegas.len());
    for &t in times {
        let lo = ((t - reach - grid.t_start()) / dt).floor().max(0.0) as usize;
        let hi = (((t + reach - grid.t_start()) / dt).ceil().max(0.0) as usize).min(grid.len() - 1);
        let samples: Vec<(f64, f64)> = (lo..=hi)
            .step_by(stride)
            .map(|j| {
                let s = grid.time(j);
                let u = (s - t) / window_width;
                (s, values[j] * (-0.5 * u * u).exp())
            })
            .collect();
        for &w in omegas {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(s, v) in &samples {
                acc += v * Complex64::from_polar(1.0, w * s);
            }
            intensity.push((acc * h).norm_sqr() / norm);
        }
    }
    Ok(TimeFrequencyMap {
        times: times.to_vec(),
        omegas: omegas.to_vec(),
        intensity,
        window_width,
    })
}

/// `n` evenly spaced values from `lo` to `hi`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
