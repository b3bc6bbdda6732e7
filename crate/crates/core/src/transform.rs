// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fourier sums between a frequency grid and a time grid.
//!
//! Both grids are uniform, so `ω_k t_j` splits into terms depending on `k`
//! alone, `j` alone, and `α·k·j` with `α = dω·dt`. The cross term is a
//! chirp-z transform, evaluated with Bluestein's convolution on an FFT of
//! length ≥ K + J − 1. The result is the same sum as the direct double
//! loop, just O((K+J) log(K+J)) instead of O(K·J).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::units::{FrequencyGrid, TimeGrid};

/// Precomputed chirp-z plan: `y_m = Σ_{n<N} x_n · exp(−i α n m)` for `m < M`.
#[derive(Clone)]
struct ChirpZ {
    n_in: usize,
    n_out: usize,
    fft_len: usize,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    kernel_hat: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

fn half_square_phase(alpha: f64, k: usize) -> f64 {
    let k = k as f64;
    0.5 * alpha * (k * k)
}

impl ChirpZ {
    fn new(n_in: usize, n_out: usize, alpha: f64, planner: &mut FftPlanner<f64>) -> Self {
        let fft_len = (n_in + n_out - 1).next_power_of_two();
        let fft = planner.plan_fft_forward(fft_len);
        let ifft = planner.plan_fft_inverse(fft_len);

        let pre = (0..n_in)
            .map(|n| Complex64::from_polar(1.0, -half_square_phase(alpha, n)))
            .collect();
        let post = (0..n_out)
            .map(|m| Complex64::from_polar(1.0, -half_square_phase(alpha, m)))
            .collect();

        let mut kernel = vec![Complex64::new(0.0, 0.0); fft_len];
        for (m, slot) in kernel.iter_mut().enumerate().take(n_out) {
            *slot = Complex64::from_polar(1.0, half_square_phase(alpha, m));
        }
        for n in 1..n_in {
            kernel[fft_len - n] = Complex64::from_polar(1.0, half_square_phase(alpha, n));
        }
        fft.process(&mut kernel);
        // Fold the inverse-FFT normalization into the kernel.
        let scale = 1.0 / fft_len as f64;
        for v in kernel.iter_mut() {
            *v *= scale;
        }

        Self {
            n_in,
            n_out,
            fft_len,
            pre,
            post,
            kernel_hat: kernel,
            fft,
            ifft,
        }
    }

    fn apply(&self, input: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(input.len(), self.n_in);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft_len];
        for ((b, x), c) in buf.iter_mut().zip(input).zip(&self.pre) {
            *b = x * c;
        }
        self.fft.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        self.ifft.process(&mut buf);
        buf.truncate(self.n_out);
        for (b, c) in buf.iter_mut().zip(&self.post) {
            *b *= c;
        }
        buf
    }
}

/// Reusable transform pair between one frequency grid and one time grid.
#[derive(Clone)]
pub struct FourierPair {
    fgrid: FrequencyGrid,
    tgrid: TimeGrid,
    to_time: ChirpZ,
    to_freq: ChirpZ,
    /// exp(−i ω_min t_j)
    time_phase: Vec<Complex64>,
    /// exp(−i k dω t_0)
    freq_phase: Vec<Complex64>,
}

impl std::fmt::Debug for FourierPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierPair")
            .field("fgrid", &self.fgrid)
            .field("tgrid", &self.tgrid)
            .finish()
    }
}

impl FourierPair {
    pub fn new(fgrid: &FrequencyGrid, tgrid: &TimeGrid) -> Self {
        let k_len = fgrid.len();
        let j_len = tgrid.len();
        let dw = fgrid.spacing();
        let alpha = dw * tgrid.dt();
        let mut planner = FftPlanner::new();
        let to_time = ChirpZ::new(k_len, j_len, alpha, &mut planner);
        let to_freq = ChirpZ::new(j_len, k_len, alpha, &mut planner);
        let w_min = fgrid.omega_min();
        let t0 = tgrid.t_start();
        let time_phase = tgrid
            .times()
            .map(|t| Complex64::from_polar(1.0, -w_min * t))
            .collect();
        let freq_phase = (0..k_len)
            .map(|k| Complex64::from_polar(1.0, -(k as f64) * dw * t0))
            .collect();
        Self {
            fgrid: *fgrid,
            tgrid: *tgrid,
            to_time,
            to_freq,
            time_phase,
            freq_phase,
        }
    }

    pub fn frequency_grid(&self) -> &FrequencyGrid {
        &self.fgrid
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.tgrid
    }

    /// `Σ_k c_k exp(−i ω_k t_j)` for every time sample.
    pub fn to_time(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let d: Vec<Complex64> = coeffs
            .iter()
            .zip(&self.freq_phase)
            .map(|(c, p)| c * p)
            .collect();
        let mut out = self.to_time.apply(&d);
        for (o, p) in out.iter_mut().zip(&self.time_phase) {
            *o *= p;
        }
        out
    }

    /// `Σ_j g_j exp(+i ω_k t_j)` for every frequency point (real input).
    pub fn to_frequency(&self, samples: &[f64]) -> Vec<Complex64> {
        let x: Vec<Complex64> = samples
            .iter()
            .zip(&self.time_phase)
            .map(|(g, p)| g * p)
            .collect();
        let mut out = self.to_freq.apply(&x);
        for (o, p) in out.iter_mut().zip(&self.freq_phase) {
            *o = (*o * p).conj();
        }
        out
    }
}

/// Direct double-loop evaluation of [`FourierPair::to_time`]. Test oracle.
pub fn direct_to_time(
    coeffs: &[Complex64],
    fgrid: &FrequencyGrid,
    times: &[f64],
) -> Vec<Complex64> {
    times
        .iter()
        .map(|&t| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * Complex64::from_polar(1.0, -fgrid.omega(k) * t))
                .sum()
        })
        .collect()
}

/// Direct double-loop evaluation of [`FourierPair::to_frequency`]. Test oracle.
pub fn direct_to_frequency(samples: &[f64], tgrid: &TimeGrid, omegas: &[f64]) -> Vec<Complex64> {
    omegas
        .iter()
        .map(|&w| {
            samples
                .iter()
                .enumerate()
                .map(|(j, g)| g * Complex64::from_polar(1.0, w * tgrid.time(j)))
                .sum()
        })
        .collect()
}
