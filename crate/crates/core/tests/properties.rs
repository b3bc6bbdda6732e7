// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Invariants checked over random inputs.

use num_complex::Complex64;
use proptest::prelude::*;

use spoo::analysis::{fit_quadratic_phase, scan_robustness_jobs};
use spoo::dynamics::{propagate, QuantumSystem, StateVector};
use spoo::gradients::GradientBundle;
use spoo::optimizer::{apply_filter, gamma_matrix, update_direction, FilterSpec, OptimizerConfig};
use spoo::pulse::{gaussian_amplitude, quadratic_phase, synthesize, ChirpedPulseParams, SpectralField};
use spoo::units::{
    angular_frequency_to_wavenumber, chirp_to_atomic, chirp_to_fs2, make_grids, to_atomic_time,
    to_femtoseconds, wavenumber_to_angular_frequency, FrequencyGrid, TimeGrid,
};

fn w0() -> f64 {
    wavenumber_to_angular_frequency(12500.0)
}

fn tau0() -> f64 {
    to_atomic_time(10.0)
}

/// Coarse grids: enough for the invariants, cheap enough for many cases.
fn grids(n_freq: usize) -> (TimeGrid, FrequencyGrid) {
    make_grids(to_atomic_time(400.0), 1 << 13, w0(), 6.0 / tau0(), n_freq).unwrap()
}

fn pulse(e0: f64, beta_fs2: f64, f: &FrequencyGrid) -> SpectralField {
    let s = gaussian_amplitude(e0, w0(), 1.0 / tau0(), f).unwrap();
    s.with_phase(&quadratic_phase(f, w0(), chirp_to_atomic(beta_fs2))).unwrap()
}

fn smooth(n: usize, coeffs: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let x = 2.0 * k as f64 / (n - 1) as f64 - 1.0;
            coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c * (3.0 * (j + 1) as f64 * x).sin())
                .sum()
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_round_trips(x in 1e-3f64..1e6) {
        prop_assert!(rel(to_femtoseconds(to_atomic_time(x)), x) < 1e-12);
        prop_assert!(rel(angular_frequency_to_wavenumber(wavenumber_to_angular_frequency(x)), x) < 1e-12);
        prop_assert!(rel(chirp_to_fs2(chirp_to_atomic(x)), x) < 1e-12);
    }

    #[test]
    fn chirp_stretches_and_conserves_energy(beta_fs2 in -5000.0f64..5000.0, tau_fs in 2.0f64..50.0) {
        let t0 = to_atomic_time(tau_fs);
        let p = ChirpedPulseParams::new(1e-2, t0, chirp_to_atomic(beta_fs2), w0()).unwrap();
        prop_assert!(p.tau() >= t0);
        prop_assert!(p.f() <= 1.0);
        prop_assert!((p.f() * (p.tau() / t0).sqrt() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn synthesis_is_linear_in_strength(e0 in 1e-4f64..5e-2, beta in -800.0f64..800.0, c in 0.1f64..10.0) {
        let (t, f) = grids(256);
        let s = pulse(e0, beta, &f);
        let a = synthesize(&s, &t).unwrap();
        let b = synthesize(&s.with_e0(c * e0).unwrap(), &t).unwrap();
        let peak = a.peak();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((c * x - y).abs() <= 1e-10 * c * peak);
        }
    }

    #[test]
    fn amplitude_survives_phase_changes(beta in -2000.0f64..2000.0, seed in proptest::collection::vec(-3.0f64..3.0, 4)) {
        let (_, f) = grids(256);
        let base = gaussian_amplitude(5e-3, w0(), 1.0 / tau0(), &f).unwrap();
        let mut phase = quadratic_phase(&f, w0(), chirp_to_atomic(beta));
        for (p, d) in phase.iter_mut().zip(smooth(f.len(), &seed)) {
            *p += d;
        }
        let s = base.with_phase(&phase).unwrap();
        prop_assert_eq!(s.amplitude(), base.amplitude());
        prop_assert!(s.amplitude().iter().all(|a| *a >= 0.0));
    }

    #[test]
    fn propagation_is_unitary(
        e0 in 0.0f64..3e-2,
        beta in -1000.0f64..1000.0,
        mu in 0.1f64..5.0,
        gap_invcm in 5000.0f64..20000.0,
        theta in 0.0f64..std::f64::consts::PI,
    ) {
        let (t, f) = grids(256);
        let sys = QuantumSystem::two_level(wavenumber_to_angular_frequency(gap_invcm), mu).unwrap();
        let field = synthesize(&pulse(e0, beta, &f), &t).unwrap();
        let psi = StateVector::new(vec![
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(0.0, theta.sin()),
        ])
        .unwrap();
        let rec = propagate(&sys, &field, &psi, 0).unwrap();
        prop_assert!(rec.unitarity_error() < 1e-9);
        for pops in rec.populations() {
            prop_assert!((pops.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rubidium_propagation_is_unitary(e0 in 0.0f64..2e-2, beta in -3000.0f64..3000.0) {
        let (t, f) = grids(256);
        let field = synthesize(&pulse(e0, beta, &f), &t).unwrap();
        let rec = propagate(&QuantumSystem::rubidium87_5s5p(), &field, &StateVector::basis(3, 0).unwrap(), 0).unwrap();
        prop_assert!(rec.unitarity_error() < 1e-9);
    }

    #[test]
    fn filter_is_linear_and_scales_with_gain(
        a in proptest::collection::vec(-1.0f64..1.0, 3),
        b in proptest::collection::vec(-1.0f64..1.0, 3),
        x in -5.0f64..5.0,
        gain in 1e-3f64..1e3,
        sigma_invcm in 200.0f64..3e4,
    ) {
        let (_, f) = grids(256);
        let n = f.len();
        let (u, v) = (smooth(n, &a), smooth(n, &b));
        let filt = FilterSpec::gaussian(wavenumber_to_angular_frequency(sigma_invcm));
        let su = apply_filter(&u, &filt, &f);
        let sv = apply_filter(&v, &filt, &f);
        let mix: Vec<f64> = u.iter().zip(&v).map(|(p, q)| p + x * q).collect();
        let smix = apply_filter(&mix, &filt, &f);
        let scaled = apply_filter(&u, &FilterSpec { gain, ..filt }, &f);
        let top = su.iter().chain(&sv).fold(0.0f64, |m, y| m.max(y.abs())).max(1e-300);
        for k in 0..n {
            prop_assert!((smix[k] - su[k] - x * sv[k]).abs() <= 1e-12 * (1.0 + x.abs()) * top);
            prop_assert!((scaled[k] - gain * su[k]).abs() <= 1e-12 * gain * top);
        }
    }

    #[test]
    fn gamma_is_symmetric_and_psd(
        a in proptest::collection::vec(-1.0f64..1.0, 3),
        b in proptest::collection::vec(-1.0f64..1.0, 3),
        c in proptest::collection::vec(-1.0f64..1.0, 3),
        sigma_invcm in 200.0f64..3e4,
        enabled in any::<bool>(),
    ) {
        let (_, f) = grids(256);
        let n = f.len();
        let bundle = GradientBundle { dq0_dphi: smooth(n, &a), dq1_dphi: smooth(n, &b), dq2_dphi: smooth(n, &c) };
        let filt = if enabled {
            FilterSpec::gaussian(wavenumber_to_angular_frequency(sigma_invcm))
        } else {
            FilterSpec::disabled()
        };
        let g = gamma_matrix(&bundle, &filt, &f);
        prop_assert!(g.asymmetry() < 1e-10);
        prop_assert!(g.is_psd(1e-12));
    }

    #[test]
    fn direction_ignores_kernel_gain(
        a in proptest::collection::vec(-1.0f64..1.0, 3),
        b in proptest::collection::vec(-1.0f64..1.0, 3),
        c in proptest::collection::vec(-1.0f64..1.0, 3),
        gain in prop_oneof![Just(0.5), Just(2.0), Just(10.0), 1e-3f64..1e3],
        sigma_invcm in 200.0f64..3e4,
    ) {
        let (_, f) = grids(256);
        let n = f.len();
        let bundle = GradientBundle { dq0_dphi: smooth(n, &a), dq1_dphi: smooth(n, &b), dq2_dphi: smooth(n, &c) };
        let filt = FilterSpec::gaussian(wavenumber_to_angular_frequency(sigma_invcm));
        let cfg = OptimizerConfig::default();
        let d1 = update_direction(&bundle, &filt, &f, &cfg).values;
        let d2 = update_direction(&bundle, &FilterSpec { gain, ..filt }, &f, &cfg).values;
        let num: f64 = d1.iter().zip(&d2).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        let den: f64 = d1.iter().map(|x| x * x).sum::<f64>().sqrt();
        // The cancellation is exact algebra; in floating point it holds to
        // about κ·ε of the retained block of Γ.
        let e = gamma_matrix(&bundle, &filt, &f).eigenvalues();
        let kept = e.iter().filter(|l| **l > cfg.gamma_rcond * e[2]).fold(e[2], |m, l| m.min(*l));
        let kappa = e[2] / kept;
        let tol = 1e-10f64.max(1e-14 * kappa);
        prop_assert!(num <= tol * den, "{num} vs {den}, κ = {kappa:e}");
    }

    #[test]
    fn fit_absorbs_offset_and_tracks_delay(
        beta in prop_oneof![-3000.0f64..-100.0, 100.0f64..3000.0],
        offset in -10.0f64..10.0,
        delay_fs in -100.0f64..100.0,
    ) {
        let (_, f) = grids(512);
        let s = pulse(5e-3, beta, &f);
        let base = fit_quadratic_phase(&s, 1e-3).unwrap();
        let shifted: Vec<f64> = s.phase().iter().map(|p| p + offset).collect();
        let fo = fit_quadratic_phase(&s.with_phase(&shifted).unwrap(), 1e-3).unwrap();
        prop_assert!(rel(fo.beta0, base.beta0) < 1e-9);
        prop_assert!((fo.omega_c.unwrap() - base.omega_c.unwrap()).abs() < 1e-9 * w0());

        let d = to_atomic_time(delay_fs);
        let delayed: Vec<f64> = s
            .phase()
            .iter()
            .zip(f.omegas())
            .map(|(p, w)| p + d * (w - w0()))
            .collect();
        let fd = fit_quadratic_phase(&s.with_phase(&delayed).unwrap(), 1e-3).unwrap();
        prop_assert!(rel(fd.beta0, base.beta0) < 1e-8);
        let expect = base.omega_c.unwrap() - d / base.beta0;
        prop_assert!((fd.omega_c.unwrap() - expect).abs() < 1e-8 * w0());
        prop_assert!(fd.residual >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn infidelity_complements_probability(beta in -1500.0f64..1500.0, lo in 0.2f64..0.9, hi in 1.0f64..2.0) {
        let (t, f) = grids(256);
        let s = pulse(6e-3, beta, &f);
        let e0s: Vec<f64> = (0..5).map(|i| 6e-3 * (lo + (hi - lo) * i as f64 / 4.0)).collect();
        let scan = scan_robustness_jobs(&QuantumSystem::two_level_12500(), &s, &t, 0, 1, &e0s, 1).unwrap();
        for (p, q) in scan.probabilities.iter().zip(&scan.infidelities) {
            prop_assert!((0.0..=1.0).contains(p));
            prop_assert_eq!(*q, 1.0 - p);
        }
    }
}
