// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Analytic phase gradient of the transfer probability against central
//! differences. The gradient is a density in ω, so nudging one grid point
//! moves P by its quadrature weight times the density.
//!
//!     cargo run --release --example gradient_check

use spoo::dynamics::QuantumSystem;
use spoo::gradients::ControlProblem;
use spoo::pulse::{gaussian_amplitude, quadratic_phase};
use spoo::units::{angular_frequency_to_wavenumber, chirp_to_atomic, make_grids, to_atomic_time};

fn main() -> spoo::Result<()> {
    let sys = QuantumSystem::two_level_12500();
    let w0 = sys.transition_frequency(0, 1)?;
    let tau0 = to_atomic_time(10.0);
    let (t, f) = make_grids(to_atomic_time(1000.0), 1 << 15, w0, 6.0 / tau0, 1024)?;
    let s = gaussian_amplitude(4e-3, w0, 1.0 / tau0, &f)?
        .with_phase(&quadratic_phase(&f, w0, chirp_to_atomic(300.0)))?;
    let problem = ControlProblem::new(sys, &s, t, 0, 1)?;
    let eval = problem.evaluate(&s)?;
    println!("P = {:.10}", eval.probability);

    let w = f.weights();
    let h = 1e-4;
    println!("{:>10} {:>14} {:>14} {:>10}", "cm-1", "analytic", "finite diff", "rel err");
    for k in (384..=640).step_by(32) {
        let mut phase = s.phase().to_vec();
        phase[k] += h;
        let (up, _) = problem.objective(&s.with_phase(&phase)?)?;
        phase[k] -= 2.0 * h;
        let (down, _) = problem.objective(&s.with_phase(&phase)?)?;
        let fd = (up - down) / (2.0 * h * w[k]);
        let an = eval.bundle.dq0_dphi[k];
        println!(
            "{:>10.1} {an:>14.6e} {fd:>14.6e} {:>10.1e}",
            angular_frequency_to_wavenumber(f.omega(k)),
            (an - fd).abs() / an.abs().max(1e-300)
        );
    }
    Ok(())
}
