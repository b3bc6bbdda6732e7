// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Phase-only optimization of a two-level transfer, without and with the
//! frequency filter, followed by a quadratic fit of the result.
//!
//!     cargo run --release --example optimize_two_level

use spoo::analysis::fit_quadratic_phase;
use spoo::dynamics::QuantumSystem;
use spoo::gradients::ControlProblem;
use spoo::optimizer::{optimize_with, FilterSpec, OptimizerConfig};
use spoo::pulse::gaussian_amplitude;
use spoo::units::{make_grids, to_atomic_time, wavenumber_to_angular_frequency};

fn main() -> spoo::Result<()> {
    let sys = QuantumSystem::two_level_12500();
    let w0 = sys.transition_frequency(0, 1)?;
    let tau0 = to_atomic_time(10.0);
    let (t, f) = make_grids(to_atomic_time(1000.0), 1 << 16, w0, 6.0 / tau0, 2048)?;
    let start = gaussian_amplitude(6e-3, w0, 1.0 / tau0, &f)?;
    let problem = ControlProblem::new(sys, &start, t, 0, 1)?;

    for (label, filter, target) in [
        ("unfiltered", FilterSpec::disabled(), 0.9999),
        ("filtered", FilterSpec::gaussian(wavenumber_to_angular_frequency(2e4)), 0.99999),
    ] {
        let config = OptimizerConfig {
            filter,
            target_objective: target,
            ..Default::default()
        };
        let (best, state) = optimize_with(&problem, &start, &config, &mut |r| {
            if r.iteration % 5 == 0 {
                println!("  {label:>10} iter {:>3}  P = {:.8}", r.iteration, r.objective);
            }
        })?;
        let fit = fit_quadratic_phase(&best, 1e-3)?;
        println!(
            "{label}: {:?} after {} iterations, P = {:.8}, beta0 = {:.0} fs2 (residual {:.3} rad)",
            state.termination,
            state.iteration,
            state.objective,
            fit.beta0_fs2(),
            fit.residual
        );
    }
    Ok(())
}
