// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! A strongly chirped pulse drives the two-level system along one adiabatic
//! state; print that state's population along the way.
//!
//!     cargo run --release --example adiabatic_passage

use spoo::analysis::{adiabatic_decompose, ChirpFrame};
use spoo::dynamics::{propagate, QuantumSystem, StateVector};
use spoo::pulse::{chirped_field, ChirpedPulseParams};
use spoo::units::{chirp_to_atomic, to_atomic_time, to_femtoseconds, TimeGrid};

fn main() -> spoo::Result<()> {
    let sys = QuantumSystem::two_level_12500();
    let w0 = sys.transition_frequency(0, 1)?;
    let tau0 = to_atomic_time(10.0);
    let t = TimeGrid::centered(to_atomic_time(800.0), 1 << 16)?;
    for beta_fs2 in [100.0, 900.0] {
        let params = ChirpedPulseParams::new(6e-3, tau0, chirp_to_atomic(beta_fs2), w0)?;
        let record = propagate(&sys, &chirped_field(&params, &t), &StateVector::basis(2, 0)?, 0)?;
        let trace = adiabatic_decompose(&sys, &ChirpFrame::from_params(&params), &record, 6e-3, tau0)?;
        println!(
            "b0 = {beta_fs2} fs2: final P = {:.6}, min adiabatic population = {:.6}, max |dtheta/dt|/gap = {:.3}",
            record.final_state.population(1),
            trace.min_pop_minus(),
            trace.max_adiabaticity_ratio()
        );
        for i in (0..trace.times.len()).step_by(trace.times.len() / 10) {
            println!(
                "  t = {:>7.1} fs  mixing = {:>6.3}  pop- = {:.6}",
                to_femtoseconds(trace.times[i]),
                trace.mixing_angle[i],
                trace.pop_minus[i]
            );
        }
    }
    Ok(())
}
