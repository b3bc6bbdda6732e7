// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Transfer probability of resonant transform-limited pulses against the
//! rotating-wave area formula.
//!
//!     cargo run --release --example rabi_scan

use spoo::dynamics::{analytic_rabi_probability, pi_pulse_strength, propagate, QuantumSystem, StateVector};
use spoo::pulse::{gaussian_amplitude, synthesize};
use spoo::units::{make_grids, to_atomic_time};

fn main() -> spoo::Result<()> {
    let sys = QuantumSystem::two_level_12500();
    let w0 = sys.transition_frequency(0, 1)?;
    let mu = sys.dipole_element(0, 1);
    let tau0 = to_atomic_time(10.0);
    let (t, f) = make_grids(to_atomic_time(1000.0), 1 << 16, w0, 6.0 / tau0, 2048)?;
    let e_pi = pi_pulse_strength(mu, tau0);
    println!("pi pulse at e0 = {e_pi:.6e} a.u.");
    println!("{:>8} {:>12} {:>12} {:>10}", "e0/e_pi", "P", "sin^2(A/2)", "diff");
    for i in 1..=16 {
        let e0 = e_pi * i as f64 / 4.0;
        let field = synthesize(&gaussian_amplitude(e0, w0, 1.0 / tau0, &f)?, &t)?;
        let rec = propagate(&sys, &field, &StateVector::basis(2, 0)?, 0)?;
        let p = rec.final_state.population(1);
        let a = analytic_rabi_probability(e0, mu, tau0, &t);
        println!("{:>8.2} {:>12.8} {:>12.8} {:>10.2e}", e0 / e_pi, p, a, p - a);
    }
    Ok(())
}
