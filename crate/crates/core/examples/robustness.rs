// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! How an optimized phase tolerates errors in the pulse strength, with and
//! without the filter.
//!
//!     cargo run --release --example robustness

use spoo::analysis::{scaled_range, scan_robustness};
use spoo::dynamics::QuantumSystem;
use spoo::optimizer::{optimize, FilterSpec, OptimizerConfig};
use spoo::pulse::gaussian_amplitude;
use spoo::units::{make_grids, to_atomic_time, wavenumber_to_angular_frequency};

fn main() -> spoo::Result<()> {
    let sys = QuantumSystem::two_level_12500();
    let w0 = sys.transition_frequency(0, 1)?;
    let tau0 = to_atomic_time(10.0);
    let e0 = 6e-3;
    let (t, f) = make_grids(to_atomic_time(1000.0), 1 << 16, w0, 6.0 / tau0, 2048)?;
    let start = gaussian_amplitude(e0, w0, 1.0 / tau0, &f)?;
    let strengths = scaled_range(e0, 0.8, 1.2, 9);

    let mut columns = Vec::new();
    for sigma in [0.0, 2e3, 5e3, 2e4] {
        let filter = if sigma > 0.0 {
            FilterSpec::gaussian(wavenumber_to_angular_frequency(sigma))
        } else {
            FilterSpec::disabled()
        };
        let config = OptimizerConfig {
            filter,
            target_objective: 0.99999,
            ..Default::default()
        };
        let (best, _) = optimize(&sys, &start, &t, 0, 1, &config)?;
        columns.push((sigma, scan_robustness(&sys, &best, &t, 0, 1, &strengths)?));
    }

    print!("{:>7}", "e0/nom");
    for (sigma, _) in &columns {
        print!(" {:>11}", if *sigma > 0.0 { format!("s={sigma:.0}") } else { "no filter".into() });
    }
    println!();
    for (i, e) in strengths.iter().enumerate() {
        print!("{:>7.3}", e / e0);
        for (_, scan) in &columns {
            print!(" {:>11.2e}", scan.infidelities[i]);
        }
        println!();
    }
    Ok(())
}
