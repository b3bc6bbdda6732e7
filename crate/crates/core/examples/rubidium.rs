// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Run the shipped rubidium scenarios from their configs and report the
//! chirp the optimizer settles on.
//!
//!     cargo run --release --example rubidium

use std::path::Path;

use spoo::experiments::{run_scenario, RunOptions, ScenarioConfig};
use spoo::units::angular_frequency_to_wavenumber;

fn main() -> spoo::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["rubidium_resonant_5p12", "rubidium_resonant_5p32", "rubidium_offresonant"] {
        let overrides = ["outputs.robustness=false".to_string(), "outputs.tf_map=false".to_string()];
        let config = ScenarioConfig::load(&dir.join(format!("{name}.json")), &overrides)?;
        let outcome = run_scenario(&config, RunOptions::default())?;
        let pops = outcome.record.final_state.populations();
        print!("{name}: converged = {}, populations = [", outcome.converged());
        for p in &pops {
            print!(" {p:.3e}");
        }
        println!(" ]");
        if let Some(fit) = &outcome.fit {
            println!(
                "  beta0 = {:.0} fs2, omega_c = {}, residual = {:.3} rad",
                fit.beta0_fs2(),
                fit.omega_c
                    .map(|w| format!("{:.2} cm-1", angular_frequency_to_wavenumber(w)))
                    .unwrap_or_else(|| "n/a".into()),
                fit.residual
            );
        }
    }
    Ok(())
}
