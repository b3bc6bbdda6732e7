// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Load a config, override a few keys the way `--set` does, validate it,
//! and run it without writing artifacts.
//!
//!     cargo run --release --example scenario_config

use std::path::Path;

use spoo::experiments::{run_scenario, RunOptions, ScenarioConfig};

fn main() -> spoo::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/two_level_filtered.json");
    let overrides: Vec<String> = [
        "optimizer.sigma_invcm=5000",
        "analysis.scan_points=11",
        "outputs.tf_map=false",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let config = ScenarioConfig::load(&path, &overrides)?;
    let problems = config.diagnostics();
    if !problems.is_empty() {
        for p in problems {
            eprintln!("{p}");
        }
        std::process::exit(2);
    }
    let mut iterations = 0;
    let mut progress = |_: &spoo::optimizer::IterationRecord| iterations += 1;
    let outcome = run_scenario(
        &config,
        RunOptions {
            progress: Some(&mut progress),
            ..Default::default()
        },
    )?;
    println!("{}", serde_json::to_string_pretty(&outcome.manifest.summary).unwrap());
    println!("{iterations} iterations reported");
    Ok(())
}
