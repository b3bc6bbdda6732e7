// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gabor maps of a transform-limited and a chirped pulse. The chirp shows up
//! as a tilt of the t-omega distribution.
//!
//!     cargo run --release --example time_frequency

use spoo::analysis::{linspace, time_frequency_map};
use spoo::pulse::{chirped_field, ChirpedPulseParams};
use spoo::units::{
    angular_frequency_to_wavenumber, chirp_to_atomic, to_atomic_time, to_femtoseconds, wavenumber_to_angular_frequency,
    TimeGrid,
};

fn main() -> spoo::Result<()> {
    let w0 = wavenumber_to_angular_frequency(12500.0);
    let tau0 = to_atomic_time(10.0);
    let t = TimeGrid::centered(to_atomic_time(600.0), 1 << 15)?;
    let times = linspace(-to_atomic_time(200.0), to_atomic_time(200.0), 81);
    let omegas = linspace(w0 - 3.0 / tau0, w0 + 3.0 / tau0, 61);
    for beta_fs2 in [0.0, 1000.0, -1000.0] {
        let p = ChirpedPulseParams::new(6e-3, tau0, chirp_to_atomic(beta_fs2), w0)?;
        let map = time_frequency_map(&chirped_field(&p, &t), to_atomic_time(25.0), &times, &omegas)?;
        println!("b0 = {beta_fs2} fs2: t-omega correlation {:+.3}", map.tilt_correlation());
        let ridge = map.ridge();
        let marg = map.time_marginal();
        let peak = marg.iter().cloned().fold(0.0, f64::max);
        for i in (0..times.len()).step_by(8).filter(|&i| marg[i] > 0.05 * peak) {
            println!(
                "  t = {:>6.1} fs  ridge at {:>8.1} cm-1",
                to_femtoseconds(times[i]),
                angular_frequency_to_wavenumber(ridge[i])
            );
        }
    }
    Ok(())
}
