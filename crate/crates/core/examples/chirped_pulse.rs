// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! A quadratic spectral phase against the closed-form chirped Gaussian.
//!
//!     cargo run --release --example chirped_pulse

use spoo::pulse::{chirped_field, gaussian_amplitude, quadratic_phase, synthesize, ChirpedPulseParams};
use spoo::units::{chirp_to_atomic, make_grids, to_atomic_time, to_femtoseconds, wavenumber_to_angular_frequency};

fn main() -> spoo::Result<()> {
    let w0 = wavenumber_to_angular_frequency(12500.0);
    let tau0 = to_atomic_time(10.0);
    let e0 = 1e-2;
    let (t, f) = make_grids(to_atomic_time(1000.0), 1 << 16, w0, 6.0 / tau0, 2048)?;
    let flat = gaussian_amplitude(e0, w0, 1.0 / tau0, &f)?;
    println!("{:>8} {:>10} {:>10} {:>12}", "b0 fs2", "tau fs", "peak/e0", "max err/e0");
    for beta_fs2 in [0.0, 250.0, -250.0, 1000.0, -1000.0, 4000.0] {
        let b0 = chirp_to_atomic(beta_fs2);
        let shaped = flat.with_phase(&quadratic_phase(&f, w0, b0))?;
        let numeric = synthesize(&shaped, &t)?;
        let params = ChirpedPulseParams::new(e0, tau0, b0, w0)?;
        let exact = chirped_field(&params, &t);
        let err = numeric
            .values()
            .iter()
            .zip(exact.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        println!(
            "{beta_fs2:>8.0} {:>10.2} {:>10.4} {:>12.2e}",
            to_femtoseconds(params.tau()),
            numeric.peak() / e0,
            err / e0
        );
    }
    Ok(())
}
