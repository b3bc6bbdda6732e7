// Copyright 2026 SPOO Contributors
// SPDX-License-Identifier: Apache-2.0

//! CSV artifacts. Every file is written to a temporary sibling and renamed
//! into place, so readers never see a partial file.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analysis::{AdiabaticTrace, QuadraticFit, RobustnessScan, TimeFrequencyMap};
use crate::dynamics::PropagationRecord;
use crate::error::{Result, SpooError};
use crate::optimizer::IterationRecord;
use crate::pulse::{SpectralField, TemporalField};
use crate::units::{angular_frequency_to_wavenumber, to_femtoseconds};

/// Writes `contents` to `path` atomically.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| SpooError::invalid("path", "has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn finish(out: String) -> Vec<u8> {
    out.into_bytes()
}

/// `omega_invcm,amplitude_au,phase_rad`
pub fn spectrum_csv(spectral: &SpectralField) -> Vec<u8> {
    let mut s = String::from("omega_invcm,amplitude_au,phase_rad\n");
    for k in 0..spectral.len() {
        let _ = writeln!(
            s,
            "{:.10e},{:.10e},{:.15e}",
            angular_frequency_to_wavenumber(spectral.grid().omega(k)),
            spectral.amplitude()[k],
            spectral.phase()[k]
        );
    }
    finish(s)
}

/// `time_fs,field_au`, every `stride`-th sample.
pub fn field_csv(field: &TemporalField, stride: usize) -> Vec<u8> {
    let mut s = String::from("time_fs,field_au\n");
    let g = field.grid();
    for (j, v) in field.values().iter().enumerate().step_by(stride.max(1)) {
        let _ = writeln!(s, "{:.8e},{:.10e}", to_femtoseconds(g.time(j)), v);
    }
    finish(s)
}

/// `time_fs,pop_1,...,pop_N`
pub fn populations_csv(record: &PropagationRecord) -> Vec<u8> {
    let n = record.final_state.len();
    let mut s = String::from("time_fs");
    for k in 1..=n {
        let _ = write!(s, ",pop_{k}");
    }
    s.push('\n');
    for (t, st) in record.times.iter().zip(&record.states) {
        let _ = write!(s, "{:.8e}", to_femtoseconds(*t));
        for p in st.populations() {
            let _ = write!(s, ",{:.12e}", p);
        }
        s.push('\n');
    }
    finish(s)
}

/// `iteration,s,objective,step,constraint_drift_ti,constraint_drift_tf`
pub fn history_csv(history: &[IterationRecord]) -> Vec<u8> {
    let mut s =
        String::from("iteration,s,objective,step,constraint_drift_ti,constraint_drift_tf\n");
    for h in history {
        let _ = writeln!(
            s,
            "{},{:.12e},{:.15e},{:.6e},{:.6e},{:.6e}",
            h.iteration, h.s, h.objective, h.step, h.constraint_drift_ti, h.constraint_drift_tf
        );
    }
    finish(s)
}

/// `e0_au,probability,infidelity`
pub fn robustness_csv(scan: &RobustnessScan) -> Vec<u8> {
    let mut s = String::from("e0_au,probability,infidelity\n");
    for i in 0..scan.e0_values.len() {
        let _ = writeln!(
            s,
            "{:.10e},{:.15e},{:.6e}",
            scan.e0_values[i], scan.probabilities[i], scan.infidelities[i]
        );
    }
    finish(s)
}

/// `omega_c_invcm,beta0_fs2,phi1,offset,residual` (empty `omega_c_invcm`
/// when the curvature vanishes).
pub fn fit_csv(fit: &QuadraticFit) -> Vec<u8> {
    let mut s = String::from("omega_c_invcm,beta0_fs2,phi1,offset,residual\n");
    let wc = fit
        .omega_c
        .map(|w| format!("{:.6}", angular_frequency_to_wavenumber(w)))
        .unwrap_or_default();
    let _ = writeln!(
        s,
        "{},{:.6},{:.10e},{:.10e},{:.6e}",
        wc,
        fit.beta0_fs2(),
        fit.phi1,
        fit.offset,
        fit.residual
    );
    finish(s)
}

/// `time_fs,pop_minus,pop_plus,mixing_angle,adiabaticity_ratio`
pub fn adiabatic_csv(trace: &AdiabaticTrace) -> Vec<u8> {
    let mut s = String::from("time_fs,pop_minus,pop_plus,mixing_angle,adiabaticity_ratio\n");
    for i in 0..trace.times.len() {
        let _ = writeln!(
            s,
            "{:.8e},{:.12e},{:.12e},{:.10e},{:.6e}",
            to_femtoseconds(trace.times[i]),
            trace.pop_minus[i],
            trace.pop_plus[i],
            trace.mixing_angle[i],
            trace.adiabaticity_ratio[i]
        );
    }
    finish(s)
}

/// Long form `time_fs,omega_invcm,intensity`.
pub fn time_frequency_csv(map: &TimeFrequencyMap) -> Vec<u8> {
    let mut s = String::from("time_fs,omega_invcm,intensity\n");
    for (i, t) in map.times.iter().enumerate() {
        for (k, w) in map.omegas.iter().enumerate() {
            let _ = writeln!(
                s,
                "{:.8e},{:.8e},{:.8e}",
                to_femtoseconds(*t),
                angular_frequency_to_wavenumber(*w),
                map.at(i, k)
            );
        }
    }
    finish(s)
}

/// Reads the phase column of a spectrum CSV written by [`spectrum_csv`].
pub fn read_spectrum_phase(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "omega_invcm,amplitude_au,phase_rad" => {}
        _ => {
            return Err(SpooError::Csv {
                line: 1,
                reason: "expected header omega_invcm,amplitude_au,phase_rad".into(),
            })
        }
    }
    let mut phase = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let col = line.split(',').nth(2).ok_or_else(|| SpooError::Csv {
            line: i + 1,
            reason: "missing phase column".into(),
        })?;
        phase.push(col.trim().parse::<f64>().map_err(|e| SpooError::Csv {
            line: i + 1,
            reason: e.to_string(),
        })?);
    }
    Ok(phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::gaussian_amplitude;
    use crate::units::FrequencyGrid;

    #[test]
    fn spectrum_round_trip() {
        let g = FrequencyGrid::new(0.05, 0.06, 33).unwrap();
        let phase: Vec<f64> = (0..33).map(|k| 1e3 * (k as f64 * 0.7).sin()).collect();
        let s = gaussian_amplitude(1e-2, 0.055, 0.002, &g).unwrap().with_phase(&phase).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("spectrum.csv");
        write_atomic(&p, &spectrum_csv(&s)).unwrap();
        let back = read_spectrum_phase(&p).unwrap();
        for (a, b) in back.iter().zip(&phase) {
            assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
        }
        assert!(!dir.path().join("sub").join(".spectrum.csv.tmp").exists());
    }

    #[test]
    fn rejects_foreign_csv() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        fs::write(&p, "a,b\n1,2\n").unwrap();
        assert!(matches!(read_spectrum_phase(&p), Err(SpooError::Csv { line: 1, .. })));
    }
}
