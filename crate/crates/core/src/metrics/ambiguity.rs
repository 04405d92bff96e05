use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::correlation::magnitude;
use super::CorrelationEngine;
use crate::error::{Error, Result};
use crate::waveform::{SampledWaveform, WaveformParams};

/// Delay-Doppler response magnitudes, normalized so the matched-filter peak is 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbiguitySurface {
    /// Delays in samples.
    pub lags: Vec<isize>,
    /// The same delays in time units.
    pub delays: Vec<f64>,
    /// Doppler shifts in cycles per time unit.
    pub dopplers: Vec<f64>,
    /// `magnitude[d][k]` for `dopplers[d]` and `lags[k]`.
    pub magnitude: Vec<Vec<f64>>,
}

impl AmbiguitySurface {
    pub fn peak(&self) -> f64 {
        self.magnitude
            .iter()
            .flatten()
            .copied()
            .fold(0.0, f64::max)
    }
}

/// Which duration the normalized Doppler `f_d·T` refers to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DopplerBasis {
    /// Whole pulse, `N·T`.
    #[default]
    Pulse,
    /// One subpulse, `T`.
    Subpulse,
}

/// Converts a normalized Doppler value to cycles per time unit.
pub fn doppler_from_normalized(normalized: f64, params: &WaveformParams, basis: DopplerBasis) -> f64 {
    match basis {
        DopplerBasis::Pulse => normalized / params.pulse_duration(),
        DopplerBasis::Subpulse => normalized / params.subpulse_duration,
    }
}

fn check_set(set: &[SampledWaveform], delays: &[isize], dopplers: &[f64]) -> Result<()> {
    if set.is_empty() {
        return Err(Error::InvalidParameter("empty waveform set".into()));
    }
    if delays.is_empty() || dopplers.is_empty() {
        return Err(Error::InvalidParameter("delay and Doppler grids must be non-empty".into()));
    }
    let first = &set[0];
    if first.is_empty() {
        return Err(Error::InvalidParameter("empty waveform".into()));
    }
    for w in &set[1..] {
        if w.len() != first.len() {
            return Err(Error::LengthMismatch {
                expected: first.len(),
                actual: w.len(),
            });
        }
        if w.sample_rate != first.sample_rate {
            return Err(Error::SampleRateMismatch(first.sample_rate, w.sample_rate));
        }
    }
    if let Some(f) = dopplers.iter().find(|f| !f.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite Doppler {f}")));
    }
    Ok(())
}

// Coherent sum over the set of Σ_m w[m]·conj(w[m+τ])·exp(j2π f_d m/fs), all lags.
fn coherent_row(
    engine: &CorrelationEngine,
    set: &[SampledWaveform],
    spectra: &[Vec<Complex64>],
    doppler: f64,
) -> Result<Vec<Complex64>> {
    let fs = set[0].sample_rate;
    let mut acc = vec![Complex64::new(0.0, 0.0); 2 * engine.signal_len() - 1];
    for (w, spec) in set.iter().zip(spectra) {
        let row = if doppler == 0.0 {
            engine.correlate_spectra(spec, spec)
        } else {
            let shifted: Vec<Complex64> = w
                .samples
                .iter()
                .enumerate()
                .map(|(m, s)| s * Complex64::from_polar(1.0, TAU * doppler * m as f64 / fs))
                .collect();
            engine.correlate_spectra(&engine.spectrum(&shifted)?, spec)
        };
        for (a, r) in acc.iter_mut().zip(row) {
            *a += r;
        }
    }
    Ok(acc)
}

fn surface(set: &[SampledWaveform], delay_grid: &[isize], doppler_grid: &[f64]) -> Result<AmbiguitySurface> {
    check_set(set, delay_grid, doppler_grid)?;
    let s = set[0].len();
    let fs = set[0].sample_rate;
    let engine = CorrelationEngine::new(s);
    let spectra = set
        .iter()
        .map(|w| engine.spectrum(&w.samples))
        .collect::<Result<Vec<_>>>()?;
    // Cauchy-Schwarz: the response never exceeds the summed energies.
    let norm: f64 = set.iter().map(SampledWaveform::energy).sum();
    let zero = s as isize - 1;
    let mut grid = Vec::with_capacity(doppler_grid.len());
    for &fd in doppler_grid {
        let row = coherent_row(&engine, set, &spectra, fd)?;
        grid.push(
            delay_grid
                .iter()
                .map(|&lag| {
                    let idx = lag + zero;
                    if (0..row.len() as isize).contains(&idx) {
                        magnitude(&row[idx as usize]) / norm
                    } else {
                        0.0
                    }
                })
                .collect(),
        );
    }
    Ok(AmbiguitySurface {
        lags: delay_grid.to_vec(),
        delays: delay_grid.iter().map(|&l| l as f64 / fs).collect(),
        dopplers: doppler_grid.to_vec(),
        magnitude: grid,
    })
}

/// Ambiguity magnitude `|Σ_m w[m]·conj(w[m+τ])·exp(j2π f_d m/fs)|` over the given grids.
///
/// Delays are integer sample lags; Dopplers are in cycles per time unit. Normalized by the
/// waveform energy, so the zero-delay zero-Doppler value is 1.
pub fn ambiguity(w: &SampledWaveform, delay_grid: &[isize], doppler_grid: &[f64]) -> Result<AmbiguitySurface> {
    surface(std::slice::from_ref(w), delay_grid, doppler_grid)
}

/// Coherent sum of the per-waveform ambiguity integrands before taking magnitude.
pub fn total_ambiguity(
    set: &[SampledWaveform],
    delay_grid: &[isize],
    doppler_grid: &[f64],
) -> Result<AmbiguitySurface> {
    surface(set, delay_grid, doppler_grid)
}

/// Largest normalized response over all delays at one Doppler shift (the matched-filter peak).
pub fn peak_at_doppler(w: &SampledWaveform, doppler: f64) -> Result<f64> {
    let s = w.len() as isize;
    let lags: Vec<isize> = (-(s - 1)..s).collect();
    Ok(ambiguity(w, &lags, &[doppler])?.peak())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::autocorrelate;
    use crate::waveform::{derive_params, random_coding_set, synthesize, WaveformKind};

    #[test]
    fn origin_is_unit() {
        let p = derive_params(8, 1, WaveformKind::Lfm, 2.0).unwrap();
        let w = synthesize(&random_coding_set(8, 1, 2).unwrap()[0], &p).unwrap();
        let a = ambiguity(&w, &[0], &[0.0]).unwrap();
        assert!((a.magnitude[0][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_doppler_row_is_autocorrelation() {
        let p = derive_params(8, 1, WaveformKind::Fh, 2.0).unwrap();
        let w = synthesize(&random_coding_set(8, 1, 9).unwrap()[0], &p).unwrap();
        let s = w.len() as isize;
        let lags: Vec<isize> = (-(s - 1)..s).collect();
        let a = ambiguity(&w, &lags, &[0.0]).unwrap();
        let r = autocorrelate(&w).unwrap();
        for (x, y) in a.magnitude[0].iter().zip(&r.values) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn out_of_support_lags_are_zero() {
        let p = derive_params(4, 1, WaveformKind::Fh, 1.0).unwrap();
        let w = synthesize(&random_coding_set(4, 1, 0).unwrap()[0], &p).unwrap();
        let a = ambiguity(&w, &[w.len() as isize, -(w.len() as isize) - 3], &[0.0, 1.0]).unwrap();
        assert!(a.magnitude.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn doppler_normalization_bases() {
        let p = derive_params(32, 1, WaveformKind::Lfm, 2.0).unwrap();
        assert!((doppler_from_normalized(0.031, &p, DopplerBasis::Pulse) - 0.031 / 32.0).abs() < 1e-15);
        assert_eq!(doppler_from_normalized(0.031, &p, DopplerBasis::Subpulse), 0.031);
    }

    #[test]
    fn empty_grids_are_rejected() {
        let p = derive_params(4, 1, WaveformKind::Fh, 1.0).unwrap();
        let w = synthesize(&random_coding_set(4, 1, 0).unwrap()[0], &p).unwrap();
        assert!(ambiguity(&w, &[], &[0.0]).is_err());
        assert!(ambiguity(&w, &[0], &[]).is_err());
    }
}
