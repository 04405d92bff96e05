//! Delay-Doppler response of a 32-subpulse LFM set and the matched-filter loss under Doppler.

use dfcw::metrics::{doppler_from_normalized, peak_at_doppler, DopplerBasis};
use dfcw::prelude::*;
use dfcw::waveform::synthesize_set;

fn main() -> dfcw::Result<()> {
    let params = derive_params(32, 2, WaveformKind::Lfm, 2.0)?;
    let waves = synthesize_set(&random_coding_set(32, 2, 2024)?, &params)?;

    let m = params.samples_per_subpulse() as isize;
    let lags: Vec<isize> = (-4..=4).map(|k| k * m / 4).collect();
    let dopplers: Vec<f64> = [0.0, 0.031, 0.1, 0.5]
        .iter()
        .map(|&v| doppler_from_normalized(v, &params, DopplerBasis::Pulse))
        .collect();
    let total = total_ambiguity(&waves, &lags, &dopplers)?;
    println!("total ambiguity, rows = f_d*N*T, columns = delay / T");
    print!("{:>8}", "");
    for d in &total.delays {
        print!("{d:>8.3}");
    }
    println!();
    for (row, fd) in total.magnitude.iter().zip(&dopplers) {
        print!("{:>8.3}", fd * params.pulse_duration());
        for v in row {
            print!("{v:>8.4}");
        }
        println!();
    }

    for basis in [DopplerBasis::Pulse, DopplerBasis::Subpulse] {
        let fd = doppler_from_normalized(0.031, &params, basis);
        let peak = peak_at_doppler(&waves[0], fd)?;
        println!("{basis:?} basis: matched-filter peak {peak:.5} ({})", Decibels::from_amplitude_ratio(peak));
    }
    Ok(())
}
