//! Parameter family and sampled synthesis of the three waveform variants.

use dfcw::prelude::*;

fn main() -> dfcw::Result<()> {
    println!("   N     B*T   B/df   T*df");
    for n in [8, 16, 32, 64, 128] {
        let p = derive_params(n, 3, WaveformKind::Lfm, 2.0)?;
        println!(
            "{n:>4} {:>7} {:>6} {:>6}",
            p.bandwidth_time_product(),
            p.bandwidth_over_step(),
            p.time_step_product()
        );
    }

    let codes = CodingSequence::new(vec![5, 1, 7, 0, 3, 6, 2, 4])?;
    for kind in WaveformKind::ALL {
        let p = derive_params(codes.len(), 1, kind, 2.0)?;
        let w = synthesize(&codes, &p)?;
        println!(
            "{:<18} {} samples at fs = {} ({} per subpulse), energy {}",
            kind.display_name(),
            w.len(),
            w.sample_rate,
            p.samples_per_subpulse(),
            w.energy()
        );
    }
    Ok(())
}
