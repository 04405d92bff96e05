//! Correlation functions, sidelobe ratios and the set cost of a random LFM set.

use dfcw::cli::format_report_table;
use dfcw::metrics::autocorrelate;
use dfcw::prelude::*;
use dfcw::waveform::synthesize_set;

fn main() -> dfcw::Result<()> {
    let params = derive_params(32, 3, WaveformKind::Lfm, 2.0)?;
    let set = random_coding_set(32, 3, 7)?;
    let waves = synthesize_set(&set, &params)?;

    let auto = autocorrelate(&waves[0])?;
    let mainlobe = find_mainlobe(&auto, &params);
    println!("mainlobe half-width: {} samples", mainlobe.half_width);
    println!("PSLR_A: {}", pslr_auto(&auto, mainlobe));
    let crosses = [cross_correlate(&waves[0], &waves[1])?, cross_correlate(&waves[0], &waves[2])?];
    println!("PSLR_C: {} / {}", pslr_cross(&crosses[0]), pslr_cross(&crosses[1]));
    println!("ISLR:   {}", islr(&auto, &[&crosses[0], &crosses[1]], mainlobe)?);

    for aggregation in [Aggregation::PaperMin, Aggregation::WorstCase] {
        let (cost, _) = cost_function(&waves, 0.1, aggregation)?;
        println!("cost ({aggregation}): {cost:.2}");
    }
    let (_, report) = cost_function(&waves, 0.1, Aggregation::PaperMin)?;
    print!("{}", format_report_table(&report));
    Ok(())
}
