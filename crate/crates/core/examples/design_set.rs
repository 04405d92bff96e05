//! Accelerated swarm design of a Modified LFM set, written out as a sequence file.
//!
//! `cargo run --release --example design_set -- [N] [seed]`

use dfcw::cli::format_report_table;
use dfcw::prelude::*;
use dfcw::waveform::format_sequences;

fn main() -> dfcw::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(16);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);

    let params = derive_params(n, 3, WaveformKind::ModifiedLfm, 2.0)?;
    let config = SwarmConfig {
        max_iterations: 300,
        ..SwarmConfig::default()
    }
    .with_seed(seed);
    let result = run_acc_pso(&params, &config)?;

    for r in result.trace.iter().step_by(25) {
        println!("iteration {:>4}: best {:.2}  mean {:.2}", r.iteration, r.best_cost, r.mean_cost);
    }
    println!(
        "stopped after {} iterations, {} evaluations, {:.1} s",
        result.cost_trace.len(),
        result.evaluations,
        result.wall_time
    );
    print!("{}", format_report_table(&result.best_report));
    print!("{}", format_sequences(&result.best_sequences, Some("designed set")));
    Ok(())
}
