//! Accelerated swarm, plain PSO and GA at the same evaluation budget.

use dfcw::optimizer::Algorithm;
use dfcw::prelude::*;

fn main() -> dfcw::Result<()> {
    let params = derive_params(16, 3, WaveformKind::Lfm, 2.0)?;
    let budget = 4_000;
    for seed in 0..3 {
        for algorithm in Algorithm::BASELINE_COMPARISON {
            let base = SwarmConfig::default();
            let config = SwarmConfig {
                max_iterations: budget / base.swarm_size,
                stagnation_window: 0,
                ..base
            }
            .with_seed(seed);
            let r = algorithm.run(&params, &config)?;
            let halfway = r.cost_trace[r.cost_trace.len() / 2];
            println!(
                "seed {seed} {algorithm:>8}: halfway {halfway:.2}, final {:.2}, best ASP {}",
                r.best_cost,
                r.best_report.best_asp_db()
            );
        }
    }
    Ok(())
}
