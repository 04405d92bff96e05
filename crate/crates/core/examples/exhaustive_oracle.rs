//! Ground truth on a tiny instance and how often the swarm reaches it.

use dfcw::prelude::*;

fn main() -> dfcw::Result<()> {
    for kind in WaveformKind::ALL {
        let params = derive_params(4, 2, kind, 2.0)?;
        let truth = exhaustive_search(&params, 0.1, Aggregation::PaperMin)?;
        let hits = (0..20)
            .filter(|&seed| {
                let config = SwarmConfig {
                    swarm_size: 16,
                    max_iterations: 200,
                    ..SwarmConfig::default()
                }
                .with_seed(seed);
                run_acc_pso(&params, &config).is_ok_and(|r| r.best_cost <= truth.best_cost + 1e-9)
            })
            .count();
        let optimum: Vec<String> = truth.best_sequences.iter().map(|s| format!("[{s}]")).collect();
        println!(
            "{:<18} optimum {:.4} over {} sets {}; swarm hit {hits}/20",
            kind.display_name(),
            truth.best_cost,
            truth.evaluations,
            optimum.join(" ")
        );
    }
    Ok(())
}
