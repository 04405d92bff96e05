//! Plain inertia-weight PSO over the same random-key encoding, used as a baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::acc_pso::initial_positions;
use super::{Algorithm, Objective, OptimizationResult, SwarmConfig, Tracker};
use crate::error::Result;
use crate::waveform::WaveformParams;

/// Fixed coefficients of the baseline: `v ← w·v + c1·r1·(p − x) + c2·r2·(g − x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsoSettings {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
}

impl Default for PsoSettings {
    fn default() -> Self {
        PsoSettings {
            inertia: 0.72,
            cognitive: 1.49,
            social: 1.49,
        }
    }
}

/// Standard position + velocity PSO. Velocity is limited to the width of the search box.
pub fn run_baseline_pso(params: &WaveformParams, config: &SwarmConfig) -> Result<OptimizationResult> {
    config.validate()?;
    params.validate()?;
    config.check_warm_start(params)?;
    let settings = PsoSettings::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut objective = Objective::new(params, config.lambda, config.aggregation)?;
    let mut tracker = Tracker::new(Algorithm::Pso, config.stagnation_window);

    let (lo, hi) = config.position_bounds;
    let vmax = hi - lo;
    let mut positions = initial_positions(params, config, &mut rng);
    let dim = positions[0].len();
    let mut velocities = vec![vec![0.0; dim]; positions.len()];
    let mut personal: Vec<(f64, Vec<f64>)> =
        positions.iter().map(|x| (f64::INFINITY, x.clone())).collect();
    let mut global_best = positions[0].clone();

    for iteration in 0..config.max_iterations {
        let scored = objective.score_positions(&positions)?;
        let mut costs = Vec::with_capacity(scored.len());
        for ((x, pb), s) in positions.iter().zip(personal.iter_mut()).zip(&scored) {
            if s.cost < pb.0 {
                pb.0 = s.cost;
                pb.1.clone_from(x);
            }
            if tracker.offer(s) {
                global_best.clone_from(x);
            }
            costs.push(s.cost);
        }
        if tracker.end_iteration(&costs, objective.evaluations) {
            break;
        }
        if iteration + 1 == config.max_iterations {
            break;
        }
        for ((x, v), pb) in positions.iter_mut().zip(velocities.iter_mut()).zip(&personal) {
            for i in 0..dim {
                let r1 = rng.random::<f64>();
                let r2 = rng.random::<f64>();
                let vi = settings.inertia * v[i]
                    + settings.cognitive * r1 * (pb.1[i] - x[i])
                    + settings.social * r2 * (global_best[i] - x[i]);
                v[i] = vi.clamp(-vmax, vmax);
                x[i] = (x[i] + v[i]).clamp(lo, hi);
            }
        }
    }
    tracker.finish(objective.evaluations)
}
