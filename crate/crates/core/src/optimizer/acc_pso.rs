//! Accelerated particle swarm search.
//!
//! Each particle carries a position `x` and an acceleration state `A`. Per iteration:
//!
//! ```text
//! A_k = K · (A_{k-1} + c1·Δ∘(g − x_k) + c2·ω∘(p − x_k))
//! x_{k+1} = x_k + A_k
//! ```
//!
//! with `Δ`, `ω` fresh vectors of independent uniform draws in `[0, 1]`, `g` the global best
//! and `p` the particle's own best. The acceleration doubles as momentum; there is no
//! separate velocity state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{encode_sequences, Algorithm, Objective, OptimizationResult, SwarmConfig, Tracker};
use crate::error::{Error, Result};
use crate::waveform::WaveformParams;

#[derive(Clone, Debug, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub acceleration: Vec<f64>,
    pub personal_best_position: Vec<f64>,
    pub personal_best_cost: f64,
}

impl Particle {
    /// A particle at `position` with zero acceleration and no recorded best.
    pub fn at(position: Vec<f64>) -> Self {
        let dim = position.len();
        Particle {
            personal_best_position: position.clone(),
            position,
            acceleration: vec![0.0; dim],
            personal_best_cost: f64::INFINITY,
        }
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }

    /// Records `cost` for the current position; the personal best never regresses.
    pub fn observe(&mut self, cost: f64) -> bool {
        if cost < self.personal_best_cost {
            self.personal_best_cost = cost;
            self.personal_best_position.clone_from(&self.position);
            true
        } else {
            false
        }
    }
}

fn check_dims(particle: &Particle, global_best: &[f64]) -> Result<()> {
    let dim = global_best.len();
    for len in [
        particle.position.len(),
        particle.acceleration.len(),
        particle.personal_best_position.len(),
    ] {
        if len != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                actual: len,
            });
        }
    }
    Ok(())
}

/// Applies one acceleration update with the given diagonal draws `delta` and `omega`,
/// then moves and clamps the particle.
pub fn accelerate(
    particle: &mut Particle,
    global_best: &[f64],
    delta: &[f64],
    omega: &[f64],
    config: &SwarmConfig,
) -> Result<()> {
    check_dims(particle, global_best)?;
    for draws in [delta, omega] {
        if draws.len() != global_best.len() {
            return Err(Error::LengthMismatch {
                expected: global_best.len(),
                actual: draws.len(),
            });
        }
    }
    let (lo, hi) = config.position_bounds;
    for i in 0..particle.dim() {
        let x = particle.position[i];
        let a = config.constriction
            * (particle.acceleration[i]
                + config.c1 * delta[i] * (global_best[i] - x)
                + config.c2 * omega[i] * (particle.personal_best_position[i] - x));
        particle.acceleration[i] = a;
        particle.position[i] = (x + a).clamp(lo, hi);
    }
    Ok(())
}

/// Moves every particle once. Draws are consumed particle by particle, and within a particle
/// dimension by dimension as `(Δ_i, ω_i)` pairs.
pub fn acc_pso_step<R: Rng + ?Sized>(
    swarm: &mut [Particle],
    global_best: &[f64],
    config: &SwarmConfig,
    rng: &mut R,
) -> Result<()> {
    let dim = global_best.len();
    let mut delta = vec![0.0; dim];
    let mut omega = vec![0.0; dim];
    for particle in swarm.iter_mut() {
        check_dims(particle, global_best)?;
        for i in 0..dim {
            delta[i] = rng.random::<f64>();
            omega[i] = rng.random::<f64>();
        }
        accelerate(particle, global_best, &delta, &omega, config)?;
    }
    Ok(())
}

pub(crate) fn initial_positions<R: Rng + ?Sized>(
    params: &WaveformParams,
    config: &SwarmConfig,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let dim = params.n_subpulses * params.n_waveforms;
    let (lo, hi) = config.position_bounds;
    let mut positions: Vec<Vec<f64>> = (0..config.swarm_size)
        .map(|_| (0..dim).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect())
        .collect();
    if let Some(set) = &config.warm_start {
        positions[0] = encode_sequences(set, lo, hi);
    }
    positions
}

/// Runs the accelerated swarm until `max_iterations` or stagnation.
pub fn run_acc_pso(params: &WaveformParams, config: &SwarmConfig) -> Result<OptimizationResult> {
    config.validate()?;
    params.validate()?;
    config.check_warm_start(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut objective = Objective::new(params, config.lambda, config.aggregation)?;
    let mut tracker = Tracker::new(Algorithm::AccPso, config.stagnation_window);

    let mut swarm: Vec<Particle> = initial_positions(params, config, &mut rng)
        .into_iter()
        .map(Particle::at)
        .collect();
    let mut global_best = swarm[0].position.clone();

    for iteration in 0..config.max_iterations {
        let positions: Vec<Vec<f64>> = swarm.iter().map(|p| p.position.clone()).collect();
        let scored = objective.score_positions(&positions)?;
        let mut costs = Vec::with_capacity(scored.len());
        for (particle, s) in swarm.iter_mut().zip(&scored) {
            particle.observe(s.cost);
            if tracker.offer(s) {
                global_best.clone_from(&particle.position);
            }
            costs.push(s.cost);
        }
        if tracker.end_iteration(&costs, objective.evaluations) {
            break;
        }
        if iteration + 1 < config.max_iterations {
            acc_pso_step(&mut swarm, &global_best, config, &mut rng)?;
        }
    }
    tracker.finish(objective.evaluations)
}
