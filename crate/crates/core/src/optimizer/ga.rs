//! Permutation-native genetic algorithm baseline: tournament selection, order crossover,
//! swap mutation and single elitism. Individuals are whole coding sets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Algorithm, Objective, OptimizationResult, Scored, SwarmConfig, Tracker};
use crate::error::Result;
use crate::waveform::{CodingSequence, WaveformParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaSettings {
    pub tournament_size: usize,
    /// Per-gene swap probability is `mutation_scale / N`.
    pub mutation_scale: f64,
    pub elites: usize,
}

impl Default for GaSettings {
    fn default() -> Self {
        GaSettings {
            tournament_size: 3,
            mutation_scale: 2.0,
            elites: 1,
        }
    }
}

/// Order crossover (OX): keeps `a[lo..=hi]` in place and fills the rest with the genes of
/// `b` in the order they appear after `hi`, wrapping around.
pub fn order_crossover(a: &[usize], b: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    let n = a.len();
    debug_assert!(lo <= hi && hi < n && b.len() == n);
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for i in lo..=hi {
        child[i] = a[i];
        used[a[i]] = true;
    }
    let mut slot = (hi + 1) % n;
    for k in 0..n {
        let gene = b[(hi + 1 + k) % n];
        if used[gene] {
            continue;
        }
        while child[slot] != usize::MAX {
            slot = (slot + 1) % n;
        }
        child[slot] = gene;
        used[gene] = true;
    }
    child
}

/// Swaps each position with a uniformly chosen partner with probability `rate`.
pub fn swap_mutation<R: Rng + ?Sized>(genes: &mut [usize], rate: f64, rng: &mut R) {
    let n = genes.len();
    for i in 0..n {
        if rng.random::<f64>() < rate {
            let j = rng.random_range(0..n);
            genes.swap(i, j);
        }
    }
}

fn tournament<'a, R: Rng + ?Sized>(pop: &'a [Scored], size: usize, rng: &mut R) -> &'a Scored {
    let mut best = &pop[rng.random_range(0..pop.len())];
    for _ in 1..size {
        let c = &pop[rng.random_range(0..pop.len())];
        if c.cost < best.cost {
            best = c;
        }
    }
    best
}

fn breed<R: Rng + ?Sized>(
    a: &[CodingSequence],
    b: &[CodingSequence],
    rate: f64,
    rng: &mut R,
) -> Vec<CodingSequence> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let n = x.len();
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            let mut genes = order_crossover(x.codes(), y.codes(), i.min(j), i.max(j));
            swap_mutation(&mut genes, rate, rng);
            CodingSequence::from_trusted(genes)
        })
        .collect()
}

/// Population `swarm_size`, generations `max_iterations`, same cost and trace contract as
/// the swarm searches.
pub fn run_baseline_ga(params: &WaveformParams, config: &SwarmConfig) -> Result<OptimizationResult> {
    config.validate()?;
    params.validate()?;
    config.check_warm_start(params)?;
    let settings = GaSettings::default();
    let (n, l) = (params.n_subpulses, params.n_waveforms);
    let rate = settings.mutation_scale / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut objective = Objective::new(params, config.lambda, config.aggregation)?;
    let mut tracker = Tracker::new(Algorithm::Ga, config.stagnation_window);

    let mut population: Vec<Vec<CodingSequence>> = (0..config.swarm_size)
        .map(|_| {
            (0..l)
                .map(|_| {
                    let mut codes: Vec<usize> = (0..n).collect();
                    codes.shuffle(&mut rng);
                    CodingSequence::from_trusted(codes)
                })
                .collect()
        })
        .collect();
    if let Some(set) = &config.warm_start {
        population[0] = set.clone();
    }

    for generation in 0..config.max_iterations {
        let scored = objective.score_all(population)?;
        let costs: Vec<f64> = scored.iter().map(|s| s.cost).collect();
        for s in &scored {
            tracker.offer(s);
        }
        if tracker.end_iteration(&costs, objective.evaluations) || generation + 1 == config.max_iterations {
            break;
        }
        let mut ranked: Vec<&Scored> = scored.iter().collect();
        ranked.sort_by(|a, b| a.cost.total_cmp(&b.cost));
        let mut next: Vec<Vec<CodingSequence>> = ranked
            .iter()
            .take(settings.elites.min(config.swarm_size))
            .map(|s| s.set.clone())
            .collect();
        while next.len() < config.swarm_size {
            let a = tournament(&scored, settings.tournament_size, &mut rng);
            let b = tournament(&scored, settings.tournament_size, &mut rng);
            next.push(breed(&a.set, &b.set, rate, &mut rng));
        }
        population = next;
    }
    tracker.finish(objective.evaluations)
}
