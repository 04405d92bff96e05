//! Permutation-set search: accelerated PSO, plain PSO and GA baselines, and an
//! exhaustive oracle for small instances.
//!
//! Swarm methods move real-valued random keys of length `L·N`; each block of `N` keys
//! decodes to one coding sequence by ascending rank. All methods minimize the set cost of
//! [`crate::metrics::CostEvaluator`] and share the trace bookkeeping in this module.

mod acc_pso;
mod encoding;
mod exhaustive;
mod ga;
mod pso;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Aggregation, CorrelationReport, CostEvaluator};
use crate::waveform::{CodingSequence, WaveformParams};

pub use acc_pso::{accelerate, acc_pso_step, run_acc_pso, Particle};
pub use encoding::{decode_position, encode_sequences, rank_keys};
pub use exhaustive::{exhaustive_search, EXHAUSTIVE_LIMIT};
pub use ga::{order_crossover, run_baseline_ga, swap_mutation, GaSettings};
pub use pso::{run_baseline_pso, PsoSettings};

/// Minimum global-best improvement that resets the stagnation counter.
pub const IMPROVEMENT_TOLERANCE: f64 = 1e-6;

/// Search settings shared by every algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SwarmConfig {
    /// Particles (or GA population size).
    pub swarm_size: usize,
    /// Iterations (or GA generations).
    pub max_iterations: usize,
    /// Constriction factor `K` of the acceleration update.
    pub constriction: f64,
    /// Weight of the pull towards the global best.
    pub c1: f64,
    /// Weight of the pull towards the personal best.
    pub c2: f64,
    pub lambda: f64,
    pub aggregation: Aggregation,
    pub rng_seed: u64,
    /// Stop after this many iterations without improvement; 0 disables the check.
    pub stagnation_window: usize,
    pub position_bounds: (f64, f64),
    /// Optional set placed in the first particle / individual.
    #[serde(skip)]
    pub warm_start: Option<Vec<CodingSequence>>,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        SwarmConfig {
            swarm_size: 40,
            max_iterations: 1000,
            constriction: 0.729,
            c1: 1.494,
            c2: 1.494,
            lambda: 0.1,
            aggregation: Aggregation::PaperMin,
            rng_seed: 0,
            stagnation_window: 100,
            position_bounds: (0.0, 1.0),
            warm_start: None,
        }
    }
}

impl SwarmConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.swarm_size < 2 {
            return bad(format!("swarm_size must be >= 2, got {}", self.swarm_size));
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be >= 1".into());
        }
        if !(self.constriction > 0.0 && self.constriction <= 1.0) {
            return bad(format!("constriction K must lie in (0, 1], got {}", self.constriction));
        }
        if !(self.c1 >= 0.0 && self.c2 >= 0.0) || !self.c1.is_finite() || !self.c2.is_finite() {
            return bad(format!("c1, c2 must be >= 0, got {}, {}", self.c1, self.c2));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return bad(format!("lambda must be >= 0, got {}", self.lambda));
        }
        let (lo, hi) = self.position_bounds;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return bad(format!("position bounds must satisfy lo < hi, got ({lo}, {hi})"));
        }
        Ok(())
    }

    fn check_warm_start(&self, params: &WaveformParams) -> Result<()> {
        if let Some(set) = &self.warm_start {
            if set.len() != params.n_waveforms {
                return Err(Error::LengthMismatch {
                    expected: params.n_waveforms,
                    actual: set.len(),
                });
            }
            if let Some(s) = set.iter().find(|s| s.len() != params.n_subpulses) {
                return Err(Error::LengthMismatch {
                    expected: params.n_subpulses,
                    actual: s.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    AccPso,
    Pso,
    Ga,
    Exhaustive,
}

impl Algorithm {
    pub const BASELINE_COMPARISON: [Algorithm; 3] = [Algorithm::AccPso, Algorithm::Pso, Algorithm::Ga];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::AccPso => "acc-pso",
            Algorithm::Pso => "pso",
            Algorithm::Ga => "ga",
            Algorithm::Exhaustive => "exhaustive",
        }
    }

    /// Runs this algorithm with the given settings.
    pub fn run(self, params: &WaveformParams, config: &SwarmConfig) -> Result<OptimizationResult> {
        match self {
            Algorithm::AccPso => run_acc_pso(params, config),
            Algorithm::Pso => run_baseline_pso(params, config),
            Algorithm::Ga => run_baseline_ga(params, config),
            Algorithm::Exhaustive => exhaustive_search(params, config.lambda, config.aggregation),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acc-pso" | "acc_pso" => Ok(Algorithm::AccPso),
            "pso" => Ok(Algorithm::Pso),
            "ga" => Ok(Algorithm::Ga),
            "exhaustive" => Ok(Algorithm::Exhaustive),
            other => Err(Error::InvalidParameter(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// One row of a convergence trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub best_cost: f64,
    pub mean_cost: f64,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub algorithm: Algorithm,
    pub best_sequences: Vec<CodingSequence>,
    pub best_cost: f64,
    pub best_report: CorrelationReport,
    /// Global-best cost after each iteration; non-increasing.
    pub cost_trace: Vec<f64>,
    pub trace: Vec<TraceRecord>,
    pub evaluations: usize,
    /// Seconds of wall time; informational only and excluded from equality.
    pub wall_time: f64,
}

impl PartialEq for OptimizationResult {
    fn eq(&self, other: &Self) -> bool {
        self.algorithm == other.algorithm
            && self.best_sequences == other.best_sequences
            && self.best_cost.to_bits() == other.best_cost.to_bits()
            && self.best_report == other.best_report
            && self.cost_trace.len() == other.cost_trace.len()
            && self
                .cost_trace
                .iter()
                .zip(&other.cost_trace)
                .all(|(a, b)| a.to_bits() == b.to_bits())
            && self.trace == other.trace
            && self.evaluations == other.evaluations
    }
}

/// A scored candidate set.
#[derive(Clone, Debug)]
pub(crate) struct Scored {
    pub cost: f64,
    pub set: Vec<CodingSequence>,
    pub report: CorrelationReport,
}

/// Cost evaluation with an evaluation counter; batches run in parallel with ordered output.
pub(crate) struct Objective {
    evaluator: CostEvaluator,
    pub evaluations: usize,
}

impl Objective {
    pub fn new(params: &WaveformParams, lambda: f64, aggregation: Aggregation) -> Result<Self> {
        Ok(Objective {
            evaluator: CostEvaluator::new(params, lambda, aggregation)?,
            evaluations: 0,
        })
    }

    pub fn params(&self) -> &WaveformParams {
        self.evaluator.params()
    }

    pub fn score_all(&mut self, sets: Vec<Vec<CodingSequence>>) -> Result<Vec<Scored>> {
        self.evaluations += sets.len();
        let evaluator = &self.evaluator;
        sets.into_par_iter()
            .map(|set| {
                let (cost, report) = evaluator.evaluate(&set)?;
                Ok(Scored { cost, set, report })
            })
            .collect()
    }

    pub fn score_positions(&mut self, positions: &[Vec<f64>]) -> Result<Vec<Scored>> {
        let p = self.params();
        let (n, l) = (p.n_subpulses, p.n_waveforms);
        let sets = positions
            .iter()
            .map(|x| decode_position(x, n, l))
            .collect::<Result<Vec<_>>>()?;
        self.score_all(sets)
    }
}

/// Global-best bookkeeping, trace recording and the stagnation stop rule.
pub(crate) struct Tracker {
    algorithm: Algorithm,
    started: Instant,
    best: Option<Scored>,
    trace: Vec<TraceRecord>,
    window: usize,
    reference: f64,
    stagnant: usize,
}

impl Tracker {
    pub fn new(algorithm: Algorithm, stagnation_window: usize) -> Self {
        Tracker {
            algorithm,
            started: Instant::now(),
            best: None,
            trace: Vec::new(),
            window: stagnation_window,
            reference: f64::INFINITY,
            stagnant: 0,
        }
    }

    pub fn best_cost(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.cost)
    }

    /// Offers a candidate; returns true if it became the new global best.
    pub fn offer(&mut self, candidate: &Scored) -> bool {
        if candidate.cost < self.best_cost() {
            self.best = Some(candidate.clone());
            true
        } else {
            false
        }
    }

    /// Closes an iteration. Returns true when the search should stop.
    pub fn end_iteration(&mut self, costs: &[f64], evaluations: usize) -> bool {
        let best = self.best_cost();
        let mean = if costs.is_empty() {
            best
        } else {
            costs.iter().sum::<f64>() / costs.len() as f64
        };
        self.trace.push(TraceRecord {
            iteration: self.trace.len() + 1,
            best_cost: best,
            mean_cost: mean,
            evaluations,
        });
        let improvement = self.reference - best;
        // NaN when both are -inf: nothing left to improve.
        if improvement > IMPROVEMENT_TOLERANCE {
            self.reference = best;
            self.stagnant = 0;
        } else {
            self.stagnant += 1;
        }
        self.window > 0 && self.stagnant >= self.window
    }

    pub fn finish(self, evaluations: usize) -> Result<OptimizationResult> {
        let best = self
            .best
            .ok_or_else(|| Error::InvalidParameter("search evaluated no candidates".into()))?;
        Ok(OptimizationResult {
            algorithm: self.algorithm,
            best_cost: best.cost,
            best_sequences: best.set,
            best_report: best.report,
            cost_trace: self.trace.iter().map(|r| r.best_cost).collect(),
            trace: self.trace,
            evaluations,
            wall_time: self.started.elapsed().as_secs_f64(),
        })
    }
}
