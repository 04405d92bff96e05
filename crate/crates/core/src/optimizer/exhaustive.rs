//! Ground-truth search over every ordered set of distinct permutations.

use super::{Algorithm, Objective, OptimizationResult, Tracker};
use crate::error::{Error, Result};
use crate::metrics::Aggregation;
use crate::waveform::{CodingSequence, WaveformParams};

/// Largest number of cost evaluations [`exhaustive_search`] will perform.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Number of ordered `l`-tuples of distinct permutations of `n` elements.
pub fn exhaustive_count(n: usize, l: usize) -> u128 {
    let perms: u128 = (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX);
    (0..l as u128).try_fold(1u128, |acc, k| {
        if k >= perms {
            Some(0)
        } else {
            acc.checked_mul(perms - k)
        }
    })
    .unwrap_or(u128::MAX)
}

/// Evaluates every ordered tuple of `L` distinct permutations of `0..N` and returns the
/// optimum. Trace records are emitted once per choice of the first waveform.
pub fn exhaustive_search(
    params: &WaveformParams,
    lambda: f64,
    aggregation: Aggregation,
) -> Result<OptimizationResult> {
    params.validate()?;
    let (n, l) = (params.n_subpulses, params.n_waveforms);
    let total = exhaustive_count(n, l);
    if total > EXHAUSTIVE_LIMIT {
        return Err(Error::SearchTooLarge {
            evaluations: total,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let perms = all_permutations(n);
    let mut objective = Objective::new(params, lambda, aggregation)?;
    let mut tracker = Tracker::new(Algorithm::Exhaustive, 0);

    for first in 0..perms.len() {
        // All completions of the tuple that starts with `first`.
        let mut batch: Vec<Vec<CodingSequence>> = Vec::new();
        let mut chosen = vec![first];
        fill(&perms, l, &mut chosen, &mut batch);
        let scored = objective.score_all(batch)?;
        let costs: Vec<f64> = scored.iter().map(|s| s.cost).collect();
        for s in &scored {
            tracker.offer(s);
        }
        tracker.end_iteration(&costs, objective.evaluations);
    }
    tracker.finish(objective.evaluations)
}

fn fill(perms: &[Vec<usize>], l: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<CodingSequence>>) {
    if chosen.len() == l {
        out.push(
            chosen
                .iter()
                .map(|&i| CodingSequence::from_trusted(perms[i].clone()))
                .collect(),
        );
        return;
    }
    for i in 0..perms.len() {
        if !chosen.contains(&i) {
            chosen.push(i);
            fill(perms, l, chosen, out);
            chosen.pop();
        }
    }
}
