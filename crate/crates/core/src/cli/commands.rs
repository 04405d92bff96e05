use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::output::*;
use crate::error::{Error, Result};
use crate::metrics::{
    autocorrelate, cross_correlate, doppler_from_normalized, peak_at_doppler, total_ambiguity,
    ambiguity, CorrelationReport, CostEvaluator, Decibels,
};
use crate::optimizer::{exhaustive_search, run_acc_pso, Algorithm, OptimizationResult};
use crate::waveform::{format_sequences, read_sequence_file, synthesize_set, CodingSequence, WaveformParams};

fn prepare_out(config: &ExperimentConfig) -> Result<PathBuf> {
    config.validate()?;
    fs::create_dir_all(&config.out).map_err(|e| Error::io(&config.out, e))?;
    Ok(config.out.clone())
}

fn stem(prefix: &str, config: &ExperimentConfig, n: usize, l: usize) -> String {
    format!("{prefix}_{}_n{n}_l{l}", config.waveform.short_name())
}

fn db(x: f64) -> Decibels {
    Decibels::from_amplitude_ratio(x)
}

fn sequence_comment(params: &WaveformParams, extra: &str) -> String {
    format!(
        "{} N={} L={} {extra}",
        params.kind.display_name(),
        params.n_subpulses,
        params.n_waveforms
    )
}

/// One seed of a design run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub best_cost: f64,
    pub best_asp_db: Decibels,
    pub best_cp_db: Option<Decibels>,
    pub iterations: usize,
    pub evaluations: usize,
}

impl SeedOutcome {
    fn new(seed: u64, r: &OptimizationResult) -> Self {
        SeedOutcome {
            seed,
            best_cost: r.best_cost,
            best_asp_db: r.best_report.best_asp_db(),
            best_cp_db: r.best_report.best_cp_db(),
            iterations: r.cost_trace.len(),
            evaluations: r.evaluations,
        }
    }
}

/// Per-`(N, L)` design summary: every seed, and the set of the best one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignSummary {
    pub waveform: String,
    pub n: usize,
    pub antennas: usize,
    pub best_seed: u64,
    pub seeds: Vec<SeedOutcome>,
    pub best_sequences: Vec<CodingSequence>,
    pub report: CorrelationReport,
}

/// Index of the lowest cost; ties go to the lowest seed.
pub fn select_best_seed(outcomes: &[SeedOutcome]) -> Option<usize> {
    (0..outcomes.len()).min_by(|&a, &b| {
        outcomes[a]
            .best_cost
            .total_cmp(&outcomes[b].best_cost)
            .then(outcomes[a].seed.cmp(&outcomes[b].seed))
    })
}

/// Runs the accelerated swarm once per seed and writes, per seed, the best sequence file,
/// its correlation report and the convergence trace, plus one summary per `(N, L)`.
pub fn cmd_design(config: &ExperimentConfig, warm_start: Option<&Path>) -> Result<Vec<DesignSummary>> {
    let out = prepare_out(config)?;
    let warm = warm_start.map(read_sequence_file).transpose()?;
    let mut summaries = Vec::new();
    for (n, l) in config.grid() {
        let params = config.params(n, l)?;
        let base = stem("design", config, n, l);
        let mut outcomes = Vec::new();
        let mut results = Vec::new();
        for &seed in &config.seeds {
            let mut swarm = config.swarm(seed);
            swarm.warm_start.clone_from(&warm);
            let r = run_acc_pso(&params, &swarm)?;
            let run = format!("{base}_seed{seed}");
            let comment = sequence_comment(&params, &format!("seed={seed} cost={:.2}", r.best_cost));
            write_text(&out.join(format!("{run}.seq")), &format_sequences(&r.best_sequences, Some(&comment)))?;
            write_json(&out.join(format!("{run}_report.json")), &r.best_report)?;
            write_trace_csv(&out.join(format!("{run}_trace.csv")), &r.trace)?;
            println!(
                "{} N={n} L={l} seed {seed}: cost {:.2} dB, best ASP {} dB, {} iterations, {} evaluations, {:.1} s",
                params.kind.display_name(),
                r.best_cost,
                format_db(r.best_report.best_asp_db()),
                r.cost_trace.len(),
                r.evaluations,
                r.wall_time
            );
            outcomes.push(SeedOutcome::new(seed, &r));
            results.push(r);
        }
        let best = select_best_seed(&outcomes).expect("at least one seed");
        let r = &results[best];
        let summary = DesignSummary {
            waveform: params.kind.display_name().to_string(),
            n,
            antennas: l,
            best_seed: outcomes[best].seed,
            seeds: outcomes,
            best_sequences: r.best_sequences.clone(),
            report: r.best_report.clone(),
        };
        write_json(&out.join(format!("{base}_summary.json")), &summary)?;
        println!("best seed {}", summary.best_seed);
        print!("{}", format_report_table(&summary.report));
        summaries.push(summary);
    }
    Ok(summaries)
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sequences".into())
}

/// Loads a sequence file and derives parameters from its shape, checking any explicit
/// N or L against it.
pub(crate) fn load_set(
    path: &Path,
    config: &ExperimentConfig,
    explicit: (bool, bool),
) -> Result<(Vec<CodingSequence>, WaveformParams)> {
    let set = read_sequence_file(path)?;
    let (n, l) = (set[0].len(), set.len());
    if explicit.0 && config.n != [n] {
        return Err(Error::SequenceFile {
            path: path.to_path_buf(),
            line: 0,
            detail: format!("sequences have length {n}, expected N = {:?}", config.n),
        });
    }
    if explicit.1 && config.antennas != [l] {
        return Err(Error::SequenceFile {
            path: path.to_path_buf(),
            line: 0,
            detail: format!("file holds {l} sequences, expected L = {:?}", config.antennas),
        });
    }
    let params = config.params(n, l)?;
    Ok((set, params))
}

/// Scores a sequence file without searching: writes the report and one correlation CSV per
/// waveform and per pair.
pub fn cmd_analyze(file: &Path, config: &ExperimentConfig, explicit: (bool, bool)) -> Result<CorrelationReport> {
    let out = prepare_out(config)?;
    let (set, params) = load_set(file, config, explicit)?;
    let base = file_stem(file);
    let evaluator = CostEvaluator::new(&params, config.lambda, config.aggregation)?;
    let (_, report) = evaluator.evaluate(&set)?;
    let waves = synthesize_set(&set, &params)?;
    let fs = params.sample_rate();
    for (p, w) in waves.iter().enumerate() {
        write_correlation_csv(&out.join(format!("{base}_auto_{}.csv", p + 1)), &autocorrelate(w)?, fs)?;
        for (q, v) in waves.iter().enumerate().skip(p + 1) {
            let path = out.join(format!("{base}_cross_{}_{}.csv", p + 1, q + 1));
            write_correlation_csv(&path, &cross_correlate(w, v)?, fs)?;
        }
    }
    write_json(&out.join(format!("{base}_report.json")), &report)?;
    println!("{} N={} L={}", params.kind.display_name(), params.n_subpulses, params.n_waveforms);
    print!("{}", format_report_table(&report));
    Ok(report)
}

/// Matched-filter peaks of an ambiguity run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityPeaks {
    pub doppler_norm: f64,
    pub doppler: f64,
    /// Peak over delay at the Doppler shift, per waveform (1 means no loss).
    pub peaks: Vec<f64>,
    pub peak_loss_db: Vec<Decibels>,
    pub total_peak: f64,
}

/// Normalized Doppler values of the grid: `steps` points over `[-span, span]`.
pub fn doppler_grid(span: f64, steps: usize) -> Vec<f64> {
    if span == 0.0 || steps <= 1 {
        return vec![0.0];
    }
    let half = (steps - 1) as f64;
    (0..steps)
        .map(|i| span * (2.0 * i as f64 - half) / half)
        .collect()
}

/// `count` integer lags spread evenly over the full range; every lag when `count` is `None`.
pub fn delay_grid(total_samples: usize, count: Option<usize>) -> Vec<isize> {
    let s = total_samples as isize;
    match count {
        None => (-(s - 1)..s).collect(),
        Some(1) => vec![0],
        Some(c) => {
            let span = 2.0 * (s - 1) as f64;
            let mut lags: Vec<isize> = (0..c)
                .map(|i| (-(s - 1) as f64 + span * i as f64 / (c - 1) as f64).round() as isize)
                .collect();
            lags.dedup();
            lags
        }
    }
}

/// Writes per-waveform and total ambiguity grids and reports the matched-filter peak at the
/// configured normalized Doppler.
pub fn cmd_ambiguity(file: &Path, config: &ExperimentConfig, explicit: (bool, bool)) -> Result<AmbiguityPeaks> {
    let out = prepare_out(config)?;
    let (set, params) = load_set(file, config, explicit)?;
    let base = file_stem(file);
    let waves = synthesize_set(&set, &params)?;
    let lags = delay_grid(waves[0].len(), config.delays);
    let normalized = doppler_grid(config.doppler_span, config.doppler_steps);
    let dopplers: Vec<f64> = normalized
        .iter()
        .map(|&v| doppler_from_normalized(v, &params, config.doppler_basis))
        .collect();
    for (p, w) in waves.iter().enumerate() {
        let surface = ambiguity(w, &lags, &dopplers)?;
        write_ambiguity_csv(&out.join(format!("{base}_ambiguity_{}.csv", p + 1)), &surface, &normalized)?;
    }
    let total = total_ambiguity(&waves, &lags, &dopplers)?;
    write_ambiguity_csv(&out.join(format!("{base}_ambiguity_total.csv")), &total, &normalized)?;

    let fd = doppler_from_normalized(config.doppler_norm, &params, config.doppler_basis);
    let peaks = waves
        .iter()
        .map(|w| peak_at_doppler(w, fd))
        .collect::<Result<Vec<_>>>()?;
    let all_lags = delay_grid(waves[0].len(), None);
    let total_peak = total_ambiguity(&waves, &all_lags, &[fd])?.peak();
    let result = AmbiguityPeaks {
        doppler_norm: config.doppler_norm,
        doppler: fd,
        peak_loss_db: peaks.iter().map(|&v| db(v)).collect(),
        peaks,
        total_peak,
    };
    write_json(&out.join(format!("{base}_ambiguity_peaks.json")), &result)?;
    for (p, (v, d)) in result.peaks.iter().zip(&result.peak_loss_db).enumerate() {
        println!(
            "s{}: matched-filter peak at normalized Doppler {} = {} ({} dB)",
            p + 1,
            config.doppler_norm,
            format_linear(*v),
            format_db(*d)
        );
    }
    println!("total: {} ({} dB)", format_linear(total_peak), format_db(db(total_peak)));
    Ok(result)
}

/// One row of the sweep summary CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub antennas: usize,
    pub seed: u64,
    pub asp_db: Decibels,
    pub cp_db: Option<Decibels>,
    pub worst_asp_db: Decibels,
    pub worst_cp_db: Option<Decibels>,
    pub best_cost: f64,
    pub evaluations: usize,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Runs every baseline comparison algorithm with the same evaluation budget per
/// `(N, L, seed)`; writes one trace per run and a sweep summary.
pub fn cmd_compare(config: &ExperimentConfig) -> Result<Vec<CompareRow>> {
    let out = prepare_out(config)?;
    let iterations = config.budget / config.swarm_size;
    if iterations == 0 {
        return Err(Error::InvalidParameter(format!(
            "budget {} is smaller than one swarm of {}",
            config.budget, config.swarm_size
        )));
    }
    let mut rows = Vec::new();
    for (n, l) in config.grid() {
        let params = config.params(n, l)?;
        for &seed in &config.seeds {
            for algorithm in Algorithm::BASELINE_COMPARISON {
                let mut swarm = config.swarm(seed);
                swarm.max_iterations = iterations;
                swarm.stagnation_window = 0;
                let r = algorithm.run(&params, &swarm)?;
                let run = format!("{}_seed{seed}_{algorithm}", stem("compare", config, n, l));
                write_trace_csv(&out.join(format!("{run}_trace.csv")), &r.trace)?;
                let rep = &r.best_report;
                rows.push(CompareRow {
                    algorithm,
                    n,
                    antennas: l,
                    seed,
                    asp_db: rep.best_asp_db(),
                    cp_db: rep.best_cp_db(),
                    worst_asp_db: db(rep.worst_asp()),
                    worst_cp_db: rep.worst_cp().map(db),
                    best_cost: r.best_cost,
                    evaluations: r.evaluations,
                });
            }
        }
        for algorithm in Algorithm::BASELINE_COMPARISON {
            let of = |f: fn(&CompareRow) -> f64| {
                median(rows.iter().filter(|r| r.algorithm == algorithm && r.n == n && r.antennas == l).map(f).collect())
            };
            println!(
                "N={n} L={l} {algorithm:>8}: median cost {:.2} dB, median best ASP {:.2} dB",
                of(|r| r.best_cost),
                of(|r| r.asp_db.value())
            );
        }
    }
    let path = out.join(format!("compare_{}_summary.csv", config.waveform.short_name()));
    let mut w = csv::Writer::from_path(&path)?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(rows)
}

/// Absolute cost difference under which a swarm result counts as reaching the optimum.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

/// Exhaustive optimum and how often the swarm finds it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub n: usize,
    pub antennas: usize,
    pub optimum_cost: f64,
    pub optimum: Vec<CodingSequence>,
    pub candidates: usize,
    pub swarm_costs: Vec<f64>,
    pub hits: usize,
}

/// Exhaustive search on each `(N, L)` followed by one swarm run per seed.
pub fn cmd_oracle(config: &ExperimentConfig) -> Result<Vec<OracleOutcome>> {
    let out = prepare_out(config)?;
    let mut outcomes = Vec::new();
    for (n, l) in config.grid() {
        let params = config.params(n, l)?;
        let ex = exhaustive_search(&params, config.lambda, config.aggregation)?;
        let mut swarm_costs = Vec::new();
        for &seed in &config.seeds {
            swarm_costs.push(run_acc_pso(&params, &config.swarm(seed))?.best_cost);
        }
        // Reordered optimal sets carry the same cost up to summation rounding.
        let hits = swarm_costs.iter().filter(|&&c| c <= ex.best_cost + ORACLE_TOLERANCE).count();
        let base = stem("oracle", config, n, l);
        let comment = sequence_comment(&params, &format!("exhaustive optimum cost={:.2}", ex.best_cost));
        write_text(&out.join(format!("{base}.seq")), &format_sequences(&ex.best_sequences, Some(&comment)))?;
        let outcome = OracleOutcome {
            n,
            antennas: l,
            optimum_cost: ex.best_cost,
            optimum: ex.best_sequences,
            candidates: ex.evaluations,
            swarm_costs,
            hits,
        };
        write_json(&out.join(format!("{base}.json")), &outcome)?;
        println!(
            "N={n} L={l}: optimum {:.2} dB over {} candidates; swarm hit it in {}/{} seeds",
            outcome.optimum_cost,
            outcome.candidates,
            hits,
            config.seeds.len()
        );
        outcomes.push(outcome);
    }
    Ok(outcomes)
}
