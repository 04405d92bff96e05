//! Acceptance gate. Prints one line per criterion and exits non-zero if any hard criterion
//! fails. Pass criterion numbers as arguments to run a subset, e.g.
//! `cargo test --test acceptance -- 3 6`. Criterion 4 runs only with `DFCW_FULL_ACCEPTANCE=1`.

mod common;

use std::time::Instant;

use dfcw::metrics::{autocorrelate, correlate_raw, peak_at_doppler};
use dfcw::optimizer::{accelerate, Algorithm, Particle};
use dfcw::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Verdict {
    Pass,
    Fail,
    SoftFail,
    Skipped,
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

fn check(ok: bool, detail: String) -> Outcome {
    Outcome {
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        detail,
    }
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

fn table_parameters() -> Outcome {
    let t = Instant::now();
    let rows = [(8, 18.0, 6.0), (16, 36.0, 12.0), (32, 72.0, 24.0), (64, 144.0, 48.0), (128, 288.0, 96.0)];
    let mut ok = true;
    for (n, bt, b_df) in rows {
        let p = derive_params(n, 3, WaveformKind::Lfm, 2.0).unwrap();
        ok &= p.bandwidth_time_product() == bt && p.bandwidth_over_step() == b_df && p.time_step_product() == 3.0;
    }
    let elapsed = t.elapsed().as_secs_f64();
    check(ok && elapsed < 1e-3, format!("5 rows exact: {ok}, {:.1} us", elapsed * 1e6))
}

fn correlation_oracle() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let len = if i == 0 { 4096 } else { rng.random_range(1..=4096) };
        let a = common::random_complex(len, 1000 + i);
        let b = common::random_complex(len, 2000 + i);
        let fast = correlate_raw(&a, &b).unwrap();
        let slow = common::direct_corr(&a, &b);
        worst = fast.iter().zip(&slow).map(|(x, y)| (x - y).norm()).fold(worst, f64::max);
    }
    let elapsed = t.elapsed().as_secs_f64();
    check(worst < 1e-9 && elapsed < 30.0, format!("max abs error {worst:.3e} over 100 inputs, {elapsed:.1} s"))
}

fn oracle_hits(kind: WaveformKind, l: usize, lambda: f64) -> (usize, f64) {
    let p = derive_params(4, l, kind, 2.0).unwrap();
    let optimum = exhaustive_search(&p, lambda, Aggregation::PaperMin).unwrap().best_cost;
    let hits = (0..10)
        .filter(|&seed| {
            let cfg = SwarmConfig { swarm_size: 16, max_iterations: 200, lambda, ..SwarmConfig::default() }.with_seed(seed);
            run_acc_pso(&p, &cfg).unwrap().best_cost <= optimum + 1e-9
        })
        .count();
    (hits, optimum)
}

fn exhaustive_agreement() -> Outcome {
    let t = Instant::now();
    let (h1, o1) = oracle_hits(WaveformKind::Fh, 1, 0.0);
    let (h2, o2) = oracle_hits(WaveformKind::Fh, 2, 0.1);
    let mut others = String::new();
    for kind in [WaveformKind::Lfm, WaveformKind::ModifiedLfm] {
        let (a, _) = oracle_hits(kind, 1, 0.0);
        let (b, _) = oracle_hits(kind, 2, 0.1);
        others.push_str(&format!("; {} L=1 {a}/10, L=2 {b}/10", kind.short_name()));
    }
    let elapsed = t.elapsed().as_secs_f64();
    check(
        h1 >= 9 && h2 >= 8 && elapsed < 120.0,
        format!(
            "FH N=4 L=1 {h1}/10 (need 9, optimum {o1:.4}), L=2 {h2}/10 (need 8, optimum {o2:.4}), {elapsed:.1} s{others}"
        ),
    )
}

fn table_six() -> Outcome {
    if std::env::var_os("DFCW_FULL_ACCEPTANCE").is_none() {
        return Outcome {
            verdict: Verdict::Skipped,
            detail: "N=128 L=3 design runs take hours on one core; set DFCW_FULL_ACCEPTANCE=1".into(),
        };
    }
    let mut ok = true;
    let mut detail = Vec::new();
    for (kind, asp_max, cp_max) in [
        (WaveformKind::Fh, -23.0, None),
        (WaveformKind::Lfm, -27.0, None),
        (WaveformKind::ModifiedLfm, -28.0, Some(-39.0)),
    ] {
        let t = Instant::now();
        let p = derive_params(128, 3, kind, 2.0).unwrap();
        let mut best: Option<(f64, f64)> = None;
        let mut met = false;
        for seed in 0..3 {
            let r = run_acc_pso(&p, &SwarmConfig::default().with_seed(seed)).unwrap();
            let asp = r.best_report.best_asp_db().value();
            let cp = r.best_report.best_cp_db().unwrap().value();
            eprintln!("  {} seed {seed}: ASP {asp:.2} dB, CP {cp:.2} dB, cost {:.2}", kind.short_name(), r.best_cost);
            met |= asp <= asp_max && cp_max.is_none_or(|m| cp <= m);
            best = Some(best.map_or((asp, cp), |(a, c)| (a.min(asp), c.min(cp))));
        }
        let minutes = t.elapsed().as_secs_f64() / 60.0;
        let (a, c) = best.unwrap();
        ok &= met;
        detail.push(format!("{} ASP {a:.2} dB (need <= {asp_max}), CP {c:.2} dB, {minutes:.1} min", kind.short_name()));
    }
    check(ok, detail.join("; "))
}

fn ordering_trend() -> Outcome {
    let t = Instant::now();
    let mut medians = Vec::new();
    for kind in WaveformKind::ALL {
        let p = derive_params(32, 3, kind, 2.0).unwrap();
        let asps: Vec<f64> = (0..5)
            .map(|seed| run_acc_pso(&p, &SwarmConfig::default().with_seed(seed)).unwrap().best_report.best_asp_db().value())
            .collect();
        medians.push(median(asps));
    }
    let (fh, lfm, mlfm) = (medians[0], medians[1], medians[2]);
    let minutes = t.elapsed().as_secs_f64() / 60.0;
    check(
        mlfm <= lfm && lfm <= fh && minutes <= 15.0,
        format!("median best ASP: mlfm {mlfm:.2} dB, lfm {lfm:.2} dB, fh {fh:.2} dB, {minutes:.1} min"),
    )
}

fn ambiguity_identity() -> Outcome {
    let mut worst = 0.0f64;
    for kind in WaveformKind::ALL {
        for (n, seed) in [(8, 1), (32, 2024)] {
            let p = derive_params(n, 1, kind, 2.0).unwrap();
            let w = synthesize(&random_coding_set(n, 1, seed).unwrap()[0], &p).unwrap();
            let s = w.len() as isize;
            let lags: Vec<isize> = (-(s - 1)..s).collect();
            let a = ambiguity(&w, &lags, &[0.0, 0.01]).unwrap();
            let r = autocorrelate(&w).unwrap();
            worst = a.magnitude[0].iter().zip(&r.values).map(|(x, y)| (x - y).abs()).fold(worst, f64::max);
        }
    }
    let p = derive_params(32, 1, WaveformKind::Lfm, 2.0).unwrap();
    let w = synthesize(&random_coding_set(32, 1, 2024).unwrap()[0], &p).unwrap();
    let peak = peak_at_doppler(&w, 0.031 / p.pulse_duration()).unwrap();
    check(worst < 1e-9 && peak < 1.0, format!("zero-Doppler max error {worst:.3e}; N=32 LFM peak at 0.031 = {peak:.6}"))
}

fn result_bytes(r: &OptimizationResult) -> Vec<u8> {
    let mut v = serde_json::to_vec(&r.best_report).unwrap();
    v.extend(serde_json::to_vec(&r.best_sequences).unwrap());
    v.extend(serde_json::to_vec(&r.trace).unwrap());
    v.extend(r.cost_trace.iter().flat_map(|c| c.to_bits().to_le_bytes()));
    v.extend(r.evaluations.to_le_bytes());
    v
}

fn property_suite() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();

    let mut decode_ok = true;
    for _ in 0..10_000 {
        let n = rng.random_range(1..20);
        let l = rng.random_range(1..4);
        let keys: Vec<f64> = (0..n * l)
            .map(|_| if rng.random_bool(0.3) { (rng.random_range(0..4) as f64) * 0.25 } else { rng.random_range(-5.0..5.0) })
            .collect();
        for s in decode_position(&keys, n, l).unwrap() {
            let mut c = s.into_inner();
            c.sort_unstable();
            decode_ok &= c.iter().enumerate().all(|(i, &x)| i == x);
        }
    }
    if !decode_ok {
        failures.push("decode");
    }

    let cfg = SwarmConfig { constriction: 0.7, c1: 1.0, c2: 1.0, position_bounds: (-10.0, 10.0), ..SwarmConfig::default() };
    let mut fixed = Particle::at(vec![0.3, 0.6]);
    let g = fixed.position.clone();
    accelerate(&mut fixed, &g, &[0.9, 0.2], &[0.5, 0.7], &cfg).unwrap();
    let mut momentum = Particle::at(vec![1.0]);
    momentum.acceleration = vec![0.5];
    let still = SwarmConfig { c1: 0.0, c2: 0.0, ..cfg.clone() };
    accelerate(&mut momentum, &[3.0], &[0.4], &[0.8], &still).unwrap();
    if fixed.position != g || fixed.acceleration != [0.0, 0.0] || momentum.acceleration != [0.7 * 0.5] || momentum.position != [1.0 + 0.7 * 0.5] {
        failures.push("update rule");
    }

    let mut monotone = true;
    let mut symmetric = true;
    for i in 0..20u64 {
        let n = rng.random_range(4..8);
        let l = rng.random_range(1..4);
        let kind = WaveformKind::ALL[i as usize % 3];
        let p = derive_params(n, l, kind, 2.0).unwrap();
        let cfg = SwarmConfig { swarm_size: rng.random_range(2..10), max_iterations: rng.random_range(1..30), ..SwarmConfig::default() }.with_seed(i);
        for alg in Algorithm::BASELINE_COMPARISON {
            let r = alg.run(&p, &cfg).unwrap();
            monotone &= r.cost_trace.windows(2).all(|w| w[1] <= w[0]) && r.best_cost == *r.cost_trace.last().unwrap();
            let m = &r.best_report.matrix;
            symmetric &= (0..l).all(|a| (0..l).all(|b| (m[a][b] - m[b][a]).abs() < 1e-12));
        }
    }
    if !monotone {
        failures.push("monotone traces");
    }
    if !symmetric {
        failures.push("matrix symmetry");
    }

    let p = derive_params(8, 3, WaveformKind::ModifiedLfm, 2.0).unwrap();
    let cfg = SwarmConfig { swarm_size: 10, max_iterations: 40, ..SwarmConfig::default() }.with_seed(99);
    let same = Algorithm::BASELINE_COMPARISON
        .iter()
        .all(|alg| result_bytes(&alg.run(&p, &cfg).unwrap()) == result_bytes(&alg.run(&p, &cfg).unwrap()));
    if !same {
        failures.push("seed determinism");
    }

    let elapsed = t.elapsed().as_secs_f64();
    check(
        failures.is_empty() && elapsed < 300.0,
        if failures.is_empty() {
            format!("10^4 decodes, update-rule cases, 20 configs x 3 algorithms, determinism; {elapsed:.1} s")
        } else {
            format!("failed: {}", failures.join(", "))
        },
    )
}

fn convergence_comparison() -> Outcome {
    let t = Instant::now();
    let p = derive_params(32, 3, WaveformKind::Lfm, 2.0).unwrap();
    let budget = 20_000;
    let mut finals: Vec<Vec<f64>> = vec![Vec::new(); 3];
    for seed in 0..5 {
        for (a, alg) in Algorithm::BASELINE_COMPARISON.iter().enumerate() {
            let base = SwarmConfig::default();
            let cfg = SwarmConfig { max_iterations: budget / base.swarm_size, stagnation_window: 0, ..base }.with_seed(seed);
            let r = alg.run(&p, &cfg).unwrap();
            assert_eq!(r.evaluations, budget);
            finals[a].push(r.best_cost);
        }
    }
    let m: Vec<f64> = finals.into_iter().map(median).collect();
    let ok = m[0] <= m[1] && m[0] <= m[2];
    let detail = format!(
        "LFM N=32 L=3, 20000 evaluations, 5 seeds, median final cost: acc-pso {:.2}, pso {:.2}, ga {:.2}; {:.1} min",
        m[0],
        m[1],
        m[2],
        t.elapsed().as_secs_f64() / 60.0
    );
    Outcome {
        verdict: if ok { Verdict::Pass } else { Verdict::SoftFail },
        detail,
    }
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "parameter table", table_parameters),
        (2, "correlation oracle", correlation_oracle),
        (3, "exhaustive-oracle agreement", exhaustive_agreement),
        (4, "N=128 design quality", table_six),
        (5, "waveform ordering trend", ordering_trend),
        (6, "ambiguity identity", ambiguity_identity),
        (7, "property suite", property_suite),
        (8, "convergence comparison (soft)", convergence_comparison),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut hard_failures = 0;
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let o = run();
        let tag = match o.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => {
                hard_failures += 1;
                "FAIL"
            }
            Verdict::SoftFail => "FAIL (soft)",
            Verdict::Skipped => "SKIPPED",
        };
        println!("criterion {id} {name}: {tag}: {}", o.detail);
    }
    if hard_failures > 0 {
        println!("{hard_failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
