//! Straight-line reference implementations used as test oracles. Nothing here calls into
//! the FFT paths of the library.
#![allow(dead_code)]

use std::f64::consts::PI;

use dfcw::prelude::*;
use num_complex::Complex64;

pub fn samples_per_subpulse(n: usize, oversample: f64) -> usize {
    // T = 1, Δf = 3, B = 2.25·N.
    let band = 3.0 * n as f64 + 2.25 * n as f64;
    (oversample * band - 1e-9).ceil() as usize
}

/// Direct evaluation of the three waveform definitions at subpulse-local midpoints.
pub fn direct_synth(codes: &[usize], kind: WaveformKind, oversample: f64) -> Vec<Complex64> {
    let n = codes.len();
    let m_per = samples_per_subpulse(n, oversample);
    let fs = m_per as f64;
    let df = 3.0;
    let k = 2.25 * n as f64;
    let mut out = Vec::with_capacity(n * m_per);
    for (sub, &code) in codes.iter().enumerate() {
        let f = code as f64 * df;
        for m in 0..m_per {
            let tl = (m as f64 + 0.5) / fs;
            let t = sub as f64 + tl;
            let phase = match kind {
                WaveformKind::Fh => 2.0 * PI * f * t,
                WaveformKind::Lfm => 2.0 * PI * f * tl + PI * k * tl * tl,
                WaveformKind::ModifiedLfm => 2.0 * PI * f * tl + PI * k * tl * tl * tl,
            };
            out.push(Complex64::from_polar(1.0, phase));
        }
    }
    out
}

/// `R(τ) = Σ_m a[m]·conj(b[m+τ])` for `τ = -(S-1) ..= S-1`, index `τ + S - 1`.
pub fn direct_corr(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let s = a.len() as isize;
    (-(s - 1)..s)
        .map(|tau| {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..s {
                let j = m + tau;
                if (0..s).contains(&j) {
                    acc += a[m as usize] * b[j as usize].conj();
                }
            }
            acc
        })
        .collect()
}

pub fn energy(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

pub fn normalized_auto(a: &[Complex64]) -> Vec<f64> {
    let r = direct_corr(a, a);
    let peak = r[a.len() - 1].norm();
    r.iter().map(|z| z.norm() / peak).collect()
}

pub fn normalized_cross(a: &[Complex64], b: &[Complex64]) -> Vec<f64> {
    let scale = (energy(a) * energy(b)).sqrt();
    direct_corr(a, b).iter().map(|z| z.norm() / scale).collect()
}

/// Half-width of the mainlobe: stop before the first local minimum within
/// `ceil(2·fs/B)` lags, else `ceil(fs/B)`.
pub fn mainlobe_half_width(auto: &[f64], fs_over_b: f64) -> usize {
    let z = auto.len() / 2;
    let limit = (2.0 * fs_over_b).ceil() as usize;
    for k in 1..=limit.min(z.saturating_sub(1)) {
        if auto[z + k] < auto[z + k - 1] && auto[z + k] <= auto[z + k + 1] {
            return k - 1;
        }
    }
    fs_over_b.ceil() as usize
}

pub fn db(x: f64) -> f64 {
    20.0 * x.log10()
}

pub struct Oracle {
    pub asp: Vec<f64>,
    pub cp: Vec<Vec<f64>>,
    pub islr_db: Vec<f64>,
    pub cost: f64,
}

/// The set cost, chained from the direct correlations above with min-aggregation.
pub fn direct_cost(waves: &[Vec<Complex64>], n: usize, oversample: f64, lambda: f64) -> Oracle {
    let l = waves.len();
    let fs_over_b = samples_per_subpulse(n, oversample) as f64 / (2.25 * n as f64);
    let autos: Vec<Vec<f64>> = waves.iter().map(|w| normalized_auto(w)).collect();
    let mut cp = vec![vec![0.0; l]; l];
    let mut cross_sums = vec![0.0; l];
    for p in 0..l {
        for q in 0..l {
            if p != q {
                let c = normalized_cross(&waves[p], &waves[q]);
                cp[p][q] = c.iter().cloned().fold(0.0, f64::max);
                cross_sums[p] += c.iter().sum::<f64>();
            }
        }
    }
    let mut asp = Vec::new();
    let mut islr_db = Vec::new();
    let mut cost = 0.0;
    for p in 0..l {
        let a = &autos[p];
        let z = a.len() / 2;
        let hw = mainlobe_half_width(a, fs_over_b);
        let (mut inside, mut outside, mut side_peak) = (0.0, 0.0, 0.0f64);
        for (i, &v) in a.iter().enumerate() {
            if i.abs_diff(z) <= hw {
                inside += v;
            } else {
                outside += v;
                side_peak = side_peak.max(v);
            }
        }
        asp.push(side_peak);
        cost += db(side_peak);
        if l > 1 {
            let min_cross = (0..l).filter(|&q| q != p).map(|q| db(cp[p][q])).fold(f64::INFINITY, f64::min);
            cost += min_cross;
        }
        let islr = db((outside + cross_sums[p]) / inside);
        islr_db.push(islr);
        if lambda != 0.0 {
            cost += lambda * islr;
        }
    }
    Oracle { asp, cp, islr_db, cost }
}

pub fn random_complex(len: usize, seed: u64) -> Vec<Complex64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}
