use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::correlation::recycle;
use super::{find_mainlobe, islr, pslr_auto, pslr_cross, CorrelationEngine, CorrelationVector, Decibels};
use crate::error::{Error, Result};
use crate::waveform::{CodingSequence, SampledWaveform, SubpulseBank, WaveformParams};

/// How per-waveform PSLR terms are folded into the cost.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// `min()` over each waveform's PSLR terms.
    #[default]
    PaperMin,
    /// `max()` instead, so the worst offender drives the search.
    WorstCase,
}

impl Aggregation {
    fn fold(self, values: impl Iterator<Item = f64>) -> Option<f64> {
        match self {
            Aggregation::PaperMin => values.reduce(f64::min),
            Aggregation::WorstCase => values.reduce(f64::max),
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::PaperMin => "paper-min",
            Aggregation::WorstCase => "worst-case",
        })
    }
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "paper-min" | "min" => Ok(Aggregation::PaperMin),
            "worst-case" | "max" => Ok(Aggregation::WorstCase),
            other => Err(Error::InvalidParameter(format!(
                "unknown aggregation {other:?} (expected paper-min or worst-case)"
            ))),
        }
    }
}

/// ASP/CP matrix of a waveform set with its sidelobe ratios and cost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub params: WaveformParams,
    /// Linear scale; diagonal holds each waveform's ASP, off-diagonal the pairwise CP.
    pub matrix: Vec<Vec<f64>>,
    /// Autocorrelation PSLR per waveform.
    pub pslr_db: Vec<Decibels>,
    /// `matrix` in dB. Off-diagonal entries are the cross PSLRs; the diagonal repeats `pslr_db`.
    pub cp_db: Vec<Vec<Decibels>>,
    pub islr_db: Vec<Decibels>,
    pub cost: f64,
    pub lambda: f64,
    pub aggregation: Aggregation,
}

impl CorrelationReport {
    pub fn n_waveforms(&self) -> usize {
        self.matrix.len()
    }

    fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        self.matrix.iter().enumerate().map(|(i, row)| row[i])
    }

    fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        self.matrix.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .filter(move |(q, _)| *q > p)
                .map(|(_, v)| *v)
        })
    }

    /// Smallest ASP of the set (the tabulated convention).
    pub fn best_asp(&self) -> f64 {
        self.diagonal().fold(f64::INFINITY, f64::min)
    }

    pub fn worst_asp(&self) -> f64 {
        self.diagonal().fold(0.0, f64::max)
    }

    /// Smallest pairwise CP; `None` for a single waveform.
    pub fn best_cp(&self) -> Option<f64> {
        self.off_diagonal().reduce(f64::min)
    }

    pub fn worst_cp(&self) -> Option<f64> {
        self.off_diagonal().reduce(f64::max)
    }

    pub fn best_asp_db(&self) -> Decibels {
        Decibels::from_amplitude_ratio(self.best_asp())
    }

    pub fn best_cp_db(&self) -> Option<Decibels> {
        self.best_cp().map(Decibels::from_amplitude_ratio)
    }
}

/// Scores waveform sets of one parameter family, reusing the transform plans.
#[derive(Clone, Debug)]
pub struct CostEvaluator {
    params: WaveformParams,
    lambda: f64,
    aggregation: Aggregation,
    engine: CorrelationEngine,
    bank: SubpulseBank,
}

/// Every normalized correlation of a set: autos[l] and crosses[(p, q)] for p < q.
pub(crate) struct SetCorrelations {
    pub autos: Vec<CorrelationVector>,
    pub crosses: Vec<Vec<Option<CorrelationVector>>>,
}

impl SetCorrelations {
    pub fn cross(&self, p: usize, q: usize) -> &CorrelationVector {
        let (a, b) = if p < q { (p, q) } else { (q, p) };
        self.crosses[a][b].as_ref().expect("cross computed for p < q")
    }
}

impl CostEvaluator {
    pub fn new(params: &WaveformParams, lambda: f64, aggregation: Aggregation) -> Result<Self> {
        params.validate()?;
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(CostEvaluator {
            params: params.clone(),
            lambda,
            aggregation,
            engine: CorrelationEngine::new(params.total_samples()),
            bank: SubpulseBank::new(params)?,
        })
    }

    pub fn params(&self) -> &WaveformParams {
        &self.params
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
    }

    /// Synthesizes and scores a coding set.
    pub fn evaluate(&self, set: &[CodingSequence]) -> Result<(f64, CorrelationReport)> {
        let waves = set
            .iter()
            .map(|s| self.bank.synthesize(s))
            .collect::<Result<Vec<_>>>()?;
        self.evaluate_waveforms(&waves)
    }

    pub(crate) fn correlations(&self, waves: &[SampledWaveform]) -> Result<SetCorrelations> {
        if waves.is_empty() {
            return Err(Error::InvalidParameter("empty waveform set".into()));
        }
        for w in waves {
            if w.len() != self.engine.signal_len() {
                return Err(Error::LengthMismatch {
                    expected: self.engine.signal_len(),
                    actual: w.len(),
                });
            }
        }
        let spectra = waves
            .iter()
            .map(|w| self.engine.spectrum(&w.samples))
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        let energies: Vec<f64> = waves.iter().map(SampledWaveform::energy).collect();
        let autos = spectra
            .iter()
            .map(|s| self.engine.autocorrelation_from_spectrum(s))
            .collect();
        let l = waves.len();
        let mut crosses: Vec<Vec<Option<CorrelationVector>>> = vec![vec![None; l]; l];
        for p in 0..l {
            for q in p + 1..l {
                crosses[p][q] = Some(self.engine.cross_from_spectra(
                    &spectra[p],
                    &spectra[q],
                    energies[p],
                    energies[q],
                ));
            }
        }
        spectra.into_iter().for_each(recycle);
        Ok(SetCorrelations { autos, crosses })
    }

    /// Scores already-synthesized waveforms. Lower cost is better.
    pub fn evaluate_waveforms(&self, waves: &[SampledWaveform]) -> Result<(f64, CorrelationReport)> {
        let corr = self.correlations(waves)?;
        let l = waves.len();

        let mut matrix = vec![vec![0.0; l]; l];
        let mut cp_db = vec![vec![Decibels::NO_SIDELOBES; l]; l];
        let mut pslr_db = Vec::with_capacity(l);
        let mut islr_db = Vec::with_capacity(l);
        for p in 0..l {
            let auto = &corr.autos[p];
            let mainlobe = find_mainlobe(auto, &self.params);
            let asp = pslr_auto(auto, mainlobe);
            pslr_db.push(asp);
            matrix[p][p] = if asp.is_no_sidelobes() { 0.0 } else { asp.to_amplitude_ratio() };
            cp_db[p][p] = asp;
            for q in p + 1..l {
                let c = corr.cross(p, q);
                let peak = c.peak();
                matrix[p][q] = peak;
                matrix[q][p] = peak;
                let db = pslr_cross(c);
                cp_db[p][q] = db;
                cp_db[q][p] = db;
            }
            let others: Vec<&CorrelationVector> =
                (0..l).filter(|&q| q != p).map(|q| corr.cross(p, q)).collect();
            islr_db.push(islr(auto, &others, mainlobe)?);
        }

        let mut cost = 0.0;
        for p in 0..l {
            cost += self
                .aggregation
                .fold(std::iter::once(pslr_db[p].value()))
                .unwrap_or(0.0);
            // A lone waveform has no cross terms.
            if let Some(c) = self
                .aggregation
                .fold((0..l).filter(|&q| q != p).map(|q| cp_db[p][q].value()))
            {
                cost += c;
            }
        }
        if self.lambda > 0.0 {
            cost += self.lambda * islr_db.iter().map(|d| d.value()).sum::<f64>();
        }

        let report = CorrelationReport {
            params: self.params.clone(),
            matrix,
            pslr_db,
            cp_db,
            islr_db,
            cost,
            lambda: self.lambda,
            aggregation: self.aggregation,
        };
        Ok((cost, report))
    }
}

/// Set cost `Σ_l (agg PSLR_A,l + agg_{q≠l} PSLR_C,lq) + λ·Σ_l ISLR_l` and its report.
pub fn cost_function(
    set: &[SampledWaveform],
    lambda: f64,
    aggregation: Aggregation,
) -> Result<(f64, CorrelationReport)> {
    let first = set
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty waveform set".into()))?;
    let mut params = first.params.clone();
    params.n_waveforms = set.len();
    CostEvaluator::new(&params, lambda, aggregation)?.evaluate_waveforms(set)
}
