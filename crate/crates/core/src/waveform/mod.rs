//! Waveform parameters, coding sequences and sampled synthesis.
//!
//! Time is dimensionless: one subpulse lasts `T = 1` time unit, so frequencies are in
//! cycles per time unit. The parameter family fixes `T·Δf = 3` and `B/Δf = 3N/4`
//! (equivalently `B·T = 9N/4`), which for the tabulated lengths gives
//!
//! | N   | B·T | B/Δf | T·Δf |
//! |-----|-----|------|------|
//! | 8   | 18  | 6    | 3    |
//! | 16  | 36  | 12   | 3    |
//! | 32  | 72  | 24   | 3    |
//! | 64  | 144 | 48   | 3    |
//! | 128 | 288 | 96   | 3    |

mod seqfile;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use seqfile::{format_sequences, parse_sequences, read_sequence_file, write_sequence_file};

/// Time-frequency product `T·Δf` shared by every row of the parameter family.
pub const TIME_FREQ_STEP_PRODUCT: f64 = 3.0;

/// Ratio `B / (N·Δf)`; the chirp bandwidth is three quarters of the hop span.
pub const BANDWIDTH_PER_HOP_SPAN: f64 = 0.75;

/// Smallest sequence length [`derive_params`] accepts.
pub const MIN_SUBPULSES: usize = 4;

/// Which DFCW variant to synthesize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WaveformKind {
    /// Fixed-frequency subpulses.
    Fh,
    /// Each subpulse carries a linear chirp of bandwidth `B`.
    Lfm,
    /// Each subpulse carries a cubic-phase chirp.
    ModifiedLfm,
}

impl WaveformKind {
    pub const ALL: [WaveformKind; 3] = [WaveformKind::Fh, WaveformKind::Lfm, WaveformKind::ModifiedLfm];

    /// Short name used on the command line and in file names.
    pub fn short_name(self) -> &'static str {
        match self {
            WaveformKind::Fh => "fh",
            WaveformKind::Lfm => "lfm",
            WaveformKind::ModifiedLfm => "mlfm",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            WaveformKind::Fh => "DFCW_FH",
            WaveformKind::Lfm => "DFCW_LFM",
            WaveformKind::ModifiedLfm => "Modified DFCW_LFM",
        }
    }
}

impl fmt::Display for WaveformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for WaveformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fh" | "dfcw_fh" => Ok(WaveformKind::Fh),
            "lfm" | "dfcw_lfm" => Ok(WaveformKind::Lfm),
            "mlfm" | "modified_lfm" | "modified-lfm" => Ok(WaveformKind::ModifiedLfm),
            other => Err(Error::InvalidParameter(format!(
                "unknown waveform kind {other:?} (expected fh, lfm or mlfm)"
            ))),
        }
    }
}

/// Time origin of the per-subpulse chirp term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChirpOrigin {
    /// Every subpulse restarts its chirp at the subpulse boundary.
    #[default]
    Subpulse,
    /// The chirp runs on the global pulse clock.
    Global,
}

/// Parameters of one DFCW set, in normalized time units (`T = 1`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveformParams {
    pub n_subpulses: usize,
    pub n_waveforms: usize,
    pub subpulse_duration: f64,
    pub freq_step: f64,
    pub lfm_bandwidth: f64,
    pub slope: f64,
    pub kind: WaveformKind,
    pub oversample: f64,
    #[serde(default)]
    pub chirp_origin: ChirpOrigin,
}

impl WaveformParams {
    /// Samples per subpulse: `ceil(oversample · T · (N·Δf + B))`, at least one.
    pub fn samples_per_subpulse(&self) -> usize {
        let band = self.n_subpulses as f64 * self.freq_step + self.lfm_bandwidth;
        let m = self.oversample * self.subpulse_duration * band;
        // Guard against values like 42.000000000001 produced by the products above.
        ((m - 1e-9).ceil() as usize).max(1)
    }

    pub fn sample_rate(&self) -> f64 {
        self.samples_per_subpulse() as f64 / self.subpulse_duration
    }

    /// Total number of samples in one synthesized waveform.
    pub fn total_samples(&self) -> usize {
        self.samples_per_subpulse() * self.n_subpulses
    }

    /// Total pulse duration `N·T`.
    pub fn pulse_duration(&self) -> f64 {
        self.n_subpulses as f64 * self.subpulse_duration
    }

    pub fn bandwidth_time_product(&self) -> f64 {
        self.lfm_bandwidth * self.subpulse_duration
    }

    pub fn bandwidth_over_step(&self) -> f64 {
        self.lfm_bandwidth / self.freq_step
    }

    pub fn time_step_product(&self) -> f64 {
        self.subpulse_duration * self.freq_step
    }

    pub fn with_chirp_origin(mut self, origin: ChirpOrigin) -> Self {
        self.chirp_origin = origin;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.n_subpulses == 0 {
            return Err(Error::InvalidParameter("n_subpulses must be at least 1".into()));
        }
        if self.n_waveforms == 0 || self.n_waveforms > self.n_subpulses {
            return Err(Error::InvalidParameter(format!(
                "n_waveforms must satisfy 1 <= L <= N (L = {}, N = {})",
                self.n_waveforms, self.n_subpulses
            )));
        }
        if !(self.oversample >= 1.0) || !self.oversample.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "oversample must be >= 1, got {}",
                self.oversample
            )));
        }
        if !(self.subpulse_duration > 0.0) {
            return Err(Error::InvalidParameter("subpulse duration must be positive".into()));
        }
        Ok(())
    }
}

/// Builds the parameter set for `n_subpulses` hops and `n_waveforms` codes.
///
/// `T` is normalized to 1, `Δf = 3/T`, `B = (9/4)·N/T` and `k = B/T`.
pub fn derive_params(
    n_subpulses: usize,
    n_waveforms: usize,
    kind: WaveformKind,
    oversample: f64,
) -> Result<WaveformParams> {
    if n_subpulses < MIN_SUBPULSES {
        return Err(Error::InvalidParameter(format!(
            "sequence length must be at least {MIN_SUBPULSES}, got {n_subpulses}"
        )));
    }
    if !(oversample >= 1.0) || !oversample.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "oversample must be >= 1, got {oversample}"
        )));
    }
    let subpulse_duration = 1.0;
    let freq_step = TIME_FREQ_STEP_PRODUCT / subpulse_duration;
    let lfm_bandwidth = BANDWIDTH_PER_HOP_SPAN * n_subpulses as f64 * freq_step;
    let params = WaveformParams {
        n_subpulses,
        n_waveforms,
        subpulse_duration,
        freq_step,
        lfm_bandwidth,
        slope: lfm_bandwidth / subpulse_duration,
        kind,
        oversample,
        chirp_origin: ChirpOrigin::default(),
    };
    params.validate()?;
    Ok(params)
}

/// A permutation of `0..N` assigning a frequency index to each subpulse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CodingSequence(Vec<usize>);

impl CodingSequence {
    pub fn new(codes: Vec<usize>) -> Result<Self> {
        let n = codes.len();
        if n == 0 {
            return Err(Error::NotAPermutation {
                n,
                detail: "empty sequence".into(),
            });
        }
        let mut seen = vec![false; n];
        for &c in &codes {
            if c >= n {
                return Err(Error::NotAPermutation {
                    n,
                    detail: format!("index {c} out of range"),
                });
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::NotAPermutation {
                    n,
                    detail: format!("index {c} repeated"),
                });
            }
        }
        Ok(CodingSequence(codes))
    }

    /// The identity permutation `[0, 1, ..., n-1]`.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    pub fn codes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    // Callers guarantee the permutation property.
    pub(crate) fn from_trusted(codes: Vec<usize>) -> Self {
        debug_assert!(CodingSequence::new(codes.clone()).is_ok());
        CodingSequence(codes)
    }
}

impl TryFrom<Vec<usize>> for CodingSequence {
    type Error = Error;

    fn try_from(codes: Vec<usize>) -> Result<Self> {
        CodingSequence::new(codes)
    }
}

impl From<CodingSequence> for Vec<usize> {
    fn from(seq: CodingSequence) -> Self {
        seq.0
    }
}

impl fmt::Display for CodingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `n_waveforms` independent uniform permutations of `0..n_subpulses`, reproducible from `seed`.
pub fn random_coding_set(
    n_subpulses: usize,
    n_waveforms: usize,
    seed: u64,
) -> Result<Vec<CodingSequence>> {
    if n_subpulses == 0 || n_waveforms == 0 || n_waveforms > n_subpulses {
        return Err(Error::InvalidParameter(format!(
            "need N >= L >= 1 (N = {n_subpulses}, L = {n_waveforms})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n_waveforms)
        .map(|_| {
            let mut codes: Vec<usize> = (0..n_subpulses).collect();
            codes.shuffle(&mut rng);
            CodingSequence(codes)
        })
        .collect())
}

/// Complex baseband samples of one waveform.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledWaveform {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
    pub params: WaveformParams,
}

impl SampledWaveform {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `Σ|s|²`, the zero-lag autocorrelation value.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }
}

/// Per-code subpulse samples for one parameter set, reused across many syntheses.
///
/// Subpulse `n` of any waveform is `exp(j2π·offset(n, code))` times the bank entry for its
/// code, where the offset collects every phase term that depends on the subpulse position.
#[derive(Clone, Debug)]
pub struct SubpulseBank {
    params: WaveformParams,
    per_subpulse: usize,
    templates: Vec<Vec<Complex64>>,
}

impl SubpulseBank {
    pub fn new(params: &WaveformParams) -> Result<Self> {
        params.validate()?;
        let per = params.samples_per_subpulse();
        let templates = (0..params.n_subpulses)
            .map(|code| {
                (0..per)
                    .map(|m| unit(template_cycles(params, code, local_time(params, per, m))))
                    .collect()
            })
            .collect();
        Ok(SubpulseBank {
            params: params.clone(),
            per_subpulse: per,
            templates,
        })
    }

    pub fn params(&self) -> &WaveformParams {
        &self.params
    }

    /// Samples the waveform coded by `seq`.
    pub fn synthesize(&self, seq: &CodingSequence) -> Result<SampledWaveform> {
        let params = &self.params;
        if seq.len() != params.n_subpulses {
            return Err(Error::LengthMismatch {
                expected: params.n_subpulses,
                actual: seq.len(),
            });
        }
        let per = self.per_subpulse;
        let mut samples = Vec::with_capacity(per * seq.len());
        let global_chirp =
            params.chirp_origin == ChirpOrigin::Global && params.kind != WaveformKind::Fh;
        for (n, &code) in seq.codes().iter().enumerate() {
            let template = &self.templates[code];
            if global_chirp {
                // The chirp argument no longer separates; evaluate directly.
                let start = n as f64 * params.subpulse_duration;
                samples.extend((0..per).map(|m| {
                    let t_loc = local_time(params, per, m);
                    unit(direct_cycles(params, code, start, t_loc))
                }));
                continue;
            }
            let offset = match params.kind {
                // f_n·t = f_n·nT + f_n·t_loc
                WaveformKind::Fh => {
                    (code as f64 * params.freq_step * n as f64 * params.subpulse_duration)
                        .rem_euclid(1.0)
                }
                WaveformKind::Lfm | WaveformKind::ModifiedLfm => 0.0,
            };
            if offset == 0.0 {
                samples.extend_from_slice(template);
            } else {
                let rot = unit(offset);
                samples.extend(template.iter().map(|s| s * rot));
            }
        }
        Ok(SampledWaveform {
            samples,
            sample_rate: params.sample_rate(),
            params: params.clone(),
        })
    }
}

fn unit(cycles: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * cycles.rem_euclid(1.0))
}

// Subpulse-local sample instant (m + 0.5)/fs.
fn local_time(params: &WaveformParams, per: usize, m: usize) -> f64 {
    (m as f64 + 0.5) / (per as f64 / params.subpulse_duration)
}

// Phase in cycles of one subpulse with its chirp referenced to the subpulse start.
fn template_cycles(params: &WaveformParams, code: usize, t_loc: f64) -> f64 {
    let f = code as f64 * params.freq_step;
    match params.kind {
        WaveformKind::Fh => f * t_loc,
        WaveformKind::Lfm => f * t_loc + 0.5 * params.slope * t_loc * t_loc,
        WaveformKind::ModifiedLfm => {
            f * t_loc + 0.5 * (params.slope / params.subpulse_duration) * t_loc * t_loc * t_loc
        }
    }
}

// Phase in cycles with the chirp on the global clock t = start + t_loc.
fn direct_cycles(params: &WaveformParams, code: usize, start: f64, t_loc: f64) -> f64 {
    let f = code as f64 * params.freq_step;
    let t = start + t_loc;
    match params.kind {
        WaveformKind::Fh => f * t,
        WaveformKind::Lfm => f * t_loc + 0.5 * params.slope * t * t,
        WaveformKind::ModifiedLfm => {
            f * t_loc + 0.5 * (params.slope / params.subpulse_duration) * t * t * t
        }
    }
}

/// Samples the waveform coded by `seq` at subpulse-local midpoints `(m + 0.5)/fs`.
///
/// - `FH`: `exp(j2π f_n t)` on the global clock `t = nT + t_loc`.
/// - `LFM`: `exp(j2π f_n (t - nT)) · exp(jπ k t_c²)`.
/// - `MODIFIED_LFM`: `exp(j2π f_n (t - nT)) · exp(jπ (k/T) t_c³)`.
///
/// `t_c` is `t_loc` or `t` depending on [`ChirpOrigin`], and `f_n = code_n · Δf`. All samples
/// have unit modulus. For many syntheses with one parameter set use [`SubpulseBank`].
pub fn synthesize(seq: &CodingSequence, params: &WaveformParams) -> Result<SampledWaveform> {
    params.validate()?;
    if seq.len() != params.n_subpulses {
        return Err(Error::LengthMismatch {
            expected: params.n_subpulses,
            actual: seq.len(),
        });
    }
    SubpulseBank::new(params)?.synthesize(seq)
}

/// Synthesizes every sequence of a set with shared parameters.
pub fn synthesize_set(
    set: &[CodingSequence],
    params: &WaveformParams,
) -> Result<Vec<SampledWaveform>> {
    let bank = SubpulseBank::new(params)?;
    set.iter().map(|s| bank.synthesize(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_match_parameter_family() {
        for (n, bt, b_df) in [(8, 18.0, 6.0), (16, 36.0, 12.0), (128, 288.0, 96.0)] {
            let p = derive_params(n, 3, WaveformKind::Lfm, 2.0).unwrap();
            assert_eq!(p.bandwidth_time_product(), bt);
            assert_eq!(p.bandwidth_over_step(), b_df);
            assert_eq!(p.time_step_product(), 3.0);
            assert_eq!(p.slope * p.subpulse_duration, p.lfm_bandwidth);
        }
    }

    #[test]
    fn extrapolated_row_for_four_subpulses() {
        let p = derive_params(4, 2, WaveformKind::Lfm, 1.0).unwrap();
        assert_eq!(p.bandwidth_time_product(), 9.0);
        assert_eq!(p.bandwidth_over_step(), 3.0);
        assert_eq!(p.time_step_product(), 3.0);
    }

    #[test]
    fn rejects_short_sequences_and_undersampling() {
        assert!(derive_params(3, 1, WaveformKind::Fh, 2.0).is_err());
        assert!(derive_params(8, 1, WaveformKind::Fh, 0.5).is_err());
        assert!(derive_params(8, 1, WaveformKind::Fh, f64::NAN).is_err());
        assert!(derive_params(8, 9, WaveformKind::Fh, 2.0).is_err());
    }

    #[test]
    fn samples_per_subpulse_covers_composite_band() {
        // 2 * (128*3 + 288) = 1344
        let p = derive_params(128, 3, WaveformKind::ModifiedLfm, 2.0).unwrap();
        assert_eq!(p.samples_per_subpulse(), 1344);
        let p = derive_params(4, 1, WaveformKind::Fh, 2.0).unwrap();
        assert_eq!(p.samples_per_subpulse(), 42);
    }

    #[test]
    fn coding_sequence_rejects_non_permutations() {
        assert!(CodingSequence::new(vec![0, 1, 1]).is_err());
        assert!(CodingSequence::new(vec![0, 3, 1]).is_err());
        assert!(CodingSequence::new(vec![]).is_err());
        assert_eq!(CodingSequence::new(vec![2, 0, 1]).unwrap().codes(), &[2, 0, 1]);
    }

    #[test]
    fn random_sets_are_permutations_and_deterministic() {
        let a = random_coding_set(4, 2, 7).unwrap();
        let b = random_coding_set(4, 2, 7).unwrap();
        assert_eq!(a, b);
        for s in &a {
            let mut c = s.codes().to_vec();
            c.sort_unstable();
            assert_eq!(c, vec![0, 1, 2, 3]);
        }
        assert_eq!(random_coding_set(1, 1, 99).unwrap()[0].codes(), &[0]);
        assert!(random_coding_set(2, 3, 0).is_err());
    }

    fn manual_params(n: usize, kind: WaveformKind) -> WaveformParams {
        WaveformParams {
            n_subpulses: n,
            n_waveforms: 1,
            subpulse_duration: 1.0,
            freq_step: 3.0,
            lfm_bandwidth: 0.75 * n as f64 * 3.0,
            slope: 0.75 * n as f64 * 3.0,
            kind,
            oversample: 2.0,
            chirp_origin: ChirpOrigin::Subpulse,
        }
    }

    #[test]
    fn single_zero_frequency_subpulse_is_constant() {
        let p = manual_params(1, WaveformKind::Fh);
        let w = synthesize(&CodingSequence::identity(1).unwrap(), &p).unwrap();
        for s in &w.samples {
            assert_eq!(*s, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn second_fh_subpulse_hops_one_step() {
        let p = manual_params(2, WaveformKind::Fh);
        let w = synthesize(&CodingSequence::new(vec![0, 1]).unwrap(), &p).unwrap();
        let per = p.samples_per_subpulse();
        let fs = w.sample_rate;
        for m in 0..per {
            let t = 1.0 + (m as f64 + 0.5) / fs;
            let expect = Complex64::from_polar(1.0, TAU * p.freq_step * t);
            assert!((w.samples[per + m] - expect).norm() < 1e-12);
        }
        assert!(w.samples.iter().all(|s| (s.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn synthesize_rejects_length_mismatch() {
        let p = derive_params(8, 1, WaveformKind::Lfm, 2.0).unwrap();
        let seq = CodingSequence::identity(4).unwrap();
        assert!(matches!(
            synthesize(&seq, &p),
            Err(Error::LengthMismatch { expected: 8, actual: 4 })
        ));
    }

    #[test]
    fn global_chirp_origin_differs_from_subpulse_origin() {
        let p = derive_params(4, 1, WaveformKind::Lfm, 2.0).unwrap();
        let seq = CodingSequence::new(vec![2, 0, 3, 1]).unwrap();
        let local = synthesize(&seq, &p).unwrap();
        let global = synthesize(&seq, &p.clone().with_chirp_origin(ChirpOrigin::Global)).unwrap();
        let per = p.samples_per_subpulse();
        // First subpulse identical, later ones differ.
        assert_eq!(local.samples[..per], global.samples[..per]);
        assert_ne!(local.samples[per..], global.samples[per..]);
    }
}
