use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::waveform::SampledWaveform;

/// Magnitudes of a normalized aperiodic correlation.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationVector {
    /// `2S - 1` magnitudes, lag `-(S-1)` first.
    pub values: Vec<f64>,
    /// Index of lag zero, `S - 1`.
    pub zero_lag_index: usize,
    /// The divisor applied to the raw magnitudes.
    pub normalization: f64,
}

impl CorrelationVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Lag (in samples) of `values[index]`.
    pub fn lag(&self, index: usize) -> isize {
        index as isize - self.zero_lag_index as isize
    }

    /// Magnitude at lag `τ`, zero outside the support.
    pub fn at_lag(&self, lag: isize) -> f64 {
        let idx = lag + self.zero_lag_index as isize;
        if idx < 0 {
            return 0.0;
        }
        self.values.get(idx as usize).copied().unwrap_or(0.0)
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Iterates `(lag, magnitude)` pairs.
    pub fn iter_lags(&self) -> impl Iterator<Item = (isize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.lag(i), v))
    }
}

thread_local! {
    // Large transform buffers are recycled; fresh multi-megabyte allocations page-fault.
    static BUFFERS: RefCell<Vec<Vec<Complex64>>> = const { RefCell::new(Vec::new()) };
}

const POOL_LIMIT: usize = 16;

fn take_buffer(len: usize) -> Vec<Complex64> {
    let mut buf = BUFFERS
        .with(|b| b.borrow_mut().pop())
        .unwrap_or_default();
    buf.clear();
    buf.resize(len, Complex64::new(0.0, 0.0));
    buf
}

/// Hands a buffer obtained from [`CorrelationEngine::spectrum`] back for reuse.
pub fn recycle(buf: Vec<Complex64>) {
    BUFFERS.with(|b| {
        let mut pool = b.borrow_mut();
        if pool.len() < POOL_LIMIT {
            pool.push(buf);
        }
    });
}

/// Smallest `n' >= n` whose only prime factors are 2, 3, 5 and 7.
pub fn fast_fft_len(n: usize) -> usize {
    let mut candidate = n.max(1);
    loop {
        let mut r = candidate;
        for p in [2, 3, 5, 7] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return candidate;
        }
        candidate += 1;
    }
}

/// Planned forward/inverse transforms for correlating length-`S` signals.
///
/// The transform length is at least `2S - 1`, so circular wrap-around never aliases lags.
#[derive(Clone)]
pub struct CorrelationEngine {
    signal_len: usize,
    fft_len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for CorrelationEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CorrelationEngine")
            .field("signal_len", &self.signal_len)
            .field("fft_len", &self.fft_len)
            .finish()
    }
}

impl CorrelationEngine {
    pub fn new(signal_len: usize) -> Self {
        let fft_len = fast_fft_len((2 * signal_len).saturating_sub(1).max(1));
        let mut planner = FftPlanner::new();
        CorrelationEngine {
            signal_len,
            fft_len,
            forward: planner.plan_fft_forward(fft_len),
            inverse: planner.plan_fft_inverse(fft_len),
        }
    }

    pub fn signal_len(&self) -> usize {
        self.signal_len
    }

    pub fn fft_len(&self) -> usize {
        self.fft_len
    }

    fn check_len(&self, x: &[Complex64]) -> Result<()> {
        if x.len() != self.signal_len {
            return Err(Error::LengthMismatch {
                expected: self.signal_len,
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// Zero-padded forward transform of `x`.
    pub fn spectrum(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(x)?;
        let mut buf = take_buffer(self.fft_len);
        buf[..x.len()].copy_from_slice(x);
        let mut scratch = take_buffer(self.forward.get_inplace_scratch_len());
        self.forward.process_with_scratch(&mut buf, &mut scratch);
        recycle(scratch);
        Ok(buf)
    }

    // Circular buffer with buf[j] = P · R_ab(-j).
    fn inverse_product(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(a.len(), self.fft_len);
        debug_assert_eq!(b.len(), self.fft_len);
        let mut buf = take_buffer(self.fft_len);
        for ((o, x), y) in buf.iter_mut().zip(a).zip(b) {
            *o = x * y.conj();
        }
        let mut scratch = take_buffer(self.inverse.get_inplace_scratch_len());
        self.inverse.process_with_scratch(&mut buf, &mut scratch);
        recycle(scratch);
        buf
    }

    // Lags -(S-1)..=S-1 in order: R(τ) sits at buf[-τ mod P].
    fn lag_order<'a>(&self, buf: &'a [Complex64]) -> impl Iterator<Item = &'a Complex64> + 'a {
        let s = self.signal_len;
        let p = self.fft_len;
        buf[..s].iter().rev().chain(buf[p - (s - 1)..].iter().rev())
    }

    /// Complex correlation `R_ab(τ)` for all lags, from the spectra of `a` and `b`.
    pub fn correlate_spectra(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let buf = self.inverse_product(a, b);
        let scale = 1.0 / self.fft_len as f64;
        let out = self.lag_order(&buf).map(|c| c * scale).collect();
        recycle(buf);
        out
    }

    pub fn correlate(&self, a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
        let sa = self.spectrum(a)?;
        let sb = self.spectrum(b)?;
        let out = self.correlate_spectra(&sa, &sb);
        recycle(sa);
        recycle(sb);
        Ok(out)
    }

    /// Normalized autocorrelation magnitude from a precomputed spectrum.
    ///
    /// The negative-lag half mirrors the positive half, and the zero-lag value is exactly 1.
    pub fn autocorrelation_from_spectrum(&self, spec: &[Complex64]) -> CorrelationVector {
        let buf = self.inverse_product(spec, spec);
        let s = self.signal_len;
        let z = s - 1;
        let peak = magnitude(&buf[0]);
        let mut values = vec![0.0; 2 * s - 1];
        if peak > 0.0 {
            values[z] = 1.0;
            // R(τ) for τ > 0 lives at buf[P - τ].
            let p = self.fft_len;
            for k in 1..s {
                let v = magnitude(&buf[p - k]) / peak;
                values[z + k] = v;
                values[z - k] = v;
            }
        }
        recycle(buf);
        CorrelationVector {
            values,
            zero_lag_index: z,
            normalization: if peak > 0.0 { peak / self.fft_len as f64 } else { 1.0 },
        }
    }

    /// Normalized cross-correlation magnitude from precomputed spectra and energies.
    pub fn cross_from_spectra(
        &self,
        a: &[Complex64],
        b: &[Complex64],
        energy_a: f64,
        energy_b: f64,
    ) -> CorrelationVector {
        let buf = self.inverse_product(a, b);
        let norm = (energy_a * energy_b).sqrt();
        let norm = if norm > 0.0 { norm } else { 1.0 };
        let scale = 1.0 / (self.fft_len as f64 * norm);
        let values = self.lag_order(&buf).map(|c| magnitude(c) * scale).collect();
        recycle(buf);
        CorrelationVector {
            values,
            zero_lag_index: self.signal_len - 1,
            normalization: norm,
        }
    }
}

/// `|c|` as used for every correlation magnitude in the crate.
#[inline]
pub(crate) fn magnitude(c: &Complex64) -> f64 {
    c.norm_sqr().sqrt()
}

/// Complex aperiodic correlation of two equal-length sample vectors via a fast transform.
pub fn correlate_raw(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("cannot correlate empty signals".into()));
    }
    CorrelationEngine::new(a.len()).correlate(a, b)
}

fn check_pair(a: &SampledWaveform, b: &SampledWaveform) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let tol = 1e-12 * a.sample_rate.abs().max(b.sample_rate.abs());
    if (a.sample_rate - b.sample_rate).abs() > tol {
        return Err(Error::SampleRateMismatch(a.sample_rate, b.sample_rate));
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("cannot correlate empty waveforms".into()));
    }
    Ok(())
}

/// Normalized autocorrelation magnitude; peaks at exactly 1 on zero lag.
pub fn autocorrelate(a: &SampledWaveform) -> Result<CorrelationVector> {
    if a.is_empty() {
        return Err(Error::InvalidParameter("cannot correlate empty waveforms".into()));
    }
    let engine = CorrelationEngine::new(a.len());
    let spec = engine.spectrum(&a.samples)?;
    Ok(engine.autocorrelation_from_spectrum(&spec))
}

/// Normalized aperiodic correlation magnitude of `a` against `b`.
///
/// Scaled by `sqrt(E_a·E_b)`; identical inputs are routed to [`autocorrelate`].
pub fn cross_correlate(a: &SampledWaveform, b: &SampledWaveform) -> Result<CorrelationVector> {
    check_pair(a, b)?;
    if a.samples == b.samples {
        return autocorrelate(a);
    }
    let engine = CorrelationEngine::new(a.len());
    let sa = engine.spectrum(&a.samples)?;
    let sb = engine.spectrum(&b.samples)?;
    Ok(engine.cross_from_spectra(&sa, &sb, a.energy(), b.energy()))
}
