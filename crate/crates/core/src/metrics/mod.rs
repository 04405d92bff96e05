//! Correlation-based scoring of waveform sets.
//!
//! All correlations are aperiodic: `R_ab(τ) = Σ_m a[m]·conj(b[m+τ])` with zero padding, for
//! `τ = -(S-1) ..= S-1`. Vectors are indexed so that `values[τ + S - 1]` holds lag `τ`.

mod ambiguity;
mod correlation;
mod cost;
mod sidelobe;

pub use ambiguity::{
    ambiguity, doppler_from_normalized, peak_at_doppler, total_ambiguity, AmbiguitySurface,
    DopplerBasis,
};
pub use correlation::{
    autocorrelate, correlate_raw, recycle, cross_correlate, fast_fft_len, CorrelationEngine,
    CorrelationVector,
};
pub use cost::{cost_function, Aggregation, CorrelationReport, CostEvaluator};
pub use sidelobe::{find_mainlobe, islr, pslr_auto, pslr_cross, Decibels, LagInterval};
