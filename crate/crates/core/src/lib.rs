//! Design and analysis of orthogonal discrete-frequency-coded waveform (DFCW) sets
//! for MIMO radar.
//!
//! The crate is organised around four pieces:
//!
//! - [`waveform`]: parameter derivation, coding sequences and sampled synthesis of the
//!   frequency-hopping (`FH`), LFM-subpulse (`LFM`) and cubic-phase (`MODIFIED_LFM`) variants.
//! - [`metrics`]: aperiodic correlation, peak and integrated sidelobe ratios, the set cost
//!   function and delay-Doppler ambiguity surfaces.
//! - [`optimizer`]: accelerated particle swarm search over random-key encoded permutation
//!   sets, with plain PSO, a permutation GA and an exhaustive oracle for small instances.
//! - [`cli`]: the batch front end behind the `dfcw` binary.
//!
//! ```
//! use dfcw::prelude::*;
//!
//! let params = derive_params(8, 2, WaveformKind::Lfm, 2.0).unwrap();
//! let set = random_coding_set(8, 2, 7).unwrap();
//! let waves: Vec<_> = set.iter().map(|s| synthesize(s, &params).unwrap()).collect();
//! let (cost, report) = cost_function(&waves, 0.1, Aggregation::PaperMin).unwrap();
//! assert_eq!(report.matrix.len(), 2);
//! assert!(cost.is_finite());
//! ```

pub mod cli;
pub mod error;
pub mod metrics;
pub mod optimizer;
pub mod waveform;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::metrics::{
        ambiguity, cost_function, cross_correlate, find_mainlobe, islr, pslr_auto, pslr_cross,
        total_ambiguity, Aggregation, AmbiguitySurface, CorrelationReport, CorrelationVector,
        Decibels, LagInterval,
    };
    pub use crate::optimizer::{
        decode_position, exhaustive_search, run_acc_pso, run_baseline_ga, run_baseline_pso,
        OptimizationResult, SwarmConfig,
    };
    pub use crate::waveform::{
        derive_params, random_coding_set, synthesize, ChirpOrigin, CodingSequence,
        SampledWaveform, WaveformKind, WaveformParams,
    };
}
