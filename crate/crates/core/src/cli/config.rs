use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Aggregation, DopplerBasis};
use crate::optimizer::SwarmConfig;
use crate::waveform::{derive_params, ChirpOrigin, WaveformKind, WaveformParams};

/// Everything a batch job needs. Loaded from JSON (every field optional), then overridden
/// by command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(with = "kind_name")]
    pub waveform: WaveformKind,
    /// Sequence lengths `N`.
    pub n: Vec<usize>,
    /// Set sizes `L`.
    pub antennas: Vec<usize>,
    pub seeds: Vec<u64>,
    pub iterations: usize,
    pub swarm_size: usize,
    pub lambda: f64,
    pub aggregation: Aggregation,
    pub oversample: f64,
    pub chirp_origin: ChirpOrigin,
    pub constriction: f64,
    pub c1: f64,
    pub c2: f64,
    pub stagnation_window: usize,
    pub position_bounds: (f64, f64),
    /// Evaluations per run for `compare`.
    pub budget: usize,
    /// Normalized Doppler at which `ambiguity` reports the matched-filter peak.
    pub doppler_norm: f64,
    pub doppler_basis: DopplerBasis,
    /// Largest |normalized Doppler| of the ambiguity grid.
    pub doppler_span: f64,
    pub doppler_steps: usize,
    /// Number of delay points of the ambiguity grid; `None` means every lag.
    pub delays: Option<usize>,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let swarm = SwarmConfig::default();
        ExperimentConfig {
            waveform: WaveformKind::Lfm,
            n: vec![128],
            antennas: vec![3],
            seeds: vec![0],
            iterations: swarm.max_iterations,
            swarm_size: swarm.swarm_size,
            lambda: swarm.lambda,
            aggregation: swarm.aggregation,
            oversample: 2.0,
            chirp_origin: ChirpOrigin::Subpulse,
            constriction: swarm.constriction,
            c1: swarm.c1,
            c2: swarm.c2,
            stagnation_window: swarm.stagnation_window,
            position_bounds: swarm.position_bounds,
            budget: 20_000,
            doppler_norm: 0.031,
            doppler_basis: DopplerBasis::Pulse,
            doppler_span: 0.1,
            doppler_steps: 21,
            delays: None,
            out: PathBuf::from("out"),
        }
    }
}

mod kind_name {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::waveform::WaveformKind;

    pub fn serialize<S: Serializer>(kind: &WaveformKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(kind.short_name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<WaveformKind, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn swarm(&self, seed: u64) -> SwarmConfig {
        SwarmConfig {
            swarm_size: self.swarm_size,
            max_iterations: self.iterations,
            constriction: self.constriction,
            c1: self.c1,
            c2: self.c2,
            lambda: self.lambda,
            aggregation: self.aggregation,
            rng_seed: seed,
            stagnation_window: self.stagnation_window,
            position_bounds: self.position_bounds,
            warm_start: None,
        }
    }

    pub fn params(&self, n: usize, l: usize) -> Result<WaveformParams> {
        Ok(derive_params(n, l, self.waveform, self.oversample)?.with_chirp_origin(self.chirp_origin))
    }

    /// Every `(N, L)` pair of the sweep.
    pub fn grid(&self) -> Vec<(usize, usize)> {
        self.n
            .iter()
            .flat_map(|&n| self.antennas.iter().map(move |&l| (n, l)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.seeds.is_empty() {
            return bad("at least one seed is required");
        }
        if self.n.is_empty() || self.antennas.is_empty() {
            return bad("at least one sequence length and one antenna count are required");
        }
        if self.doppler_steps == 0 {
            return bad("doppler_steps must be >= 1");
        }
        if !(self.doppler_span >= 0.0) || !self.doppler_norm.is_finite() {
            return bad("doppler span must be >= 0 and the normalized Doppler finite");
        }
        if self.delays == Some(0) {
            return bad("delays must be >= 1");
        }
        self.swarm(self.seeds[0]).validate()?;
        for (n, l) in self.grid() {
            self.params(n, l)?;
        }
        Ok(())
    }
}

/// Flags shared by every subcommand. Anything given here wins over the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// JSON experiment configuration; flags override its fields
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Waveform family: fh, lfm or mlfm
    #[arg(long)]
    pub waveform: Option<WaveformKind>,
    /// Sequence length(s) N, comma separated
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Number(s) of waveforms L, comma separated
    #[arg(long, value_delimiter = ',')]
    pub antennas: Option<Vec<usize>>,
    /// RNG seed(s), comma separated
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub swarm_size: Option<usize>,
    /// ISLR weight in the cost
    #[arg(long)]
    pub lambda: Option<f64>,
    /// paper-min or worst-case
    #[arg(long)]
    pub aggregation: Option<Aggregation>,
    #[arg(long)]
    pub oversample: Option<f64>,
    /// Iterations without improvement before stopping (0 disables)
    #[arg(long)]
    pub stagnation_window: Option<usize>,
    /// Evaluations per run in `compare`
    #[arg(long)]
    pub budget: Option<usize>,
    /// Normalized Doppler f_d·(N·T) for the matched-filter peak report
    #[arg(long)]
    pub doppler_norm: Option<f64>,
    /// Largest |normalized Doppler| on the ambiguity grid
    #[arg(long)]
    pub doppler_span: Option<f64>,
    /// Doppler points on the ambiguity grid
    #[arg(long)]
    pub doppler_steps: Option<usize>,
    /// Delay points on the ambiguity grid (default: every lag)
    #[arg(long)]
    pub delays: Option<usize>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Config file (or defaults) with these flags applied on top.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    c.$field = v.clone();
                }
            )*};
        }
        apply!(
            waveform, n, antennas, seeds, iterations, swarm_size, lambda, aggregation, oversample,
            stagnation_window, budget, doppler_norm, doppler_span, doppler_steps, out
        );
        if self.delays.is_some() {
            c.delays = self.delays;
        }
        Ok(c)
    }

    /// True when N or L were given explicitly (file or flag), as opposed to defaulted.
    pub(crate) fn explicit_shape(&self, config: &ExperimentConfig) -> (bool, bool) {
        let defaults = ExperimentConfig::default();
        (
            self.n.is_some() || config.n != defaults.n,
            self.antennas.is_some() || config.antennas != defaults.antennas,
        )
    }
}
