use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CorrelationVector;
use crate::error::{Error, Result};
use crate::waveform::WaveformParams;

/// A level in decibels (`20·log10` of an amplitude ratio).
///
/// A zero ratio maps to [`Decibels::NO_SIDELOBES`], stored as negative infinity. In JSON it
/// is written as `null`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Decibels(f64);

impl Decibels {
    pub const NO_SIDELOBES: Decibels = Decibels(f64::NEG_INFINITY);

    pub fn from_amplitude_ratio(ratio: f64) -> Self {
        if ratio > 0.0 {
            Decibels(20.0 * ratio.log10())
        } else {
            Self::NO_SIDELOBES
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_no_sidelobes(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn to_amplitude_ratio(self) -> f64 {
        10f64.powf(self.0 / 20.0)
    }
}

impl fmt::Display for Decibels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_no_sidelobes() {
            f.write_str("-inf dB")
        } else {
            write!(f, "{:.2} dB", self.0)
        }
    }
}

impl Serialize for Decibels {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_some(&self.0)
        } else {
            s.serialize_none()
        }
    }
}

impl<'de> Deserialize<'de> for Decibels {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.map_or(Decibels::NO_SIDELOBES, Decibels))
    }
}

/// Symmetric mainlobe `|τ| <= half_width` around zero lag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagInterval {
    pub half_width: usize,
}

impl LagInterval {
    pub fn contains(&self, lag: isize) -> bool {
        lag.unsigned_abs() <= self.half_width
    }
}

// First k >= 1 where `at(k)` is a strict descent followed by a non-ascent, searched up to
// `limit` inclusive. The last available sample never counts.
fn first_local_min(at: impl Fn(usize) -> f64, len: usize, limit: usize) -> Option<usize> {
    (1..len.saturating_sub(1))
        .take_while(|&k| k <= limit)
        .find(|&k| at(k) < at(k - 1) && at(k) <= at(k + 1))
}

/// Locates the autocorrelation mainlobe.
///
/// The lobe ends just before the first local minimum on each side of zero lag. When no
/// minimum occurs within `2·fs/B` samples it falls back to a half-width of `ceil(fs/B)`.
pub fn find_mainlobe(auto: &CorrelationVector, params: &WaveformParams) -> LagInterval {
    let z = auto.zero_lag_index;
    let v = &auto.values;
    let cell = params.sample_rate() / params.lfm_bandwidth;
    let limit = (2.0 * cell).ceil() as usize;
    let right = first_local_min(|k| v[z + k], v.len() - z, limit);
    let left = first_local_min(|k| v[z - k], z + 1, limit);
    let half = match (right, left) {
        (Some(r), Some(l)) => r.max(l) - 1,
        (Some(k), None) | (None, Some(k)) => k - 1,
        (None, None) => cell.ceil() as usize,
    };
    LagInterval {
        half_width: half.min(z),
    }
}

/// Autocorrelation peak sidelobe ratio: largest sidelobe over largest mainlobe value.
pub fn pslr_auto(auto: &CorrelationVector, mainlobe: LagInterval) -> Decibels {
    let (mut side, mut main) = (0.0f64, 0.0f64);
    for (lag, v) in auto.iter_lags() {
        if mainlobe.contains(lag) {
            main = main.max(v);
        } else {
            side = side.max(v);
        }
    }
    if main <= 0.0 {
        return Decibels::NO_SIDELOBES;
    }
    Decibels::from_amplitude_ratio(side / main)
}

/// Cross-correlation peak in dB; every lag counts as sidelobe.
pub fn pslr_cross(cross: &CorrelationVector) -> Decibels {
    Decibels::from_amplitude_ratio(cross.peak())
}

/// Integrated sidelobe ratio of one waveform against the rest of its set.
///
/// Numerator: autocorrelation magnitudes outside the mainlobe plus every cross-correlation
/// magnitude. Denominator: autocorrelation magnitudes inside the mainlobe.
pub fn islr(
    auto: &CorrelationVector,
    crosses: &[&CorrelationVector],
    mainlobe: LagInterval,
) -> Result<Decibels> {
    let (mut side, mut main) = (0.0, 0.0);
    for (lag, v) in auto.iter_lags() {
        if mainlobe.contains(lag) {
            main += v;
        } else {
            side += v;
        }
    }
    if main <= 0.0 {
        return Err(Error::InvalidParameter("mainlobe carries no energy".into()));
    }
    side += crosses.iter().flat_map(|c| c.values.iter()).sum::<f64>();
    Ok(Decibels::from_amplitude_ratio(side / main))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{derive_params, WaveformKind};

    fn vector(values: Vec<f64>) -> CorrelationVector {
        let zero_lag_index = values.len() / 2;
        CorrelationVector {
            values,
            zero_lag_index,
            normalization: 1.0,
        }
    }

    fn params() -> WaveformParams {
        derive_params(8, 1, WaveformKind::Lfm, 2.0).unwrap()
    }

    #[test]
    fn decibel_conversions() {
        assert!((Decibels::from_amplitude_ratio(0.1).value() + 20.0).abs() < 1e-12);
        assert_eq!(Decibels::from_amplitude_ratio(1.0).value(), 0.0);
        assert!(Decibels::from_amplitude_ratio(0.0).is_no_sidelobes());
        assert_eq!(format!("{}", Decibels::from_amplitude_ratio(0.053)), "-25.51 dB");
    }

    #[test]
    fn decibels_round_trip_through_json() {
        let v = vec![Decibels::from_amplitude_ratio(0.5), Decibels::NO_SIDELOBES];
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.ends_with(",null]"));
        let back: Vec<Decibels> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn impulse_mainlobe_is_zero_lag_only() {
        let mut v = vec![0.0; 11];
        v[5] = 1.0;
        let auto = vector(v);
        let ml = find_mainlobe(&auto, &params());
        assert_eq!(ml.half_width, 0);
        assert!(pslr_auto(&auto, ml).is_no_sidelobes());
        assert!(islr(&auto, &[], ml).unwrap().is_no_sidelobes());
    }

    #[test]
    fn triangle_without_nulls_uses_resolution_cell() {
        let s = 200usize;
        let values: Vec<f64> = (0..2 * s - 1)
            .map(|i| (s as f64 - (i as f64 - (s - 1) as f64).abs()) / s as f64)
            .collect();
        let auto = CorrelationVector {
            values,
            zero_lag_index: s - 1,
            normalization: 1.0,
        };
        let p = params();
        let ml = find_mainlobe(&auto, &p);
        assert_eq!(ml.half_width, (p.sample_rate() / p.lfm_bandwidth).ceil() as usize);
    }

    #[test]
    fn first_null_ends_the_mainlobe() {
        let auto = vector(vec![0.3, 0.1, 0.2, 0.05, 0.6, 1.0, 0.6, 0.05, 0.2, 0.1, 0.3]);
        let ml = find_mainlobe(&auto, &params());
        assert_eq!(ml.half_width, 1);
        let pslr = pslr_auto(&auto, ml);
        assert!((pslr.value() - 20.0 * 0.3f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn equal_side_and_main_energy_is_zero_db() {
        let auto = vector(vec![0.25, 0.25, 1.0, 0.25, 0.25]);
        let ml = LagInterval { half_width: 0 };
        assert!(islr(&auto, &[], ml).unwrap().value().abs() < 1e-12);
        assert_eq!(pslr_auto(&auto, ml).value(), 20.0 * 0.25f64.log10());
    }

    #[test]
    fn cross_peak_and_empty_cross() {
        let c = vector(vec![0.001, 0.0077, 0.002]);
        assert!((pslr_cross(&c).value() - 20.0 * 0.0077f64.log10()).abs() < 1e-12);
        assert!(pslr_cross(&vector(vec![0.0; 5])).is_no_sidelobes());
    }

    #[test]
    fn islr_rejects_empty_mainlobe() {
        let auto = vector(vec![0.5, 0.0, 0.5]);
        assert!(islr(&auto, &[], LagInterval { half_width: 0 }).is_err());
    }
}
