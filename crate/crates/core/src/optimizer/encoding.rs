//! Random-key encoding between real position vectors and permutation sets.

use crate::error::{Error, Result};
use crate::waveform::CodingSequence;

/// Ranks of one key block: `out[i]` is the ascending rank of `keys[i]`, ties broken by
/// lower index first.
pub fn rank_keys(keys: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    // total_cmp keeps the ordering total even for NaN; the sort is stable.
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]));
    let mut ranks = vec![0; keys.len()];
    for (rank, idx) in order.into_iter().enumerate() {
        ranks[idx] = rank;
    }
    ranks
}

/// Decodes a position of length `L·N` into `L` permutations of `0..N`, one per block.
pub fn decode_position(
    position: &[f64],
    n_subpulses: usize,
    n_waveforms: usize,
) -> Result<Vec<CodingSequence>> {
    let expected = n_subpulses * n_waveforms;
    if position.len() != expected || n_subpulses == 0 {
        return Err(Error::LengthMismatch {
            expected,
            actual: position.len(),
        });
    }
    Ok(position
        .chunks_exact(n_subpulses)
        .map(|block| CodingSequence::from_trusted(rank_keys(block)))
        .collect())
}

/// A position inside `[lo, hi]` that decodes back to `set`.
pub fn encode_sequences(set: &[CodingSequence], lo: f64, hi: f64) -> Vec<f64> {
    set.iter()
        .flat_map(|seq| {
            let n = seq.len() as f64;
            seq.codes()
                .iter()
                .map(move |&c| lo + (hi - lo) * (c as f64 + 0.5) / n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascending_keys_decode_to_identity() {
        let s = decode_position(&[0.1, 0.5, 0.9, 1.3], 4, 1).unwrap();
        assert_eq!(s[0].codes(), &[0, 1, 2, 3]);
    }

    #[test]
    fn descending_keys_decode_to_reversal() {
        let s = decode_position(&[4.0, 3.0, 2.0, 1.0], 4, 1).unwrap();
        assert_eq!(s[0].codes(), &[3, 2, 1, 0]);
    }

    #[test]
    fn ties_break_by_lower_index() {
        let s = decode_position(&[0.5, 0.5, 0.1, 0.9], 4, 1).unwrap();
        assert_eq!(s[0].codes(), &[1, 2, 0, 3]);
    }

    #[test]
    fn blocks_decode_independently() {
        let s = decode_position(&[0.3, 0.1, 0.2, 9.0, 8.0, 7.0], 3, 2).unwrap();
        assert_eq!(s[0].codes(), &[2, 0, 1]);
        assert_eq!(s[1].codes(), &[2, 1, 0]);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(matches!(
            decode_position(&[0.0; 5], 4, 1),
            Err(Error::LengthMismatch { expected: 4, actual: 5 })
        ));
    }

    #[test]
    fn encode_round_trips() {
        let set = vec![
            CodingSequence::new(vec![2, 0, 3, 1]).unwrap(),
            CodingSequence::new(vec![1, 3, 0, 2]).unwrap(),
        ];
        let pos = encode_sequences(&set, 0.0, 1.0);
        assert!(pos.iter().all(|&x| (0.0..=1.0).contains(&x)));
        assert_eq!(decode_position(&pos, 4, 2).unwrap(), set);
    }
}
