//! Random-key encoding: real-valued positions decode to permutations by ascending rank.

use dfcw::optimizer::{encode_sequences, rank_keys};
use dfcw::prelude::*;

fn main() -> dfcw::Result<()> {
    for keys in [[0.1, 0.5, 0.9, 1.3], [4.0, 3.0, 2.0, 1.0], [0.5, 0.5, 0.1, 0.9]] {
        println!("{keys:?} -> {:?}", rank_keys(&keys));
    }

    let set = random_coding_set(6, 2, 3)?;
    let position = encode_sequences(&set, 0.0, 1.0);
    let decoded = decode_position(&position, 6, 2)?;
    println!("encoded {position:.3?}");
    for (a, b) in set.iter().zip(&decoded) {
        println!("[{a}] -> [{b}]");
    }
    assert_eq!(set, decoded);
    Ok(())
}
