//! Shared fixtures for the benchmarks.

use qlimit_core::qalgebra::parse_pattern;
use qlimit_core::Word;

/// `aⁿ (a†)ⁿ`, the word with the most pairings (`n!`) at its length.
pub fn block_word(n: usize) -> Word {
    let ops: Vec<&str> = std::iter::repeat_n("a", n).chain(std::iter::repeat_n("adag", n)).collect();
    Word::from_pattern(&parse_pattern(&ops.join(" ")).expect("fixed tokens"))
}

/// `(a a†)ⁿ`, a word with a single pairing.
pub fn alternating_word(n: usize) -> Word {
    Word::from_pattern(&parse_pattern(&vec!["a adag"; n].join(" ")).expect("fixed tokens"))
}
