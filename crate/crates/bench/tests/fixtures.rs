use qlimit_bench::{alternating_word, block_word};
use qlimit_core::{enumerate_pairings, noncrossing_match};

#[test]
fn block_words_maximize_pairings() {
    let mut fact = 1;
    for n in 1..=5 {
        fact *= n;
        let w = block_word(n);
        assert_eq!(w.len(), 2 * n);
        assert_eq!(enumerate_pairings(&w).len(), fact);
    }
}

#[test]
fn alternating_words_have_one_pairing() {
    for n in 1..=6 {
        let w = alternating_word(n);
        let pairings = enumerate_pairings(&w);
        assert_eq!(pairings.len(), 1);
        assert_eq!(noncrossing_match(&w).as_ref(), pairings.first());
    }
}
