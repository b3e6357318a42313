//! Helpers shared by the unit tests of several modules.

use crate::rng::SplitMix64;
use crate::slp::{Rule, Slp};

/// Seven-rule grammar for `aababaababaab`, handy because every table it
/// produces is small enough to check by eye.
pub(crate) fn worked_example() -> Slp {
    Slp::new(vec![
        Rule::Terminal(b'a'),
        Rule::Terminal(b'b'),
        Rule::Pair(0, 1),
        Rule::Pair(0, 2),
        Rule::Pair(2, 3),
        Rule::Pair(3, 4),
        Rule::Pair(5, 4),
    ])
    .unwrap()
}

/// Deterministic byte string over the first `alphabet` letters.
pub(crate) fn random_bytes(seed: u64, len: usize, alphabet: u64) -> Vec<u8> {
    let mut rng = SplitMix64::new(seed);
    (0..len).map(|_| b'a' + rng.below(alphabet) as u8).collect()
}
