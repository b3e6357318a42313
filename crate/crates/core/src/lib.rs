//! Counting q-gram occurrences directly on grammar-compressed strings.
//!
//! A straight-line program ([`Slp`]) derives one string, possibly far
//! longer than the program itself. [`count_slp`] produces the q-gram
//! occurrence table of that string in time proportional to q times the
//! program size: the grammar is reduced to a small weighted text
//! ([`build_weighted_text`]) whose weighted window counts equal the derived
//! string's q-gram counts, and the reduction is counted by hashing or by a
//! suffix-array run scan.
//!
//! The plain-text counters [`count_naive`] and [`count_sa`], the
//! [`repair_compress`] grammar compressor, and the suffix-array toolkit in
//! [`suffix`] round out the pipeline from raw bytes to compressed counting.
//! On top sit two applications: the q-gram spectrum kernel
//! ([`spectrum_kernel_slp`]) and discriminative q-gram discovery
//! ([`discover_optimal_qgram`]).

pub mod apps;
pub mod error;
pub mod qgram;
pub mod repair;
pub mod rng;
pub mod slp;
pub mod suffix;

#[cfg(test)]
pub(crate) mod testutil;

pub use apps::{
    all_lengths_frequencies, discover_optimal_qgram, score_chi_square,
    score_support_difference, spectrum_kernel_plain, spectrum_kernel_slp, Objective,
    ScoredPattern,
};
pub use error::{Error, Result};
pub use qgram::{
    build_weighted_text, count_naive, count_sa, count_slp, count_weighted_naive,
    count_weighted_sa, escape_qgram, materialize, unescape_qgram, Backend, FreqTable,
    PositionFreqList, WeightedText,
};
pub use repair::{binarize_sequence, repair_compress};
pub use slp::{
    bounded_affixes, fibonacci_slp, random_slp, v_occ, Rule, RuleId, RuleTables, Slp,
    MAX_TEXT_LEN,
};
pub use suffix::{build_lcp, build_suffix_array, naive_suffix_index, SuffixIndex};
