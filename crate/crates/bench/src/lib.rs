//! Shared inputs for the counting benchmarks: each builder returns a
//! grammar together with the text it derives, so every strategy is timed
//! against the same string.

use slpgram::{fibonacci_slp, repair_compress, Slp};

/// The i-th Fibonacci string and its i-rule grammar, the best case for
/// grammar compression.
pub fn fibonacci_input(i: usize) -> (Slp, Vec<u8>) {
    let slp = fibonacci_slp(i).expect("index below the overflow point");
    let text = slp.expand(u64::MAX).expect("fits in memory");
    (slp, text)
}

/// A repetitive but non-trivial text: a 64-byte pattern tiled `reps`
/// times, compressed by the pairing compressor.
pub fn periodic_input(reps: usize) -> (Slp, Vec<u8>) {
    let pattern = b"the quick brown fox jumps over the lazy dog 0123456789 #@!%&*+\r\n";
    assert_eq!(pattern.len(), 64);
    let text: Vec<u8> = pattern.iter().copied().cycle().take(64 * reps).collect();
    (repair_compress(&text), text)
}
