//! Minimal deterministic random number generator.
//!
//! Grammar generators and test corpora must reproduce bit-for-bit across
//! platforms and crate versions, so this module pins the exact algorithm
//! (SplitMix64) instead of borrowing a generator whose stream may change
//! under a dependency upgrade.

/// SplitMix64 stream seeded with a fixed 64-bit value.
///
/// Passes through the full 2^64 state cycle; streams from distinct seeds are
/// independent enough for input generation, which is all this crate needs.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` via rejection sampling, so the result is
    /// unbiased and identical on every platform. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0) has no valid output");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}
