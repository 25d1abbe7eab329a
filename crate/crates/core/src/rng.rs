//! Seeded random stream used by every randomized generator.
//!
//! The stream is the splitmix64 sequence. All generators document their draw
//! order in terms of the primitives below, so identical seeds reproduce
//! identical outputs bit-for-bit on every platform.

/// splitmix64 stream. The seed is the initial state; each call to
/// [`SplitMix64::next_u64`] advances the state by the golden-gamma constant
/// and returns the mixed value.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform double in [0, 1), using the top 53 bits of the next draw.
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in [0, bound) as `floor(next_uniform() * bound)`.
    ///
    /// This is the draw primitive every generator uses to pick from a finite
    /// list; `bound` must be positive and small enough that the product is
    /// exact (all uses here are far below 2^32).
    pub fn next_index(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        let idx = (self.next_uniform() * bound as f64) as usize;
        // floor(u * bound) < bound holds for u < 1, but guard anyway.
        idx.min(bound - 1)
    }

    /// In-place Fisher–Yates shuffle; position i (from the end, i = len-1
    /// down to 1) is swapped with `next_index(i + 1)`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_index(i + 1);
            items.swap(i, j);
        }
    }
}
