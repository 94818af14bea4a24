//! Seeded portable random numbers for reproducible initial data.
//!
//! A 64-bit linear congruential generator with Knuth's MMIX constants,
//!
//! ```text
//! state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//! ```
//!
//! advanced once per draw.  A uniform in [0, 1) takes the top 53 bits of the
//! new state: `(state >> 11) * 2^-53`.  The full recurrence is spelled out so
//! the stream can be reproduced in any language with 64-bit integers; nothing
//! here depends on platform word size or library RNGs.

const MULT: u64 = 6364136223846793005;
const INC: u64 = 1442695040888963407;

/// Deterministic 64-bit LCG; identical seeds give identical streams.
#[derive(Clone, Debug)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    /// Next raw 64-bit state.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULT).wrapping_add(INC);
        self.state
    }

    /// Uniform draw in [0, 1) with 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in [-1, 1).
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }
}
