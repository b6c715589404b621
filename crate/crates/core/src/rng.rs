//! Counter-based 64-bit generator for reproducible sampling.
//!
//! Every sampling entry point takes an explicit seed, and the stream for
//! a given seed is fixed by this implementation (splitmix64: the state is
//! a counter advanced by the golden-ratio increment, the output a bit mix
//! of the counter), so identical seeds give identical draws on every
//! platform.

#[derive(Clone, Debug)]
pub struct CounterRng {
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { counter: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.counter;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in the open interval (0, 1).
    pub fn next_unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}
