//! Seeded pseudo-random generator with documented, portable output.
//!
//! The generator is SplitMix64:
//!
//! ```text
//! state <- state + 0x9E3779B97F4A7C15          (wrapping)
//! z <- state
//! z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9    (wrapping)
//! z <- (z ^ (z >> 27)) * 0x94D049BB133111EB    (wrapping)
//! output z ^ (z >> 31)
//! ```
//!
//! The last three lines are the mixing function `mix64`. Trial `i` of a run
//! with master seed `s` draws from a generator whose initial state is
//! `mix64(s ^ mix64(i + 0x9E3779B97F4A7C15))`. Bounded draws use rejection:
//! with `limit = 2^64 - 1 - ((2^64 - 1) mod b)`, redraw while `z >= limit`,
//! then return `z mod b`.

use crate::ff::Field;
use crate::matrix::MatrixF;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Initial state of the generator used by trial `index` under `master`.
pub fn stream_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index.wrapping_add(GOLDEN)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Generator for trial `index` of a run seeded with `master`.
    pub fn for_trial(master: u64, index: u64) -> Self {
        Self::new(stream_seed(master, index))
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform value in `0..bound`. Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let limit = u64::MAX - u64::MAX % bound;
        loop {
            let z = self.next_u64();
            if z < limit {
                return z % bound;
            }
        }
    }

    /// Uniform value in `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn scalar(&mut self, field: Field) -> u8 {
        self.below(field.order() as u64) as u8
    }

    pub fn nonzero_scalar(&mut self, field: Field) -> u8 {
        1 + self.below(field.order() as u64 - 1) as u8
    }

    /// Uniform matrix, entries drawn row by row.
    pub fn matrix(&mut self, field: Field, rows: usize, cols: usize) -> MatrixF {
        let data = (0..rows * cols).map(|_| self.scalar(field)).collect();
        MatrixF::new(field, rows, cols, data).expect("entries are canonical")
    }
}
