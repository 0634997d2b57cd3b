//! Resource bounds shared by the set, search and oracle computations.

use std::env;

pub const ORACLE_BOUND_ENV: &str = "GRAPHCODE_ORACLE_BOUND";
pub const THREADS_ENV: &str = "GRAPHCODE_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `p^n` for which dense states are built for an exhaustive oracle sweep.
    pub oracle_amplitudes: u128,
    /// Largest `p^n` for which membership bitmaps over `Z_p^n` are allocated.
    pub set_vectors: u128,
    /// Largest additive closure enumerated during classification.
    pub closure_size: u128,
    /// Largest super graph vertex count.
    pub super_graph_vertices: usize,
    /// Largest number of errors in an exhaustive oracle sweep.
    pub oracle_errors: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            oracle_amplitudes: 1 << 15,
            set_vectors: 1 << 24,
            closure_size: 1 << 22,
            super_graph_vertices: 1 << 15,
            oracle_errors: 1 << 28,
        }
    }
}

impl Limits {
    /// Defaults with the oracle bound taken from `GRAPHCODE_ORACLE_BOUND` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(bound) = env::var(ORACLE_BOUND_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            limits.oracle_amplitudes = bound;
        }
        limits
    }

    pub fn with_oracle_amplitudes(mut self, bound: u128) -> Self {
        self.oracle_amplitudes = bound;
        self
    }
}

/// Thread cap from `GRAPHCODE_THREADS`, if set to a positive integer.
pub fn thread_cap_from_env() -> Option<usize> {
    env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n > 0)
}
