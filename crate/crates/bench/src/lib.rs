//! Deterministic fixtures shared by the benchmarks.

use ncfkit_core::enumerate::NcfSampler;
use ncfkit_core::{LayerStructure, TruthTable};

/// A pseudorandom table from a multiplicative bit mixer; deterministic,
/// no RNG dependency.
pub fn scrambled_table(n: u32, seed: u64) -> TruthTable {
    let mut state = seed | 1;
    TruthTable::from_fn(n, |_| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        state >> 63 == 1
    })
    .expect("benchmark sizes stay within the cap")
}

/// A uniformly sampled layer structure (hence a valid NCF) of size n.
pub fn sampled_structure(n: u32, seed: u64) -> LayerStructure {
    NcfSampler::new(n, seed).expect("n >= 2").sample()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(scrambled_table(10, 7), scrambled_table(10, 7));
        assert_eq!(sampled_structure(12, 3), sampled_structure(12, 3));
    }
}
