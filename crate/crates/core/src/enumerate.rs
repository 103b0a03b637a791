//! Exhaustive generation and uniform random sampling of layer structures.
//!
//! Structures enumerate in a fixed, reproducible order: compositions by
//! layer count then lexicographically, variable subsets in colex order
//! per layer, signs as a binary counter (first factor of the first layer
//! at bit 0), and the outer constant innermost. Since structures biject
//! with nested canalyzing functions, the stream also enumerates those.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::canalyze::LayerStructure;
use crate::error::FormulaError;
use crate::formulas::Composition;

/// Lazy stream of the compositions of n (last part >= 2), grouped by
/// ascending layer count and lexicographic within each count; 2^{n-2} in
/// total.
pub struct Compositions {
    n: u32,
    fixed_r: Option<u32>,
    parts: Option<Vec<u32>>,
}

/// All compositions of n. Errors for n < 2.
pub fn compositions(n: u32) -> Result<Compositions, FormulaError> {
    if n < 2 {
        return Err(FormulaError::VarCountOutOfRange { n, min: 2, max: u32::MAX });
    }
    Ok(Compositions { n, fixed_r: None, parts: Some(first_composition(n, 1)) })
}

/// The compositions of n with exactly r parts, lexicographic.
pub fn compositions_with_layers(n: u32, r: u32) -> Result<Compositions, FormulaError> {
    if n < 2 {
        return Err(FormulaError::VarCountOutOfRange { n, min: 2, max: u32::MAX });
    }
    if r < 1 || r > n - 1 {
        return Err(FormulaError::LayerCountOutOfRange { r, n, max: n - 1 });
    }
    Ok(Compositions { n, fixed_r: Some(r), parts: Some(first_composition(n, r)) })
}

/// Lexicographically first r-part composition: (1, ..., 1, n - r + 1).
fn first_composition(n: u32, r: u32) -> Vec<u32> {
    let mut parts = vec![1u32; r as usize - 1];
    parts.push(n - r + 1);
    parts
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let parts = self.parts.take()?;
        let item = Composition::new(self.n, parts.clone()).expect("iterator emits valid compositions");
        self.parts = self.advance(parts);
        Some(item)
    }
}

impl Compositions {
    /// Lexicographic successor within the same layer count, else the first
    /// composition of the next count.
    fn advance(&self, mut parts: Vec<u32>) -> Option<Vec<u32>> {
        let r = parts.len();
        // Increment the rightmost non-last part that leaves the tail
        // enough room (1 per middle part, 2 for the last).
        for j in (0..r.saturating_sub(1)).rev() {
            parts[j] += 1;
            let used: u32 = parts[..=j].iter().sum();
            let needed = (r - 2 - j) as u32 + 2;
            if used + needed <= self.n {
                for p in parts.iter_mut().take(r - 1).skip(j + 1) {
                    *p = 1;
                }
                let used: u32 = parts[..r - 1].iter().sum();
                parts[r - 1] = self.n - used;
                return Some(parts);
            }
            parts[j] -= 1;
        }
        if self.fixed_r.is_none() && (r as u32) < self.n - 1 {
            return Some(first_composition(self.n, r as u32 + 1));
        }
        None
    }
}

/// k-subsets of {0..m-1} as bitmasks in colex order (ascending numeric
/// value), via Gosper's hack.
struct KSubsets {
    next: Option<u64>,
    limit: u64,
}

impl KSubsets {
    fn new(m: usize, k: usize) -> Self {
        debug_assert!(k >= 1 && k <= m);
        KSubsets { next: Some((1u64 << k) - 1), limit: 1u64 << m }
    }
}

impl Iterator for KSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let mask = self.next?;
        self.next = {
            let low = mask & mask.wrapping_neg();
            let ripple = mask + low;
            let new = ripple | (((mask ^ ripple) / low) >> 2);
            (new < self.limit).then_some(new)
        };
        Some(mask)
    }
}

/// Ordered set partitions of `vars` into blocks of the given sizes, each
/// block's subset enumerated in colex order.
fn ordered_partitions(vars: Vec<u32>, sizes: Vec<u32>) -> Box<dyn Iterator<Item = Vec<Vec<u32>>>> {
    let k = sizes[0] as usize;
    if sizes.len() == 1 {
        debug_assert_eq!(k, vars.len());
        return Box::new(std::iter::once(vec![vars]));
    }
    let rest = sizes[1..].to_vec();
    Box::new(KSubsets::new(vars.len(), k).flat_map(move |mask| {
        let mut chosen = Vec::with_capacity(k);
        let mut remaining = Vec::with_capacity(vars.len() - k);
        for (pos, &v) in vars.iter().enumerate() {
            if mask >> pos & 1 == 1 {
                chosen.push(v);
            } else {
                remaining.push(v);
            }
        }
        ordered_partitions(remaining, rest.clone()).map(move |mut tail| {
            let mut layers = Vec::with_capacity(tail.len() + 1);
            layers.push(chosen.clone());
            layers.append(&mut tail);
            layers
        })
    }))
}

fn build_structure(n: u32, layer_vars: &[Vec<u32>], signs: u64, b: bool) -> LayerStructure {
    let mut bit = 0;
    let layers = layer_vars
        .iter()
        .map(|vars| {
            vars.iter()
                .map(|&v| {
                    let s = signs >> bit & 1 == 1;
                    bit += 1;
                    (v, s)
                })
                .collect()
        })
        .collect();
    LayerStructure::new(n, layers, b).expect("enumerated structures are valid")
}

/// Single-consumer stream of layer structures; see the module docs for
/// the emission order.
pub struct StructureIterator {
    inner: Box<dyn Iterator<Item = LayerStructure>>,
}

impl Iterator for StructureIterator {
    type Item = LayerStructure;

    fn next(&mut self) -> Option<LayerStructure> {
        self.inner.next()
    }
}

/// Every valid n-variable layer structure exactly once (restricted to
/// layer count r when given). The reconstructed truth tables are pairwise
/// distinct.
pub fn enumerate_ncf(n: u32, r: Option<u32>) -> Result<StructureIterator, FormulaError> {
    let comps = match r {
        Some(r) => compositions_with_layers(n, r)?,
        None => compositions(n)?,
    };
    let inner = comps.flat_map(move |comp| {
        let sizes = comp.parts().to_vec();
        ordered_partitions((1..=n).collect(), sizes).flat_map(move |layer_vars| {
            (0..1u64 << n).flat_map(move |signs| {
                let layer_vars = layer_vars.clone();
                [false, true]
                    .into_iter()
                    .map(move |b| build_structure(n, &layer_vars, signs, b))
            })
        })
    });
    Ok(StructureIterator { inner: Box::new(inner) })
}

/// Exact uniform sampler over all n-variable layer structures (hence,
/// by uniqueness of the normal form, over all NCFs).
///
/// Layer sizes are drawn with probability proportional to the number of
/// structures they carry, which reduces to the multinomial coefficient;
/// the variable partition, signs and outer constant are then uniform.
/// Randomness comes from ChaCha20 seeded with a caller-provided value, so
/// draws are reproducible.
pub struct NcfSampler {
    n: u32,
    rng: ChaCha20Rng,
    /// weighted_counts[m]: multinomial-weighted number of compositions
    /// of m (1 for m = 0 as the recursion base).
    weighted_counts: Vec<BigUint>,
    binomials: Vec<Vec<BigUint>>,
}

impl NcfSampler {
    pub fn new(n: u32, seed: u64) -> Result<Self, FormulaError> {
        if n < 2 {
            return Err(FormulaError::VarCountOutOfRange { n, min: 2, max: u32::MAX });
        }
        let mut binomials: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u32)]];
        for m in 1..=n as usize {
            let prev = &binomials[m - 1];
            let mut row = vec![BigUint::from(1u32)];
            for k in 1..m {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigUint::from(1u32));
            binomials.push(row);
        }
        let mut weighted_counts = vec![BigUint::from(1u32), BigUint::zero()];
        for m in 2..=n as usize {
            let mut acc = BigUint::zero();
            for k in 1..=m {
                acc += &binomials[m][k] * &weighted_counts[m - k];
            }
            weighted_counts.push(acc);
        }
        Ok(NcfSampler { n, rng: ChaCha20Rng::seed_from_u64(seed), weighted_counts, binomials })
    }

    /// Draw one structure, uniform over all of them.
    pub fn sample(&mut self) -> LayerStructure {
        let mut remaining: Vec<u32> = (1..=self.n).collect();
        let mut layers: Vec<Vec<(u32, bool)>> = Vec::new();
        while !remaining.is_empty() {
            let m = remaining.len();
            let mut ticket = self.uniform_below(&self.weighted_counts[m].clone());
            let mut size = m;
            for k in 1..=m {
                let slots = &self.binomials[m][k] * &self.weighted_counts[m - k];
                if ticket < slots {
                    size = k;
                    break;
                }
                ticket -= slots;
            }
            let mut picked: Vec<usize> = rand::seq::index::sample(&mut self.rng, m, size).into_vec();
            picked.sort_unstable();
            let mut layer = Vec::with_capacity(size);
            for &pos in picked.iter().rev() {
                let var = remaining.remove(pos);
                layer.push((var, self.rng.random::<bool>()));
            }
            layer.reverse();
            layers.push(layer);
        }
        let b = self.rng.random::<bool>();
        LayerStructure::new(self.n, layers, b).expect("sampled structures are valid")
    }

    /// Uniform big integer in [0, bound) by rejection on the top bits.
    fn uniform_below(&mut self, bound: &BigUint) -> BigUint {
        debug_assert!(!bound.is_zero());
        let bits = bound.bits();
        let bytes = bits.div_ceil(8) as usize;
        let excess = (bytes as u64) * 8 - bits;
        let mut buf = vec![0u8; bytes];
        loop {
            self.rng.fill_bytes(&mut buf);
            buf[bytes - 1] &= 0xff >> excess;
            let candidate = BigUint::from_bytes_le(&buf);
            if candidate < *bound {
                return candidate;
            }
        }
    }
}

/// One uniform draw with a fresh seeded generator.
pub fn sample_ncf(n: u32, seed: u64) -> Result<LayerStructure, FormulaError> {
    Ok(NcfSampler::new(n, seed)?.sample())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canalyze::ncf_decompose;
    use crate::formulas::{count_ncf, count_ncf_total};
    use std::collections::HashSet;

    fn parts_list(n: u32) -> Vec<Vec<u32>> {
        compositions(n).unwrap().map(|c| c.parts().to_vec()).collect()
    }

    #[test]
    fn composition_streams() {
        assert_eq!(parts_list(2), vec![vec![2]]);
        assert_eq!(
            parts_list(4),
            vec![vec![4], vec![1, 3], vec![2, 2], vec![1, 1, 2]]
        );
        assert_eq!(parts_list(5).len(), 8);
        assert_eq!(
            parts_list(5),
            vec![
                vec![5],
                vec![1, 4],
                vec![2, 3],
                vec![3, 2],
                vec![1, 1, 3],
                vec![1, 2, 2],
                vec![2, 1, 2],
                vec![1, 1, 1, 2],
            ]
        );
        for n in 2..=12 {
            assert_eq!(parts_list(n).len() as u64, 1 << (n - 2), "n = {n}");
        }
        assert!(compositions(1).is_err());
    }

    #[test]
    fn composition_streams_with_fixed_layer_count() {
        let r2: Vec<_> = compositions_with_layers(5, 2).unwrap().map(|c| c.parts().to_vec()).collect();
        assert_eq!(r2, vec![vec![1, 4], vec![2, 3], vec![3, 2]]);
        assert!(compositions_with_layers(5, 5).is_err());
    }

    #[test]
    fn colex_subset_order() {
        let masks: Vec<u64> = KSubsets::new(4, 2).collect();
        assert_eq!(masks, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(KSubsets::new(3, 3).collect::<Vec<_>>(), vec![0b111]);
    }

    #[test]
    fn two_variable_stream_is_golden() {
        let all: Vec<String> = enumerate_ncf(2, None).unwrap().map(|s| s.to_string()).collect();
        assert_eq!(
            all,
            vec![
                "0 ⊕ (x1)(x2)",
                "1 ⊕ (x1)(x2)",
                "0 ⊕ (x1')(x2)",
                "1 ⊕ (x1')(x2)",
                "0 ⊕ (x1)(x2')",
                "1 ⊕ (x1)(x2')",
                "0 ⊕ (x1')(x2')",
                "1 ⊕ (x1')(x2')",
            ]
        );
    }

    #[test]
    fn stream_counts_match_the_closed_form() {
        for n in 2..=5u32 {
            let total = enumerate_ncf(n, None).unwrap().count();
            assert_eq!(BigUint::from(total), count_ncf_total(n).unwrap(), "n = {n}");
            for r in 1..n {
                let by_layers = enumerate_ncf(n, Some(r)).unwrap().count();
                assert_eq!(BigUint::from(by_layers), count_ncf(n, r).unwrap(), "n = {n}, r = {r}");
            }
        }
    }

    #[test]
    fn reconstructions_are_distinct_and_decompose_back() {
        for n in 2..=4u32 {
            let mut seen = HashSet::new();
            for s in enumerate_ncf(n, None).unwrap() {
                let table = s.reconstruct();
                assert!(seen.insert(table.to_bin_str()), "duplicate table for {s}");
                let verdict = ncf_decompose(&table);
                assert_eq!(verdict.structure(), Some(&s), "round trip failed for {s}");
            }
            assert_eq!(BigUint::from(seen.len()), count_ncf_total(n).unwrap());
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let a = sample_ncf(6, 12345).unwrap();
        let b = sample_ncf(6, 12345).unwrap();
        assert_eq!(a, b);
        let c = sample_ncf(6, 12346).unwrap();
        // Overwhelmingly likely to differ; equality would mean the seed is
        // being ignored.
        assert_ne!(a, c);
    }

    #[test]
    fn sampler_hits_every_two_variable_structure_uniformly() {
        let mut sampler = NcfSampler::new(2, 7).unwrap();
        let mut counts = std::collections::HashMap::new();
        let draws = 16_000;
        for _ in 0..draws {
            *counts.entry(sampler.sample().to_string()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 8);
        // 4 sigma around 2000 for p = 1/8.
        let sigma = ((draws as f64) * (1.0 / 8.0) * (7.0 / 8.0)).sqrt();
        for (s, c) in counts {
            assert!(
                (c as f64 - 2000.0).abs() < 4.0 * sigma,
                "structure {s} drawn {c} times"
            );
        }
    }

    #[test]
    fn sampler_layer_counts_follow_the_census() {
        let mut sampler = NcfSampler::new(4, 99).unwrap();
        let draws = 20_000u64;
        let mut by_r = [0u64; 4];
        for _ in 0..draws {
            by_r[sampler.sample().layer_number()] += 1;
        }
        // Expected proportions 32/736, 320/736, 384/736.
        for (r, expected_share) in [(1usize, 32.0 / 736.0), (2, 320.0 / 736.0), (3, 384.0 / 736.0)] {
            let expected = draws as f64 * expected_share;
            let sigma = (draws as f64 * expected_share * (1.0 - expected_share)).sqrt();
            assert!(
                (by_r[r] as f64 - expected).abs() < 4.0 * sigma,
                "layer count {r}: {} draws, expected {expected:.0}",
                by_r[r]
            );
        }
    }
}
