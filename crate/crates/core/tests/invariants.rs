//! Cross-module invariants: representation round trips, decomposition
//! uniqueness and completeness against the brute-force oracle, the
//! restriction property of the normal form, and the activity/sensitivity
//! identities.

use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use ncfkit_core::canalyze::{ncf_decompose, DecomposeVerdict, LayerStructure};
use ncfkit_core::dyadic::Dyadic;
use ncfkit_core::enumerate::{enumerate_ncf, NcfSampler};
use ncfkit_core::formulas::count_ncf_total;
use ncfkit_core::oracle::{activity_bruteforce, is_ncf_by_definition, sensitivity_profile};
use ncfkit_core::table::TruthTable;
use ncfkit_core::AnfPoly;

fn random_table(rng: &mut ChaCha20Rng, n: u32) -> TruthTable {
    TruthTable::from_fn(n, |_| rng.random::<bool>()).unwrap()
}

#[test]
fn anf_table_round_trip_bulk() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x0106);
    for i in 0..10_000u32 {
        let n = i % 13;
        let f = random_table(&mut rng, n);
        let p = AnfPoly::from_truth_table(&f);
        assert_eq!(p.truth_table(), f, "round trip failed at n = {n}, iteration {i}");
    }
}

#[test]
fn decomposition_is_unique_small_exhaustive() {
    // Every structure reconstructs to a function that decomposes back to
    // exactly that structure (n = 5 runs in the acceptance suite).
    for n in 2..=4u32 {
        let mut tables = HashSet::new();
        let mut count = 0u64;
        for s in enumerate_ncf(n, None).unwrap() {
            let f = s.reconstruct();
            assert_eq!(ncf_decompose(&f), DecomposeVerdict::Ncf(s.clone()), "at {s}");
            assert!(tables.insert(f.to_bin_str()));
            count += 1;
        }
        assert_eq!(BigUint::from(count), count_ncf_total(n).unwrap());
    }
}

#[test]
fn six_variable_stream_counts_match_the_closed_form() {
    // Sizes up to 5 are counted (and reconstructed) in the unit and
    // acceptance suites; here only the n = 6 stream cardinalities.
    use ncfkit_core::formulas::count_ncf;
    let mut total = 0u64;
    for r in 1..6u32 {
        let count = enumerate_ncf(6, Some(r)).unwrap().count() as u64;
        assert_eq!(BigUint::from(count), count_ncf(6, r).unwrap(), "r = {r}");
        total += count;
    }
    assert_eq!(BigUint::from(total), count_ncf_total(6).unwrap());
}

#[test]
fn decomposer_matches_definition_on_random_functions() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x0ac1e);
    for n in [5u32, 6] {
        for _ in 0..10_000 {
            let f = random_table(&mut rng, n);
            assert_eq!(
                ncf_decompose(&f).is_ncf_nondegenerate(),
                is_ncf_by_definition(&f),
                "disagreement at n = {n} on {f:?}"
            );
        }
        // Random tables are almost never nested canalyzing, so drive the
        // positive branch with sampled structures and light mutations.
        let mut sampler = NcfSampler::new(n, 0xd15c0).unwrap();
        for _ in 0..1_000 {
            let f = sampler.sample().reconstruct();
            assert!(is_ncf_by_definition(&f));
            assert!(ncf_decompose(&f).is_ncf_nondegenerate());
            let flipped =
                TruthTable::from_fn(n, |t| f.bit(t) ^ (t == rng.random_range(0..f.size()))).unwrap();
            assert_eq!(
                ncf_decompose(&flipped).is_ncf_nondegenerate(),
                is_ncf_by_definition(&flipped)
            );
        }
    }
}

#[test]
fn every_variable_of_an_ncf_is_essential() {
    let mut sampler = NcfSampler::new(7, 7777).unwrap();
    for _ in 0..200 {
        let f = sampler.sample().reconstruct();
        assert_eq!(f.essential_variables().len(), 7);
    }
}

/// Restricting a first-layer variable at the complement of its canalyzing
/// input deletes that factor; when the layer had only that factor, the
/// layer disappears and the outer constant flips.
#[test]
fn first_layer_restriction_peels_one_factor() {
    let structures: Vec<LayerStructure> = (2..=4u32)
        .flat_map(|n| enumerate_ncf(n, None).unwrap())
        .chain((0..500).map(|i| NcfSampler::new(6, i).unwrap().sample()))
        .collect();
    for s in structures {
        let f = s.reconstruct();
        let first = &s.layers()[0];
        for factor in first.factors() {
            let restricted = f.restrict(factor.var, !factor.sign);
            let renumber = |v: u32| if v > factor.var { v - 1 } else { v };
            let mut layers: Vec<Vec<(u32, bool)>> = s
                .layers()
                .iter()
                .map(|m| {
                    m.factors()
                        .iter()
                        .filter(|f| f.var != factor.var)
                        .map(|f| (renumber(f.var), f.sign))
                        .collect()
                })
                .collect();
            let mut b = if layers[0].is_empty() {
                layers.remove(0);
                !s.b()
            } else {
                s.b()
            };
            if s.n() == 2 {
                // One variable left: (x ⊕ a) ⊕ b and x ⊕ (a ⊕ b) are the
                // same function, and the decomposer reports the sign-0
                // form of the degenerate structure.
                b ^= layers[0][0].1;
                layers[0][0].1 = false;
            }
            let expected = LayerStructure::new(s.n() - 1, layers, b).unwrap();
            assert_eq!(
                ncf_decompose(&restricted),
                DecomposeVerdict::Ncf(expected),
                "restriction of {s} at x{}",
                factor.var
            );
        }
    }
}

#[test]
fn profile_average_equals_activity_sum() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x5e71);
    for n in 1..=10u32 {
        for _ in 0..100 {
            let f = random_table(&mut rng, n);
            let profile = sensitivity_profile(&f);
            let mut total = Dyadic::zero();
            for var in 1..=n {
                total = &total + &activity_bruteforce(&f, var);
            }
            assert_eq!(profile.average, total, "n = {n}");
        }
    }
}

#[test]
fn canalyzing_functions_are_biased() {
    // Exhaustive for 2 <= n <= 4: a canalyzing variable rules out a
    // balanced table, except for the dictators x_i ⊕ c, the only
    // functions that are both.
    for n in 2..=4u32 {
        for bits in 0..1u64 << (1 << n) {
            let f = TruthTable::from_fn(n, |t| bits >> t & 1 == 1).unwrap();
            if ncfkit_core::canalyzing_triples(&f).is_empty() {
                continue;
            }
            if f.hamming_weight() == 1 << (n - 1) {
                let essential = f.essential_variables();
                assert_eq!(essential.len(), 1, "balanced canalyzing non-dictator at bits {bits:#x}");
            }
        }
    }
}

#[test]
fn structure_serializations_round_trip_exhaustively() {
    for s in enumerate_ncf(3, None).unwrap() {
        assert_eq!(s.to_string().parse::<LayerStructure>().unwrap(), s);
        assert_eq!(LayerStructure::from_json(&s.to_json()).unwrap(), s);
    }
}

proptest! {
    #[test]
    fn printed_polynomials_reparse(n in 1u32..=8, seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let masks: Vec<u32> = (0..1u32 << n).filter(|_| rng.random::<bool>()).collect();
        let p = AnfPoly::from_masks(n, masks).unwrap();
        let reparsed = AnfPoly::parse(&p.to_string(), n).unwrap();
        prop_assert_eq!(reparsed, p);
    }

    #[test]
    fn restrictions_commute_after_reindexing(seed in any::<u64>(), n in 3u32..=8) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let f = random_table(&mut rng, n);
        let i = rng.random_range(1..n);
        let j = rng.random_range(i + 1..=n);
        let (a, b) = (rng.random::<bool>(), rng.random::<bool>());
        // Restricting x_j first leaves x_i's index unchanged; the other
        // order shifts x_j down by one.
        let ij = f.restrict(j, b).restrict(i, a);
        let ji = f.restrict(i, a).restrict(j - 1, b);
        prop_assert_eq!(ij, ji);
    }

    #[test]
    fn complement_weights_sum_to_the_cube(seed in any::<u64>(), n in 0u32..=10) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let f = random_table(&mut rng, n);
        prop_assert_eq!(f.hamming_weight() + f.complement().hamming_weight(), 1u64 << n);
    }

    #[test]
    fn table_text_forms_round_trip(seed in any::<u64>(), n in 0u32..=9) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let f = random_table(&mut rng, n);
        prop_assert_eq!(TruthTable::from_bin_str(&f.to_bin_str()).unwrap(), f.clone());
        prop_assert_eq!(TruthTable::from_hex_str(&f.to_hex_str(), n).unwrap(), f);
    }
}
