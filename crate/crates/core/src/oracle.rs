//! Brute-force ground truth for property tests.
//!
//! Everything here recomputes its quantity from first principles with
//! plain loops over function values — no bit tricks, no code shared with
//! the decomposition or formula paths — so agreement between the two
//! routes is meaningful evidence.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::canalyze::{ncf_decompose, DecomposeVerdict};
use crate::dyadic::Dyadic;
use crate::table::TruthTable;

/// Per-variable activities of one function, each in [0, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityVector {
    pub n: u32,
    pub activities: Vec<Dyadic>,
}

/// Pointwise sensitivities s(x) for all 2^n inputs plus their exact mean.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivityProfile {
    pub pointwise: Vec<u32>,
    pub average: Dyadic,
}

/// Activity of x_var: the fraction of the (n-1)-cube on which the two
/// cofactors of x_var differ, counted pair by pair.
pub fn activity_bruteforce(f: &TruthTable, var: u32) -> Dyadic {
    let n = f.n();
    assert!(var >= 1 && var <= n, "variable x{var} out of range 1..={n}");
    let low_mask = (1u64 << (var - 1)) - 1;
    let mut count = 0u64;
    for rest in 0..1u64 << (n - 1) {
        let t0 = ((rest & !low_mask) << 1) | (rest & low_mask);
        let t1 = t0 | (1 << (var - 1));
        if f.bit(t0) != f.bit(t1) {
            count += 1;
        }
    }
    Dyadic::new(count, n - 1)
}

/// All activities of f.
pub fn activity_vector(f: &TruthTable) -> ActivityVector {
    ActivityVector {
        n: f.n(),
        activities: (1..=f.n()).map(|v| activity_bruteforce(f, v)).collect(),
    }
}

/// Sensitivity at every point: the number of Hamming neighbors with a
/// different value, found by flipping one coordinate at a time.
pub fn sensitivity_profile(f: &TruthTable) -> SensitivityProfile {
    let n = f.n();
    let mut pointwise = Vec::with_capacity(f.size() as usize);
    let mut total = 0u64;
    for t in 0..f.size() {
        let mut s = 0u32;
        for var in 0..n {
            if f.bit(t) != f.bit(t ^ (1 << var)) {
                s += 1;
            }
        }
        pointwise.push(s);
        total += s as u64;
    }
    SensitivityProfile { pointwise, average: Dyadic::new(total, n) }
}

/// Definition-based nested-canalyzation test: some variable has a
/// constant cofactor, and the complementary cofactor is again nested
/// canalyzing, down to a final nonconstant single variable. Inessential
/// variables fail the recursion on their own.
///
/// Exponential; panics for n > 8.
pub fn is_ncf_by_definition(f: &TruthTable) -> bool {
    assert!(f.n() <= 8, "definition-based test is limited to n <= 8");
    let bits: Vec<bool> = (0..f.size()).map(|t| f.bit(t)).collect();
    let mut memo: HashMap<Vec<bool>, bool> = HashMap::new();
    is_ncf_rec(&bits, &mut memo)
}

fn is_ncf_rec(bits: &[bool], memo: &mut HashMap<Vec<bool>, bool>) -> bool {
    let n = bits.len().trailing_zeros();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return bits[0] != bits[1];
    }
    if let Some(&known) = memo.get(bits) {
        return known;
    }
    let constant = bits.iter().all(|&b| b == bits[0]);
    let mut answer = false;
    if !constant {
        'search: for var in 1..=n {
            for input in [false, true] {
                let fixed = cofactor(bits, var, input);
                if fixed.iter().all(|&b| b == fixed[0]) {
                    let rest = cofactor(bits, var, !input);
                    if is_ncf_rec(&rest, memo) {
                        answer = true;
                        break 'search;
                    }
                }
            }
        }
    }
    memo.insert(bits.to_vec(), answer);
    answer
}

/// Cofactor over plain bool vectors, written out index by index.
fn cofactor(bits: &[bool], var: u32, value: bool) -> Vec<bool> {
    let half = bits.len() / 2;
    let mut out = Vec::with_capacity(half);
    for t in 0..half {
        let low = t % (1 << (var - 1));
        let high = t - low;
        let full = high * 2 + ((value as usize) << (var - 1)) + low;
        out.push(bits[full]);
    }
    out
}

/// Exhaustive census of all 2^{2^n} functions by decomposition verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub n: u32,
    /// NCF counts keyed by layer number (degenerate structures excluded).
    pub per_layer: BTreeMap<usize, u64>,
    /// Degenerate single-variable structures (only possible at n = 1).
    pub degenerate: u64,
    pub not_ncf: u64,
}

impl Census {
    pub fn total_ncf(&self) -> u64 {
        self.per_layer.values().sum::<u64>() + self.degenerate
    }

    /// CSV form: a `layer_number,count` header, one row per layer number,
    /// then the `not_ncf` row (and a `degenerate` row when nonzero).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("layer_number,count\n");
        for (r, count) in &self.per_layer {
            out.push_str(&format!("{r},{count}\n"));
        }
        if self.degenerate > 0 {
            out.push_str(&format!("degenerate,{}\n", self.degenerate));
        }
        out.push_str(&format!("not_ncf,{}\n", self.not_ncf));
        out
    }
}

/// Decompose every n-variable function and tally the verdicts.
/// Exhaustive over 2^{2^n} tables; panics for n > 4.
pub fn classify_all(n: u32) -> Census {
    assert!(n <= 4, "exhaustive census is limited to n <= 4");
    let total: u64 = 1 << (1u64 << n);
    let census = (0..total)
        .into_par_iter()
        .fold(
            || Census { n, per_layer: BTreeMap::new(), degenerate: 0, not_ncf: 0 },
            |mut acc, func_bits| {
                let f = TruthTable::from_fn(n, |t| func_bits >> t & 1 == 1)
                    .expect("n <= 4 is far below the cap");
                match ncf_decompose(&f) {
                    DecomposeVerdict::Ncf(s) if s.is_degenerate() => acc.degenerate += 1,
                    DecomposeVerdict::Ncf(s) => {
                        *acc.per_layer.entry(s.layer_number()).or_insert(0) += 1;
                    }
                    DecomposeVerdict::NotNcf(_) => acc.not_ncf += 1,
                }
                acc
            },
        )
        .reduce(
            || Census { n, per_layer: BTreeMap::new(), degenerate: 0, not_ncf: 0 },
            |mut a, b| {
                for (r, count) in b.per_layer {
                    *a.per_layer.entry(r).or_insert(0) += count;
                }
                a.degenerate += b.degenerate;
                a.not_ncf += b.not_ncf;
                a
            },
        );
    census
}
