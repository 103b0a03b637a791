//! Closed-form counting, weight, activity and sensitivity formulas.
//!
//! Everything here is driven by the layer-size vector of a nested
//! canalyzing function: the number of NCFs, the Hamming weight, the
//! per-layer activities and the average sensitivity are all exact
//! functions of the composition alone. Arithmetic is exact throughout —
//! big integers for counts, dyadic rationals for sensitivities.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{CompositionError, FormulaError};

/// Exact nonnegative count carrier.
pub type BigCount = BigUint;

/// A layer-size vector (k_1, ..., k_r): positive parts summing to n with
/// the last part at least 2. The single-part vector (n) is valid for any
/// n >= 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(n: u32, parts: Vec<u32>) -> Result<Self, CompositionError> {
        if n < 2 {
            return Err(CompositionError::TooFewVariables(n));
        }
        if parts.is_empty() {
            return Err(CompositionError::NoParts);
        }
        if let Some(i) = parts.iter().position(|&k| k == 0) {
            return Err(CompositionError::ZeroPart(i + 1));
        }
        let sum: u64 = parts.iter().map(|&k| k as u64).sum();
        if sum != n as u64 {
            return Err(CompositionError::WrongSum { n, sum });
        }
        let last = *parts.last().expect("nonempty");
        if last < 2 {
            return Err(CompositionError::LastPartTooSmall(last));
        }
        Ok(Composition { parts })
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of layers r.
    pub fn r(&self) -> usize {
        self.parts.len()
    }

    /// Running sums S_1..S_r (S_r = n).
    pub fn partial_sums(&self) -> Vec<u32> {
        let mut acc = 0;
        self.parts
            .iter()
            .map(|&k| {
                acc += k;
                acc
            })
            .collect()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Pascal-triangle rows 0..=n of exact binomials.
fn binomial_rows(n: u32) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n as usize + 1);
    rows.push(vec![BigUint::one()]);
    for m in 1..=n as usize {
        let prev = &rows[m - 1];
        let mut row = Vec::with_capacity(m + 1);
        row.push(BigUint::one());
        for k in 1..m {
            row.push(&prev[k - 1] + &prev[k]);
        }
        row.push(BigUint::one());
        rows.push(row);
    }
    rows
}

/// w[m] = sum of multinomial(m; k_1..k_r) over all layer-size vectors of
/// m, so the number of NCFs on m variables is 2^{m+1} * w[m].
fn weighted_composition_counts(n: u32) -> Vec<BigUint> {
    let binom = binomial_rows(n);
    let mut w: Vec<BigUint> = vec![BigUint::one(), BigUint::zero()];
    for m in 2..=n as usize {
        let mut acc = BigUint::zero();
        for k in 1..=m {
            acc += &binom[m][k] * &w[m - k];
        }
        w.push(acc);
    }
    w.truncate(n as usize + 1);
    w
}

fn check_n(n: u32, min: u32) -> Result<(), FormulaError> {
    if n < min {
        Err(FormulaError::VarCountOutOfRange { n, min, max: u32::MAX })
    } else {
        Ok(())
    }
}

/// Exact number of n-variable NCFs with layer number r:
/// 2^{n+1} times the sum of multinomial coefficients over all layer-size
/// vectors with exactly r parts.
pub fn count_ncf(n: u32, r: u32) -> Result<BigCount, FormulaError> {
    check_n(n, 2)?;
    if r < 1 || r > n - 1 {
        return Err(FormulaError::LayerCountOutOfRange { r, n, max: n - 1 });
    }
    let binom = binomial_rows(n);
    // by_layers[j][m]: multinomial-weighted count of j-part vectors of m.
    let mut prev: Vec<BigUint> = (0..=n).map(|m| if m >= 2 { BigUint::one() } else { BigUint::zero() }).collect();
    for _ in 2..=r {
        let mut next = vec![BigUint::zero(); n as usize + 1];
        for (m, slot) in next.iter_mut().enumerate() {
            let mut acc = BigUint::zero();
            for k in 1..m {
                acc += &binom[m][k] * &prev[m - k];
            }
            *slot = acc;
        }
        prev = next;
    }
    Ok((BigUint::one() << (n + 1)) * &prev[n as usize])
}

/// Exact number of n-variable NCFs over all layer numbers.
pub fn count_ncf_total(n: u32) -> Result<BigCount, FormulaError> {
    check_n(n, 2)?;
    let w = weighted_composition_counts(n);
    Ok((BigUint::one() << (n + 1)) * &w[n as usize])
}

/// The same count through the nonlinear recurrence
/// a_2 = 8, a_n = sum_{r=2}^{n-1} C(n, r-1) 2^{r-1} a_{n-r+1} + 2^{n+1}.
/// Always equals [`count_ncf_total`]; kept as an independent route.
pub fn count_recursive(n: u32) -> Result<BigCount, FormulaError> {
    check_n(n, 2)?;
    let binom = binomial_rows(n);
    let mut a: Vec<BigUint> = vec![BigUint::zero(); n as usize + 1];
    if n as usize >= 2 {
        a[2] = BigUint::from(8u32);
    }
    for m in 3..=n as usize {
        let mut acc = BigUint::one() << (m + 1);
        for r in 2..m {
            acc += &binom[m][r - 1] * (BigUint::one() << (r - 1)) * &a[m - r + 1];
        }
        a[m] = acc;
    }
    Ok(a[n as usize].clone())
}

/// Number of layer-size vectors of n: 2^{n-2}.
pub fn composition_count(n: u32) -> Result<BigCount, FormulaError> {
    check_n(n, 2)?;
    Ok(BigUint::one() << (n - 2))
}

/// Hamming weight of any NCF with this composition and outer constant 0
/// (`complemented = false`) or 1 (`complemented = true`):
///
/// ```text
/// W = sum_{j=1}^{r} (-1)^{j-1} 2^{n - S_j}          (outer constant 0)
/// W = sum_{j=0}^{r} (-1)^{j}   2^{n - S_j}, S_0 = 0  (outer constant 1)
/// ```
///
/// The weight depends only on the layer sizes, not on signs or on which
/// variables sit in which layer.
pub fn weight_from_composition(c: &Composition, complemented: bool) -> BigCount {
    let n = c.n();
    let mut acc = BigInt::zero();
    let mut sign = if complemented {
        acc += BigInt::one() << n;
        -1i32
    } else {
        1i32
    };
    for s in c.partial_sums() {
        let term = BigInt::one() << (n - s);
        if sign > 0 {
            acc += term;
        } else {
            acc -= term;
        }
        sign = -sign;
    }
    acc.to_biguint().expect("alternating weight sum is nonnegative")
}

/// Activity of each variable in layer l (1-based): the probability that
/// flipping that variable flips the function,
/// 2^{-(n-1)} * sum_{j=1}^{r-l+1} (-1)^{j-1} 2^{n - S_{j+l-1}}.
/// Identical for every variable of the layer.
pub fn activity_of_layer(c: &Composition, l: usize) -> Result<Dyadic, FormulaError> {
    let r = c.r();
    if l < 1 || l > r {
        return Err(FormulaError::LayerIndexOutOfRange { l, r });
    }
    let n = c.n();
    let sums = c.partial_sums();
    let mut num = BigInt::zero();
    for j in 1..=(r - l + 1) {
        let term = BigInt::one() << (n - sums[j + l - 2]);
        if j % 2 == 1 {
            num += term;
        } else {
            num -= term;
        }
    }
    Ok(Dyadic::new(num, n - 1))
}

/// Average sensitivity s = sum_l k_l A_l, computed by the backward
/// recurrence N_r = 1, N_l = 2^{n - S_l} - N_{l+1} (an independent route
/// from [`activity_of_layer`]). Always in the open interval (0, 2).
pub fn average_sensitivity(c: &Composition) -> Dyadic {
    let n = c.n();
    let sums = c.partial_sums();
    let mut layer_num = BigInt::one();
    let mut total = BigInt::from(*c.parts().last().expect("nonempty"));
    for l in (0..c.r() - 1).rev() {
        layer_num = (BigInt::one() << (n - sums[l])) - layer_num;
        total += BigInt::from(c.parts()[l]) * &layer_num;
    }
    Dyadic::new(total, n - 1)
}

/// Sensitivity range for n >= 3: the lower bound n / 2^{n-1} is attained
/// exactly by single-layer functions; the upper bound 2 - 1/2^{n-2} is
/// strict.
pub fn sensitivity_bounds(n: u32) -> Result<(Dyadic, Dyadic), FormulaError> {
    if n < 3 {
        return Err(FormulaError::VarCountOutOfRange { n, min: 3, max: u32::MAX });
    }
    let lower = Dyadic::new(n, n - 1);
    let upper = Dyadic::new((BigInt::one() << (n - 1)) - 1, n - 2);
    Ok((lower, upper))
}

/// The three composition families with closed-form average sensitivity
/// near the maximum. All three values coincide when n is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxFamily {
    /// (1, ..., 1, 2): the maximal layer number r = n - 1. Requires n >= 3.
    OnesTwo,
    /// (1, ..., 1, 3): r = n - 2. Requires n >= 4.
    OnesThree,
    /// (1, 2, ..., 2, 3): r = n / 2. Requires even n >= 6.
    OneTwosThree,
}

impl MaxFamily {
    /// The family's composition at size n.
    pub fn composition(self, n: u32) -> Result<Composition, FormulaError> {
        let parts = match self {
            MaxFamily::OnesTwo => {
                check_n(n, 3)?;
                let mut p = vec![1; n as usize - 2];
                p.push(2);
                p
            }
            MaxFamily::OnesThree => {
                check_n(n, 4)?;
                let mut p = vec![1; n as usize - 3];
                p.push(3);
                p
            }
            MaxFamily::OneTwosThree => {
                if n < 6 || !n.is_multiple_of(2) {
                    return Err(FormulaError::VarCountOutOfRange { n, min: 6, max: u32::MAX });
                }
                let mut p = vec![1];
                p.extend(std::iter::repeat_n(2, n as usize / 2 - 2));
                p.push(3);
                p
            }
        };
        Ok(Composition::new(n, parts)?)
    }

    /// Closed-form average sensitivity of the family:
    ///
    /// ```text
    /// OnesTwo:      4/3 - (3 + (-1)^n)     / (3 * 2^n)
    /// OnesThree:    4/3 - (9 + 5(-1)^{n-1}) / (3 * 2^n)
    /// OneTwosThree: 4/3 - 4 / (3 * 2^n)
    /// ```
    ///
    /// Each numerator is divisible by 3, so the value is exactly dyadic.
    pub fn closed_form(self, n: u32) -> Result<Dyadic, FormulaError> {
        let correction: BigInt = match self {
            MaxFamily::OnesTwo => {
                check_n(n, 3)?;
                BigInt::from(3 + if n.is_multiple_of(2) { 1 } else { -1 })
            }
            MaxFamily::OnesThree => {
                check_n(n, 4)?;
                BigInt::from(9 + 5 * if (n - 1).is_multiple_of(2) { 1 } else { -1 })
            }
            MaxFamily::OneTwosThree => {
                if n < 6 || !n.is_multiple_of(2) {
                    return Err(FormulaError::VarCountOutOfRange { n, min: 6, max: u32::MAX });
                }
                BigInt::from(4)
            }
        };
        let scaled = (BigInt::from(4) << n) - correction;
        let (num, rem) = num_integer_div_rem(scaled);
        assert!(rem.is_zero(), "family numerator must be divisible by 3");
        Ok(Dyadic::new(num, n))
    }
}

fn num_integer_div_rem(v: BigInt) -> (BigInt, BigInt) {
    let three = BigInt::from(3);
    (&v / &three, v % three)
}

/// Scan strategy actually used; the search mode covers the identical
/// composition space through an exact value-function table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanMode {
    Exhaustive,
    ValueFunction,
}

/// Largest n scanned by plain enumeration of all 2^{n-2} compositions.
pub const SCAN_EXHAUSTIVE_MAX: u32 = 30;
/// Largest supported scan size (value-function search above
/// [`SCAN_EXHAUSTIVE_MAX`]).
pub const SCAN_MAX: u32 = 40;

/// Result of maximizing the average sensitivity over every composition
/// of n.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub n: u32,
    pub max: Dyadic,
    /// Every maximizing composition, sorted by layer count then parts.
    pub argmax: Vec<Composition>,
    /// Size of the scanned composition space (2^{n-2}).
    pub compositions: BigCount,
    pub mode: ScanMode,
    /// max equals the (1,...,1,2) closed form.
    pub max_matches_ones_two: bool,
    /// (1,...,1,2) itself is among the maximizers.
    pub ones_two_in_argmax: bool,
}

impl ScanReport {
    /// Whether the scan is consistent with the maximal-layer-number
    /// conjecture at this n.
    pub fn consistent(&self) -> bool {
        self.max_matches_ones_two && self.ones_two_in_argmax
    }
}

/// Decode a cut mask (bit j set = cut after position j+1) into a
/// composition of n. Masks range over [0, 2^{n-2}).
fn composition_from_mask(n: u32, mask: u64) -> Composition {
    let mut parts = Vec::new();
    let mut prev = 0u32;
    for pos in 1..n - 1 {
        if mask >> (pos - 1) & 1 == 1 {
            parts.push(pos - prev);
            prev = pos;
        }
    }
    parts.push(n - prev);
    Composition::new(n, parts).expect("cut masks always decode to valid compositions")
}

/// 2^{n-1}-denominator numerator of the average sensitivity, for scan-size
/// n (fits in u64 for n <= 40). Walks layers right to left with the
/// backward recurrence N_r = 1, N_l = 2^{n - S_l} - N_{l+1}.
fn sensitivity_numerator(n: u32, mask: u64) -> u64 {
    let mut total = 0u64;
    let mut layer_num = 1u64; // N of the layer ending at `upper`
    let mut upper = n; // S of that layer
    for p in (1..=n.saturating_sub(2)).rev() {
        if mask >> (p - 1) & 1 == 1 {
            total += (upper - p) as u64 * layer_num;
            layer_num = (1u64 << (n - p)) - layer_num;
            upper = p;
        }
    }
    total + upper as u64 * layer_num
}

/// Partial scan result over a range of cut masks. Merging is associative,
/// so disjoint ranges may be scanned concurrently.
#[derive(Debug, Clone)]
pub struct ScanPartial {
    pub n: u32,
    pub max_numerator: u64,
    pub argmax_masks: Vec<u64>,
}

impl ScanPartial {
    pub fn empty(n: u32) -> Self {
        ScanPartial { n, max_numerator: 0, argmax_masks: Vec::new() }
    }

    pub fn merge(mut self, other: ScanPartial) -> Self {
        assert_eq!(self.n, other.n);
        use std::cmp::Ordering::*;
        match self.max_numerator.cmp(&other.max_numerator) {
            Less => other,
            Greater => self,
            Equal => {
                self.argmax_masks.extend(other.argmax_masks);
                self
            }
        }
    }
}

/// Scan one range of cut masks; the unit of partitionable work.
pub fn scan_range(n: u32, masks: std::ops::Range<u64>) -> ScanPartial {
    let mut best = ScanPartial::empty(n);
    for mask in masks {
        let num = sensitivity_numerator(n, mask);
        if num > best.max_numerator {
            best.max_numerator = num;
            best.argmax_masks.clear();
            best.argmax_masks.push(mask);
        } else if num == best.max_numerator {
            best.argmax_masks.push(mask);
        }
    }
    best
}

/// Maximize the average sensitivity over every composition of n, with the
/// full maximizer set. Exhaustive through n = 30; above that (to n = 40)
/// an exact value-function search covers the same space.
pub fn conjecture_scan(n: u32) -> Result<ScanReport, FormulaError> {
    if !(2..=SCAN_MAX).contains(&n) {
        return Err(FormulaError::VarCountOutOfRange { n, min: 2, max: SCAN_MAX });
    }
    let (max_numerator, mut masks_or_parts, mode) = if n <= SCAN_EXHAUSTIVE_MAX {
        let total = 1u64 << (n - 2);
        let chunk = (total / 256).max(1 << 16).min(total);
        let partial = (0..total.div_ceil(chunk))
            .into_par_iter()
            .map(|i| scan_range(n, i * chunk..((i + 1) * chunk).min(total)))
            .reduce(|| ScanPartial::empty(n), ScanPartial::merge);
        let parts: Vec<Composition> =
            partial.argmax_masks.iter().map(|&m| composition_from_mask(n, m)).collect();
        (partial.max_numerator, parts, ScanMode::Exhaustive)
    } else {
        let (max, argmax) = value_function_scan(n);
        (max, argmax, ScanMode::ValueFunction)
    };
    masks_or_parts.sort_by(|a, b| a.r().cmp(&b.r()).then_with(|| a.parts().cmp(b.parts())));

    let max = Dyadic::new(max_numerator, n - 1);
    let ones_two = if n == 2 {
        // (1,...,1,2) degenerates to the single composition (2).
        Composition::new(2, vec![2]).expect("valid")
    } else {
        MaxFamily::OnesTwo.composition(n)?
    };
    let closed = if n == 2 { average_sensitivity(&ones_two) } else { MaxFamily::OnesTwo.closed_form(n)? };
    Ok(ScanReport {
        n,
        max_matches_ones_two: max == closed,
        ones_two_in_argmax: masks_or_parts.contains(&ones_two),
        max,
        argmax: masks_or_parts,
        compositions: composition_count(n)?,
        mode,
    })
}

/// Exact maximization by dynamic programming over (cut position, pending
/// alternating weight), with backtracking to list every maximizer.
///
/// Writing D_j = k_j - D_{j-1} (D_0 = 0), the sensitivity numerator is
/// sum_j 2^{n - S_j} D_j, which makes the maximum over completions a
/// function of the last cut position and D alone.
#[allow(clippy::needless_range_loop)] // q is a cut position, not just an index
fn value_function_scan(n: u32) -> (u64, Vec<Composition>) {
    let nn = n as usize;
    let offset = nn; // d ranges over -n..=n
    const INVALID: i64 = i64::MIN;
    // value[p][d + offset] = best remaining contribution from position p.
    let mut value = vec![vec![INVALID; 2 * nn + 1]; nn];
    // |D| never exceeds the number of variables consumed so far.
    let reachable_d = |p: usize| -> std::ops::RangeInclusive<i64> { -(p as i64)..=p as i64 };
    for p in (0..nn).rev() {
        for d in reachable_d(p) {
            let mut best = INVALID;
            for q in p + 1..=nn {
                let k = (q - p) as i64;
                if q == nn && k < 2 {
                    continue; // last part must be at least 2
                }
                let d_next = k - d;
                let contribution = (1i64 << (nn - q)) * d_next;
                let rest = if q == nn { 0 } else { value[q][(d_next + offset as i64) as usize] };
                if rest == INVALID {
                    continue;
                }
                best = best.max(contribution + rest);
            }
            value[p][(d + offset as i64) as usize] = best;
        }
    }
    let max = value[0][offset];
    assert!(max > 0, "every n >= 2 admits at least the single-layer composition");

    // Backtrack along every optimal transition.
    let mut argmax = Vec::new();
    let mut stack: Vec<(usize, i64, Vec<u32>)> = vec![(0, 0, Vec::new())];
    while let Some((p, d, parts)) = stack.pop() {
        let target = value[p][(d + offset as i64) as usize];
        for q in p + 1..=nn {
            let k = (q - p) as i64;
            if q == nn && k < 2 {
                continue;
            }
            let d_next = k - d;
            let contribution = (1i64 << (nn - q)) * d_next;
            let rest = if q == nn { 0 } else { value[q][(d_next + offset as i64) as usize] };
            if rest == INVALID || contribution + rest != target {
                continue;
            }
            let mut next_parts = parts.clone();
            next_parts.push(k as u32);
            if q == nn {
                argmax.push(Composition::new(n, next_parts).expect("valid by construction"));
            } else {
                stack.push((q, d_next, next_parts));
            }
        }
    }
    (max as u64, argmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(n: u32, parts: &[u32]) -> Composition {
        Composition::new(n, parts.to_vec()).unwrap()
    }

    #[test]
    fn composition_validation() {
        assert!(Composition::new(5, vec![2, 1, 2]).is_ok());
        assert_eq!(Composition::new(1, vec![1]).unwrap_err(), CompositionError::TooFewVariables(1));
        assert_eq!(Composition::new(3, vec![2, 1]).unwrap_err(), CompositionError::LastPartTooSmall(1));
        assert_eq!(Composition::new(3, vec![1, 0, 2]).unwrap_err(), CompositionError::ZeroPart(2));
        assert_eq!(
            Composition::new(4, vec![1, 2]).unwrap_err(),
            CompositionError::WrongSum { n: 4, sum: 3 }
        );
        assert_eq!(Composition::new(2, vec![]).unwrap_err(), CompositionError::NoParts);
        assert_eq!(comp(5, &[2, 1, 2]).to_string(), "(2,1,2)");
    }

    #[test]
    fn known_counts() {
        assert_eq!(count_ncf(2, 1).unwrap(), 8u32.into());
        assert_eq!(count_ncf(4, 1).unwrap(), 32u32.into());
        assert_eq!(count_ncf(4, 2).unwrap(), 320u32.into());
        assert_eq!(count_ncf(4, 3).unwrap(), 384u32.into());
        for (n, total) in [(2u32, 8u32), (3, 64), (4, 736), (5, 10624)] {
            assert_eq!(count_ncf_total(n).unwrap(), total.into());
        }
        assert!(count_ncf(4, 4).is_err());
        assert!(count_ncf(4, 0).is_err());
        assert!(count_ncf_total(1).is_err());
    }

    #[test]
    fn per_layer_counts_sum_to_total() {
        for n in 2..=12 {
            let total: BigUint = (1..n).map(|r| count_ncf(n, r).unwrap()).sum();
            assert_eq!(total, count_ncf_total(n).unwrap());
        }
    }

    #[test]
    fn recursion_agrees_with_the_formula() {
        assert_eq!(count_recursive(2).unwrap(), 8u32.into());
        for n in 2..=30 {
            assert_eq!(count_recursive(n).unwrap(), count_ncf_total(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_from_composition(&comp(5, &[2, 1, 2]), false), 5u32.into());
        for n in 2..=10 {
            assert_eq!(weight_from_composition(&comp(n, &[n]), false), 1u32.into());
        }
        // 2^4 - (2^3 - 2^0) = 9
        assert_eq!(weight_from_composition(&comp(4, &[1, 3]), true), 9u32.into());
    }

    #[test]
    fn weights_of_complements_cover_the_cube() {
        for n in 2..=11u32 {
            for mask in 0..1u64 << (n - 2) {
                let c = composition_from_mask(n, mask);
                let w0 = weight_from_composition(&c, false);
                let w1 = weight_from_composition(&c, true);
                assert_eq!(w0 + w1, BigUint::one() << n);
            }
        }
    }

    #[test]
    fn activity_examples() {
        let c = comp(5, &[2, 1, 2]);
        assert_eq!(activity_of_layer(&c, 1).unwrap(), Dyadic::new(5, 4));
        assert_eq!(activity_of_layer(&c, 2).unwrap(), Dyadic::new(3, 4));
        assert_eq!(activity_of_layer(&c, 3).unwrap(), Dyadic::new(1, 4));
        assert!(activity_of_layer(&c, 4).is_err());
        assert!(activity_of_layer(&c, 0).is_err());

        for n in 2..=10 {
            let single = comp(n, &[n]);
            assert_eq!(activity_of_layer(&single, 1).unwrap(), Dyadic::new(1, n - 1));
        }
        // The last layer's activity is 1/2^{n-1} whatever the sizes.
        for (n, parts) in [(6u32, vec![1u32, 2, 3]), (7, vec![2, 2, 3]), (9, vec![1, 1, 1, 4, 2])] {
            let c = Composition::new(n, parts).unwrap();
            assert_eq!(activity_of_layer(&c, c.r()).unwrap(), Dyadic::new(1, n - 1));
        }
    }

    #[test]
    fn average_sensitivity_examples() {
        assert_eq!(average_sensitivity(&comp(5, &[2, 1, 2])), Dyadic::new(15, 4));
        assert_eq!(average_sensitivity(&comp(6, &[1, 2, 1, 2])), Dyadic::new(21, 4));
        assert_eq!(average_sensitivity(&comp(3, &[1, 2])), Dyadic::new(5, 2));
        assert_eq!(average_sensitivity(&comp(2, &[2])), Dyadic::one());
    }

    #[test]
    fn sensitivity_splits_into_layer_activities() {
        for n in 3..=12u32 {
            for mask in 0..1u64 << (n - 2) {
                let c = composition_from_mask(n, mask);
                let mut acc = Dyadic::zero();
                for (l, &k) in c.parts().iter().enumerate() {
                    acc = &acc + &(&activity_of_layer(&c, l + 1).unwrap() * k as u64);
                }
                assert_eq!(acc, average_sensitivity(&c), "composition {c}");
            }
        }
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = sensitivity_bounds(3).unwrap();
        assert_eq!((lo, hi), (Dyadic::new(3, 2), Dyadic::new(3, 1)));
        let (lo, hi) = sensitivity_bounds(5).unwrap();
        assert_eq!(lo, Dyadic::new(5, 4));
        assert_eq!(hi, Dyadic::new(15, 3));
        assert_eq!(average_sensitivity(&comp(5, &[5])), Dyadic::new(5, 4));
        assert!(sensitivity_bounds(2).is_err());
    }

    #[test]
    fn family_values() {
        assert_eq!(MaxFamily::OnesTwo.closed_form(6).unwrap(), Dyadic::new(21, 4));
        assert_eq!(MaxFamily::OnesTwo.closed_form(3).unwrap(), Dyadic::new(5, 2));
        assert_eq!(MaxFamily::OneTwosThree.closed_form(6).unwrap(), Dyadic::new(21, 4));
        assert!(MaxFamily::OnesTwo.closed_form(2).is_err());
        assert!(MaxFamily::OnesThree.closed_form(3).is_err());
        assert!(MaxFamily::OneTwosThree.closed_form(7).is_err());
        assert!(MaxFamily::OneTwosThree.closed_form(4).is_err());

        assert_eq!(MaxFamily::OnesTwo.composition(3).unwrap().parts(), &[1, 2]);
        assert_eq!(MaxFamily::OnesThree.composition(6).unwrap().parts(), &[1, 1, 1, 3]);
        assert_eq!(MaxFamily::OneTwosThree.composition(8).unwrap().parts(), &[1, 2, 2, 3]);
    }

    #[test]
    fn family_closed_forms_match_direct_evaluation() {
        for n in 3..=30 {
            let f = MaxFamily::OnesTwo;
            assert_eq!(f.closed_form(n).unwrap(), average_sensitivity(&f.composition(n).unwrap()));
        }
        for n in 4..=30 {
            let f = MaxFamily::OnesThree;
            assert_eq!(f.closed_form(n).unwrap(), average_sensitivity(&f.composition(n).unwrap()));
        }
        for n in (6..=30).step_by(2) {
            let f = MaxFamily::OneTwosThree;
            assert_eq!(f.closed_form(n).unwrap(), average_sensitivity(&f.composition(n).unwrap()));
        }
    }

    #[test]
    fn scan_small_sizes() {
        let report = conjecture_scan(3).unwrap();
        assert_eq!(report.max, Dyadic::new(5, 2));
        assert_eq!(report.argmax.len(), 1);
        assert_eq!(report.argmax[0].parts(), &[1, 2]);
        assert_eq!(report.compositions, 2u32.into());
        assert!(report.consistent());

        let report = conjecture_scan(6).unwrap();
        assert_eq!(report.max, Dyadic::new(21, 4));
        let parts: Vec<&[u32]> = report.argmax.iter().map(|c| c.parts()).collect();
        assert!(parts.contains(&&[1, 1, 1, 1, 2][..]));
        assert!(parts.contains(&&[1, 2, 1, 2][..]));
        assert!(parts.contains(&&[1, 1, 1, 3][..]));
        assert!(parts.contains(&&[1, 2, 3][..]));
        assert!(report.consistent());

        let report = conjecture_scan(2).unwrap();
        assert_eq!(report.max, Dyadic::one());
        assert!(report.consistent());

        assert!(conjecture_scan(41).is_err());
        assert!(conjecture_scan(1).is_err());
    }

    #[test]
    fn scan_numerator_matches_exact_arithmetic() {
        for n in 2..=12u32 {
            for mask in 0..1u64 << (n - 2) {
                let c = composition_from_mask(n, mask);
                assert_eq!(
                    Dyadic::new(sensitivity_numerator(n, mask), n - 1),
                    average_sensitivity(&c),
                    "composition {c}"
                );
            }
        }
    }

    #[test]
    fn value_function_agrees_with_enumeration() {
        for n in 3..=14u32 {
            let exhaustive = scan_range(n, 0..1u64 << (n - 2));
            let (max, mut argmax) = value_function_scan(n);
            assert_eq!(max, exhaustive.max_numerator, "n = {n}");
            argmax.sort();
            let mut expected: Vec<Composition> = exhaustive
                .argmax_masks
                .iter()
                .map(|&m| composition_from_mask(n, m))
                .collect();
            expected.sort();
            assert_eq!(argmax, expected, "n = {n}");
        }
    }

    #[test]
    fn partial_merge_is_associative_on_overlaps() {
        let n = 10;
        let whole = scan_range(n, 0..256);
        let split = scan_range(n, 0..100).merge(scan_range(n, 100..256));
        assert_eq!(whole.max_numerator, split.max_numerator);
        let mut a = whole.argmax_masks.clone();
        let mut b = split.argmax_masks.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
