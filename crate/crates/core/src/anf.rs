//! Algebraic normal form: GF(2) polynomials as sets of monomials.
//!
//! A monomial is a subset of {1..n}, packed as a bitmask (bit i-1 set
//! means x_i is a factor; the empty mask is the constant 1 term). A
//! polynomial is the XOR sum of its monomials, each appearing at most
//! once. Conversion to and from truth tables is the subset-XOR (Möbius)
//! transform, which is its own inverse over GF(2).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{ParseAnfError, ParseAnfErrorKind, TableError};
use crate::table::{TruthTable, MAX_VARS};

/// A reduced GF(2) polynomial over variables x_1..x_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnfPoly {
    n: u32,
    monomials: BTreeSet<u32>,
}

impl AnfPoly {
    /// The zero polynomial.
    pub fn zero(n: u32) -> Result<Self, TableError> {
        if n > MAX_VARS {
            return Err(TableError::TooManyVariables(n));
        }
        Ok(AnfPoly { n, monomials: BTreeSet::new() })
    }

    /// Build from monomial masks; duplicates cancel in pairs.
    pub fn from_masks(n: u32, masks: impl IntoIterator<Item = u32>) -> Result<Self, TableError> {
        let mut p = Self::zero(n)?;
        for m in masks {
            assert!(m < 1u32 << n, "monomial {m:#x} uses variables beyond x{n}");
            p.toggle(m);
        }
        Ok(p)
    }

    fn toggle(&mut self, mask: u32) {
        if !self.monomials.insert(mask) {
            self.monomials.remove(&mask);
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Monomial masks in ascending mask order.
    pub fn monomials(&self) -> impl Iterator<Item = u32> + '_ {
        self.monomials.iter().copied()
    }

    /// Variable index sets, one per monomial.
    pub fn monomial_vars(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.monomials.iter().map(|&m| mask_vars(m))
    }

    /// Algebraic degree: the largest monomial size, 0 for the constant 1,
    /// and -1 for the zero polynomial.
    pub fn degree(&self) -> i32 {
        self.monomials
            .iter()
            .map(|m| m.count_ones() as i32)
            .max()
            .unwrap_or(-1)
    }

    /// Parse the text grammar: terms joined by '+', each term '1', '0' or
    /// a product of variables 'x<k>' joined by '*'. Whitespace is ignored
    /// and repeated monomials cancel in pairs.
    pub fn parse(text: &str, n: u32) -> Result<Self, ParseAnfError> {
        Parser { bytes: text.as_bytes(), pos: 0, n }.parse()
    }

    /// Evaluate into a truth table: bit t is the XOR over monomials m of
    /// the product of the variables of m at t.
    pub fn truth_table(&self) -> TruthTable {
        let mut words = indicator_words(self.n, &self.monomials);
        subset_xor_transform(&mut words, self.n);
        TruthTable::from_words(self.n, words)
    }

    /// Interpolate the unique polynomial with the given truth table.
    pub fn from_truth_table(f: &TruthTable) -> Self {
        let mut words = f.words().to_vec();
        subset_xor_transform(&mut words, f.n());
        let mut monomials = BTreeSet::new();
        for (i, w) in words.iter().enumerate() {
            let mut w = *w;
            while w != 0 {
                let b = w.trailing_zeros();
                monomials.insert((i as u32) * 64 + b);
                w &= w - 1;
            }
        }
        AnfPoly { n: f.n(), monomials }
    }
}

fn mask_vars(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

fn indicator_words(n: u32, masks: &BTreeSet<u32>) -> Vec<u64> {
    let len = (1usize << n).div_ceil(64);
    let mut words = vec![0u64; len];
    for &m in masks {
        words[(m / 64) as usize] |= 1u64 << (m % 64);
    }
    words
}

const HALF_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// In-place subset-XOR transform: g(S) = XOR over T subset of S of f(T).
/// Applying it twice is the identity.
fn subset_xor_transform(words: &mut [u64], n: u32) {
    for d in 0..n.min(6) {
        let shift = 1u32 << d;
        let mask = HALF_MASKS[d as usize];
        for w in words.iter_mut() {
            *w ^= (*w & mask) << shift;
        }
    }
    for d in 6..n {
        let stride = 1usize << (d - 6);
        let mut base = 0;
        while base < words.len() {
            for j in 0..stride {
                words[base + stride + j] ^= words[base + j];
            }
            base += 2 * stride;
        }
    }
}

impl fmt::Display for AnfPoly {
    /// Monomials print in descending degree, ties broken by ascending
    /// variable indices; the zero polynomial prints as "0". Re-parsing
    /// the output yields an equal polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<Vec<u32>> = self.monomial_vars().collect();
        ordered.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let terms: Vec<String> = ordered
            .iter()
            .map(|vars| {
                if vars.is_empty() {
                    "1".to_string()
                } else {
                    vars.iter().map(|v| format!("x{v}")).collect::<Vec<_>>().join("*")
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    n: u32,
}

impl Parser<'_> {
    fn parse(mut self) -> Result<AnfPoly, ParseAnfError> {
        assert!(self.n <= MAX_VARS, "variable count {} exceeds the maximum of {MAX_VARS}", self.n);
        let mut poly = AnfPoly { n: self.n, monomials: BTreeSet::new() };
        loop {
            if let Some(mask) = self.term()? {
                poly.toggle(mask);
            }
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => self.pos += 1,
                Some(c) => return Err(self.err(ParseAnfErrorKind::UnexpectedChar(c as char))),
            }
        }
        Ok(poly)
    }

    /// One term; `None` for the literal '0', which contributes nothing.
    fn term(&mut self) -> Result<Option<u32>, ParseAnfError> {
        self.skip_ws();
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(Some(0))
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(None)
            }
            Some(b'x') => {
                let mut mask = self.factor()?;
                loop {
                    self.skip_ws();
                    if self.peek() == Some(b'*') {
                        self.pos += 1;
                        self.skip_ws();
                        if self.peek() != Some(b'x') {
                            return Err(self.err(ParseAnfErrorKind::ExpectedTerm));
                        }
                        mask |= self.factor()?;
                    } else {
                        break;
                    }
                }
                Ok(Some(mask))
            }
            _ => Err(self.err(ParseAnfErrorKind::ExpectedTerm)),
        }
    }

    fn factor(&mut self) -> Result<u32, ParseAnfError> {
        debug_assert_eq!(self.peek(), Some(b'x'));
        self.pos += 1;
        let start = self.pos;
        let mut index: u64 = 0;
        while let Some(c @ b'0'..=b'9') = self.peek() {
            index = index.saturating_mul(10) + (c - b'0') as u64;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(ParseAnfErrorKind::ExpectedIndex));
        }
        if index == 0 || index > self.n as u64 {
            return Err(ParseAnfError {
                position: start - 1,
                kind: ParseAnfErrorKind::VarOutOfRange { var: index, n: self.n },
            });
        }
        Ok(1u32 << (index - 1))
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, kind: ParseAnfErrorKind) -> ParseAnfError {
        ParseAnfError { position: self.pos, kind }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ParseAnfErrorKind as Kind;

    fn masks(p: &AnfPoly) -> Vec<u32> {
        p.monomials().collect()
    }

    #[test]
    fn parse_basic_terms() {
        let p = AnfPoly::parse("x1*x2 + 1", 2).unwrap();
        assert_eq!(masks(&p), vec![0b00, 0b11]);
        let q = AnfPoly::parse("  x2 * x1+x1 ", 3).unwrap();
        assert_eq!(masks(&q), vec![0b001, 0b011]);
    }

    #[test]
    fn gf2_cancellation() {
        let p = AnfPoly::parse("x1 + x1", 1).unwrap();
        assert!(p.is_zero());
        let q = AnfPoly::parse("x1*x2 + x2*x1 + x2", 2).unwrap();
        assert_eq!(masks(&q), vec![0b10]);
        // A repeated variable inside one term is idempotent, not cancelling.
        let r = AnfPoly::parse("x1*x1", 1).unwrap();
        assert_eq!(masks(&r), vec![0b1]);
    }

    #[test]
    fn parse_zero_literal() {
        assert!(AnfPoly::parse("0", 3).unwrap().is_zero());
        let p = AnfPoly::parse("0 + x1", 1).unwrap();
        assert_eq!(masks(&p), vec![0b1]);
    }

    #[test]
    fn parse_five_term_quartic() {
        let p = AnfPoly::parse("x1*x2*x3 + x2*x3*x4 + x1*x3 + x3*x4 + 1", 4).unwrap();
        assert_eq!(p.monomials().count(), 5);
        assert_eq!(p.degree(), 3);
        assert_eq!(masks(&p), vec![0b0000, 0b0101, 0b0111, 0b1100, 0b1110]);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = AnfPoly::parse("x1 + x9", 4).unwrap_err();
        assert_eq!(e.position, 5);
        assert_eq!(e.kind, Kind::VarOutOfRange { var: 9, n: 4 });

        let e = AnfPoly::parse("x1 & x2", 2).unwrap_err();
        assert_eq!(e.position, 3);
        assert_eq!(e.kind, Kind::UnexpectedChar('&'));

        let e = AnfPoly::parse("x1 + ", 2).unwrap_err();
        assert_eq!(e.position, 5);
        assert_eq!(e.kind, Kind::ExpectedTerm);

        let e = AnfPoly::parse("x + x1", 2).unwrap_err();
        assert_eq!(e.kind, Kind::ExpectedIndex);

        let e = AnfPoly::parse("x0", 2).unwrap_err();
        assert_eq!(e.kind, Kind::VarOutOfRange { var: 0, n: 2 });

        let e = AnfPoly::parse("x1 * * x2", 2).unwrap_err();
        assert_eq!(e.kind, Kind::ExpectedTerm);

        assert!(AnfPoly::parse("", 2).is_err());
    }

    #[test]
    fn degree_conventions() {
        assert_eq!(AnfPoly::zero(3).unwrap().degree(), -1);
        assert_eq!(AnfPoly::parse("1", 3).unwrap().degree(), 0);
        assert_eq!(AnfPoly::parse("x2", 3).unwrap().degree(), 1);
    }

    #[test]
    fn display_ordering_and_round_trip() {
        let text = "x1*x2*x3 + x2*x3*x4 + x1*x3 + x3*x4 + 1";
        let p = AnfPoly::parse(text, 4).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(AnfPoly::zero(2).unwrap().to_string(), "0");
        assert_eq!(AnfPoly::parse("0", 2).unwrap(), AnfPoly::parse("1 + 1", 2).unwrap());
    }

    #[test]
    fn evaluation_matches_definition() {
        // Zero polynomial evaluates to the all-zero table.
        assert_eq!(AnfPoly::zero(3).unwrap().truth_table().hamming_weight(), 0);
        // x1 + x2 is XOR.
        let p = AnfPoly::parse("x1 + x2", 2).unwrap();
        assert_eq!(p.truth_table().to_bin_str(), "0110");
    }

    #[test]
    fn interpolation_examples() {
        let zero = TruthTable::constant(4, false).unwrap();
        assert!(AnfPoly::from_truth_table(&zero).is_zero());

        let xor = TruthTable::from_bin_str("0110").unwrap();
        assert_eq!(masks(&AnfPoly::from_truth_table(&xor)), vec![0b01, 0b10]);

        let and = TruthTable::from_bin_str("0001").unwrap();
        assert_eq!(masks(&AnfPoly::from_truth_table(&and)), vec![0b11]);
    }

    #[test]
    fn transform_round_trip_bulk() {
        // Multiplicative-congruential bits give a cheap deterministic sweep.
        let mut state = 0x243f_6a88_85a3_08d3u64;
        for n in 0..=10 {
            for _ in 0..200 {
                let f = TruthTable::from_fn(n, |_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    state >> 63 == 1
                })
                .unwrap();
                let p = AnfPoly::from_truth_table(&f);
                assert_eq!(p.truth_table(), f, "round trip failed at n = {n}");
            }
        }
    }
}
