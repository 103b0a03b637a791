//! Truth-table representation of Boolean functions.
//!
//! A function f: {0,1}^n -> {0,1} is stored as a packed bit sequence of
//! length 2^n. Bit t holds f(x) for the assignment with
//! x_i = (t >> (i-1)) & 1, so x_1 is the least significant index bit.
//! Every module and every file format in this crate uses this one
//! convention.

use std::fmt;

use crate::error::TableError;

/// Largest variable count supported by table-backed operations (2^24 bits,
/// i.e. 2 MiB per table). Closed-form formulas have no such cap.
pub const MAX_VARS: u32 = 24;

const WORD_BITS: u64 = 64;

/// A complete value table of an n-variable Boolean function.
///
/// Immutable after construction. Bit t (for t in 0..2^n) is the value at
/// the point whose i-th coordinate is `(t >> (i-1)) & 1`; variables are
/// numbered 1..=n and x_1 is the least significant bit of the index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: u32,
    words: Vec<u64>,
}

/// An input point for an n-variable function, packed as an index in
/// [0, 2^n) with the same bit convention as [`TruthTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    n: u32,
    index: u64,
}

impl Point {
    /// Pack an index into a point. The index must be below 2^n.
    pub fn new(n: u32, index: u64) -> Result<Self, TableError> {
        check_var_count(n)?;
        let size = 1u64 << n;
        if index >= size {
            return Err(TableError::WrongLength {
                n,
                expected: size as usize,
                got: index as usize,
            });
        }
        Ok(Point { n, index })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Coordinate x_i of this point, for i in 1..=n.
    pub fn coordinate(&self, var: u32) -> bool {
        assert!(var >= 1 && var <= self.n, "variable x{var} out of range 1..={}", self.n);
        (self.index >> (var - 1)) & 1 == 1
    }
}

fn check_var_count(n: u32) -> Result<(), TableError> {
    if n > MAX_VARS {
        Err(TableError::TooManyVariables(n))
    } else {
        Ok(())
    }
}

fn words_for(n: u32) -> usize {
    let bits = 1u64 << n;
    bits.div_ceil(WORD_BITS) as usize
}

/// Mask selecting the valid bits of the last storage word.
fn tail_mask(n: u32) -> u64 {
    let bits = 1u64 << n;
    if bits.is_multiple_of(WORD_BITS) {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl TruthTable {
    /// Number of variables.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Table length, 2^n.
    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    /// The constant-`value` function on n variables.
    pub fn constant(n: u32, value: bool) -> Result<Self, TableError> {
        check_var_count(n)?;
        let words = if value {
            let mut w = vec![u64::MAX; words_for(n)];
            *w.last_mut().expect("at least one word") &= tail_mask(n);
            w
        } else {
            vec![0; words_for(n)]
        };
        Ok(TruthTable { n, words })
    }

    /// Build a table by evaluating `f` at every packed index.
    pub fn from_fn(n: u32, mut f: impl FnMut(u64) -> bool) -> Result<Self, TableError> {
        check_var_count(n)?;
        let mut words = vec![0u64; words_for(n)];
        for t in 0..1u64 << n {
            if f(t) {
                words[(t / WORD_BITS) as usize] |= 1 << (t % WORD_BITS);
            }
        }
        Ok(TruthTable { n, words })
    }

    /// The projection function f(x) = x_i.
    pub fn projection(n: u32, var: u32) -> Result<Self, TableError> {
        check_var_count(n)?;
        assert!(var >= 1 && var <= n, "variable x{var} out of range 1..={n}");
        Self::from_fn(n, |t| (t >> (var - 1)) & 1 == 1)
    }

    pub(crate) fn from_words(n: u32, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(n));
        debug_assert_eq!(words.last().map(|w| w & !tail_mask(n)), Some(0));
        TruthTable { n, words }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Value at packed index t.
    pub fn bit(&self, t: u64) -> bool {
        assert!(t < self.size(), "index {t} out of range for n = {}", self.n);
        (self.words[(t / WORD_BITS) as usize] >> (t % WORD_BITS)) & 1 == 1
    }

    /// Value at a point. Panics if the point has a different variable count.
    pub fn evaluate(&self, x: Point) -> bool {
        assert_eq!(
            x.n, self.n,
            "point has {} variables but table has {}",
            x.n, self.n
        );
        self.bit(x.index)
    }

    /// Number of inputs on which the function is 1.
    pub fn hamming_weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// `Some(b)` when the function is identically b.
    pub fn constant_value(&self) -> Option<bool> {
        let w = self.hamming_weight();
        if w == 0 {
            Some(false)
        } else if w == self.size() {
            Some(true)
        } else {
            None
        }
    }

    /// Pointwise complement.
    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        *words.last_mut().expect("at least one word") &= tail_mask(self.n);
        TruthTable { n: self.n, words }
    }

    /// XOR a constant into the function (identity for c = 0).
    pub fn xor_constant(&self, c: bool) -> Self {
        if c {
            self.complement()
        } else {
            self.clone()
        }
    }

    /// Restriction f|_{x_var = value}: the (n-1)-variable function on the
    /// remaining variables, which keep their relative order and are
    /// renumbered 1..=n-1.
    ///
    /// Panics if n = 0 or `var` is out of range.
    pub fn restrict(&self, var: u32, value: bool) -> Self {
        self.restrict_mapped(var, value).0
    }

    /// Like [`restrict`](Self::restrict), but also returns the index map:
    /// entry j-1 holds the original index of the new variable j.
    pub fn restrict_mapped(&self, var: u32, value: bool) -> (Self, Vec<u32>) {
        assert!(self.n >= 1, "cannot restrict a zero-variable function");
        assert!(var >= 1 && var <= self.n, "variable x{var} out of range 1..={}", self.n);
        let m = self.n - 1;
        let low_mask = (1u64 << (var - 1)) - 1;
        let table = TruthTable::from_fn(m, |t| {
            let full = ((t & !low_mask) << 1) | ((value as u64) << (var - 1)) | (t & low_mask);
            self.bit(full)
        })
        .expect("restriction stays within the variable cap");
        let map = (1..=self.n).filter(|&v| v != var).collect();
        (table, map)
    }

    /// Whether the function actually depends on x_var.
    pub fn is_essential(&self, var: u32) -> bool {
        self.restrict(var, false) != self.restrict(var, true)
    }

    /// All variables the function depends on, ascending.
    pub fn essential_variables(&self) -> Vec<u32> {
        (1..=self.n).filter(|&v| self.is_essential(v)).collect()
    }

    /// True when the slice x_var = value is constantly `output`.
    pub(crate) fn slice_is_constant(&self, var: u32, value: bool, output: bool) -> bool {
        debug_assert!(var >= 1 && var <= self.n);
        let sel = self.slice_selector(var, value);
        if output {
            self.words
                .iter()
                .zip(&sel)
                .all(|(w, s)| w & s == *s)
        } else {
            self.words.iter().zip(&sel).all(|(w, s)| w & s == 0)
        }
    }

    /// Word masks selecting the indices with x_var = value.
    fn slice_selector(&self, var: u32, value: bool) -> Vec<u64> {
        let mut sel = Vec::with_capacity(self.words.len());
        if var <= 6 {
            let period = 1u64 << (var - 1);
            // Periodic within a word: bits whose (var-1)-th index bit is set.
            let mut ones_pattern = 0u64;
            for t in 0..64 {
                if (t >> (var - 1)) & 1 == 1 {
                    ones_pattern |= 1 << t;
                }
            }
            let _ = period;
            let pattern = if value { ones_pattern } else { !ones_pattern };
            let tm = tail_mask(self.n);
            for (i, _) in self.words.iter().enumerate() {
                let m = if i + 1 == self.words.len() { pattern & tm } else { pattern };
                sel.push(m);
            }
        } else {
            let tm = tail_mask(self.n);
            for i in 0..self.words.len() {
                let idx_bit = (i >> (var - 1 - 6)) & 1 == 1;
                let m = if idx_bit == value { u64::MAX } else { 0 };
                let m = if i + 1 == self.words.len() { m & tm } else { m };
                sel.push(m);
            }
        }
        sel
    }

    /// Parse the binary text form: one '0'/'1' per table bit, character j
    /// (left to right) holding the value at index t = j. The variable
    /// count is inferred from the length, which must be a power of two.
    pub fn from_bin_str(s: &str) -> Result<Self, TableError> {
        let len = s.len();
        if len == 0 {
            return Err(TableError::EmptyLiteral);
        }
        if !len.is_power_of_two() {
            return Err(TableError::LengthNotPowerOfTwo(len));
        }
        let n = len.trailing_zeros();
        check_var_count(n)?;
        let mut words = vec![0u64; words_for(n)];
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => words[pos / WORD_BITS as usize] |= 1 << (pos as u64 % WORD_BITS),
                _ => return Err(TableError::BadChar { ch, pos }),
            }
        }
        Ok(TruthTable { n, words })
    }

    /// Binary text form (see [`from_bin_str`](Self::from_bin_str)).
    pub fn to_bin_str(&self) -> String {
        (0..self.size()).map(|t| if self.bit(t) { '1' } else { '0' }).collect()
    }

    /// Parse the hex text form: 4 table bits per character in the same
    /// index order as the binary form, with index t = 4j at the most
    /// significant bit of character j. For n < 2 the bit string is padded
    /// on the left with zeros to a full character.
    pub fn from_hex_str(s: &str, n: u32) -> Result<Self, TableError> {
        check_var_count(n)?;
        if s.is_empty() {
            return Err(TableError::EmptyLiteral);
        }
        let bits = 1usize << n;
        let expected_chars = bits.div_ceil(4);
        if s.len() != expected_chars {
            return Err(TableError::WrongLength { n, expected: expected_chars, got: s.len() });
        }
        let pad = expected_chars * 4 - bits;
        let mut words = vec![0u64; words_for(n)];
        for (pos, ch) in s.chars().enumerate() {
            let nibble = ch.to_digit(16).ok_or(TableError::BadChar { ch, pos })? as u64;
            for k in 0..4 {
                let bit = (nibble >> (3 - k)) & 1;
                let global = pos * 4 + k;
                if global < pad {
                    if bit != 0 {
                        return Err(TableError::NonZeroPadding);
                    }
                    continue;
                }
                let t = (global - pad) as u64;
                if bit == 1 {
                    words[(t / WORD_BITS) as usize] |= 1 << (t % WORD_BITS);
                }
            }
        }
        Ok(TruthTable { n, words })
    }

    /// Hex text form (see [`from_hex_str`](Self::from_hex_str)).
    pub fn to_hex_str(&self) -> String {
        let bits = self.size() as usize;
        let chars = bits.div_ceil(4);
        let pad = chars * 4 - bits;
        let mut out = String::with_capacity(chars);
        for j in 0..chars {
            let mut nibble = 0u32;
            for k in 0..4 {
                let global = j * 4 + k;
                let bit = if global < pad {
                    false
                } else {
                    self.bit((global - pad) as u64)
                };
                nibble = (nibble << 1) | bit as u32;
            }
            out.push(char::from_digit(nibble, 16).expect("nibble < 16"));
        }
        out
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 4 {
            write!(f, "TruthTable(n={}, {})", self.n, self.to_bin_str())
        } else {
            write!(f, "TruthTable(n={}, 0x{})", self.n, self.to_hex_str())
        }
    }
}
