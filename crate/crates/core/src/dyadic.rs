//! Exact rationals with a power-of-two denominator.
//!
//! Activities and sensitivities of Boolean functions always have the form
//! p / 2^e, so this carrier keeps every value exact; no floating point is
//! used anywhere in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// A value numerator / 2^log2_den, kept canonical: the numerator is odd
/// or the exponent is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    log2_den: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, log2_den: u32) -> Self {
        let mut d = Dyadic { num: num.into(), log2_den };
        d.canonicalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), log2_den: 0 }
    }

    pub fn one() -> Self {
        Dyadic { num: BigInt::one(), log2_den: 0 }
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.log2_den = 0;
            return;
        }
        let twos = self.num.trailing_zeros().unwrap_or(0).min(self.log2_den as u64) as u32;
        if twos > 0 {
            self.num >>= twos;
            self.log2_den -= twos;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    /// Exact decimal rendering, e.g. 15/2^4 prints as "0.9375".
    pub fn to_decimal_string(&self) -> String {
        if self.log2_den == 0 {
            return self.num.to_string();
        }
        // p / 2^e = p * 5^e / 10^e
        let scaled = (&self.num * BigInt::from(5).pow(self.log2_den)).abs();
        let digits = scaled.to_string();
        let e = self.log2_den as usize;
        let (int_part, frac_part) = if digits.len() > e {
            let (i, f) = digits.split_at(digits.len() - e);
            (i.to_string(), f.to_string())
        } else {
            ("0".to_string(), format!("{digits:0>e$}"))
        };
        let sign = if self.num.is_negative() { "-" } else { "" };
        format!("{sign}{int_part}.{frac_part}")
    }
}

impl fmt::Display for Dyadic {
    /// Canonical fraction form "p/2^e"; integers print without the
    /// denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_den == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.log2_den)
        }
    }
}

impl Serialize for Dyadic {
    /// Stable wire form: `{"num": "<decimal string>", "log2den": e,
    /// "decimal": "<exact decimal>"}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Dyadic", 3)?;
        s.serialize_field("num", &self.num.to_string())?;
        s.serialize_field("log2den", &self.log2_den)?;
        s.serialize_field("decimal", &self.to_decimal_string())?;
        s.end()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.log2_den.max(other.log2_den);
        let a = &self.num << (e - self.log2_den);
        let b = &other.num << (e - other.log2_den);
        a.cmp(&b)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.log2_den.max(rhs.log2_den);
        let num = (&self.num << (e - self.log2_den)) + (&rhs.num << (e - rhs.log2_den));
        Dyadic::new(num, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.log2_den.max(rhs.log2_den);
        let num = (&self.num << (e - self.log2_den)) - (&rhs.num << (e - rhs.log2_den));
        Dyadic::new(num, e)
    }
}

impl Mul<u64> for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: u64) -> Dyadic {
        Dyadic::new(&self.num * rhs, self.log2_den)
    }
}

impl From<u64> for Dyadic {
    fn from(v: u64) -> Self {
        Dyadic { num: v.into(), log2_den: 0 }
    }
}
