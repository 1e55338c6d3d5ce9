//! Exact scalar traits and the rational base field.
//!
//! Every coefficient domain in this crate (ℚ, number-field towers, finite
//! fields) implements [`Field`]. All arithmetic is exact; there is no
//! floating point anywhere in the crate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision rationals, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// A commutative ring with decidable equality and exact division.
///
/// `exact_div` returns `None` when the divisor does not divide exactly;
/// it is what fraction-free elimination (Bareiss) needs.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn exact_div(&self, other: &Self) -> Option<Self>;
}

/// An exact field. `inv` is total on nonzero elements.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    /// Image of a small integer, independent of any field context.
    fn from_i64(n: i64) -> Self;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Ring for Rational {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self / other)
        }
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `a/b`, omitting `/b` when the denominator is 1.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a` or `a/b` with optional sign; `b` must be nonzero.
pub fn rational_from_string(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("invalid integer `{t}`"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Total order on rationals used for canonical tie-breaking in sweeps.
pub fn rational_cmp(a: &Rational, b: &Rational) -> std::cmp::Ordering {
    a.cmp(b)
}

/// The `v_p` valuation of a nonzero integer at a prime.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_round_trip() {
        for (num, s) in [
            (ratio(3, 4), "3/4"),
            (rat(-5), "-5"),
            (ratio(-7, 2), "-7/2"),
            (rat(0), "0"),
        ] {
            assert_eq!(rational_to_string(&num), s);
            assert_eq!(rational_from_string(s).unwrap(), num);
        }
        assert!(rational_from_string("1/0").is_err());
        assert!(rational_from_string("x").is_err());
    }

    #[test]
    fn field_ops() {
        let a = ratio(2, 3);
        assert_eq!(a.inv().unwrap(), ratio(3, 2));
        assert!(rat(0).inv().is_none());
        assert_eq!(Rational::from_i64(-4), rat(-4));
    }
}
