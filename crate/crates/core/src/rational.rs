//! Arbitrary-precision rationals in lowest terms.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Signed fraction with positive denominator and coprime parts, so that
/// `Eq` and `Hash` agree with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// Panics on a zero denominator; for literals and internal use.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("zero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact value of a finite double.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    /// Total bit length of numerator and denominator.
    pub fn bits(&self) -> u64 {
        self.0.numer().bits() + self.0.denom().bits()
    }

    /// Parses `"p"`, `"p/q"` or a plain decimal `"d.ddd"` (read exactly).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::BadRational(text.to_string());
        let s = text.trim();
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = parse_int(n).ok_or_else(bad)?;
            let d: BigInt = parse_int(d).ok_or_else(bad)?;
            return Rational::new(n, d).map_err(|_| bad());
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let (neg, digits) = match int_part.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
            };
            if frac_part.is_empty()
                || !frac_part.bytes().all(|b| b.is_ascii_digit())
                || !digits.bytes().all(|b| b.is_ascii_digit())
            {
                return Err(bad());
            }
            let joined = format!("{digits}{frac_part}");
            let mut n = BigInt::from_str(&joined).map_err(|_| bad())?;
            if neg {
                n = -n;
            }
            let d = num_traits::pow(BigInt::from(10), frac_part.len());
            return Rational::new(n, d).map_err(|_| bad());
        }
        parse_int(s).map(Rational::from_integer).ok_or_else(bad)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Rational::parse(s)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rational::parse(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Division panics on zero like the integer operators; use `checked_div`
// where the divisor is data.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(Rational::parse("1/2").unwrap(), Rational::frac(1, 2));
        assert_eq!(Rational::parse("0.25").unwrap(), Rational::frac(1, 4));
        assert_eq!(Rational::parse("-2.5").unwrap(), Rational::frac(-5, 2));
        assert_eq!(Rational::parse("6/-4").unwrap(), Rational::frac(-3, 2));
        assert_eq!(Rational::parse("3").unwrap(), Rational::from(3));
        assert_eq!(Rational::parse("+7").unwrap(), Rational::from(7));
    }

    #[test]
    fn rejects_malformed_literals() {
        for s in ["", "1/0", "a", "1.", ".5x", "1/2/3", "--1", "1e3", "0x10"] {
            assert!(
                matches!(Rational::parse(s), Err(Error::BadRational(_))),
                "{s:?} should be rejected"
            );
        }
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = Rational::frac(2, 4);
        let b = Rational::frac(-3, -6);
        assert_eq!(a, b);
        assert_eq!(a.numer(), &BigInt::from(1));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert_eq!(a.to_string(), "1/2");
        assert_eq!(Rational::frac(4, 2).to_string(), "2");
    }

    #[test]
    fn floor_rounds_toward_negative_infinity() {
        assert_eq!(Rational::frac(-1, 2).floor(), BigInt::from(-1));
        assert_eq!(Rational::frac(7, 2).floor(), BigInt::from(3));
    }
}
