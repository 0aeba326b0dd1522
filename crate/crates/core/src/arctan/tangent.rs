use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A tangent value: a rational or the pole at pi/2.
///
/// The derived order puts every finite value below `Infinite`, which is the
/// numeric order of the corresponding angles in `(-pi/2, pi/2]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tangent {
    Finite(Rational),
    Infinite,
}

impl Tangent {
    pub fn zero() -> Self {
        Tangent::Finite(Rational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Tangent::Infinite)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Tangent::Finite(q) => Some(q),
            Tangent::Infinite => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Infinity" | "infinite" => Ok(Tangent::Infinite),
            other => Rational::parse(other).map(Tangent::Finite),
        }
    }
}

impl From<Rational> for Tangent {
    fn from(q: Rational) -> Self {
        Tangent::Finite(q)
    }
}

impl fmt::Display for Tangent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tangent::Finite(q) => write!(f, "{q}"),
            Tangent::Infinite => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Tangent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Tangent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Tangent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Tangent::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Tangent as a point `(num : den)` of the projective line; `den = 0` is the pole.
/// Stored reduced, with `den > 0` or `(num, den) = (1, 0)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjectiveTangent {
    num: BigInt,
    den: BigInt,
}

impl ProjectiveTangent {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if num.is_zero() && den.is_zero() {
            return Err(Error::BadParams("projective tangent (0, 0)".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: BigInt, den: BigInt) -> Self {
        if den.is_zero() {
            return ProjectiveTangent {
                num: BigInt::one(),
                den,
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        ProjectiveTangent { num, den }
    }

    pub fn identity() -> Self {
        ProjectiveTangent {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn from_tangent(t: &Tangent) -> Self {
        match t {
            Tangent::Finite(q) => ProjectiveTangent {
                num: q.numer().clone(),
                den: q.denom().clone(),
            },
            Tangent::Infinite => ProjectiveTangent {
                num: BigInt::one(),
                den: BigInt::zero(),
            },
        }
    }

    pub fn to_tangent(&self) -> Tangent {
        if self.den.is_zero() {
            Tangent::Infinite
        } else {
            Tangent::Finite(
                Rational::new(self.num.clone(), self.den.clone()).expect("nonzero denominator"),
            )
        }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    /// tan(a + b) from tan a and tan b: `(an*bd + bn*ad : ad*bd - an*bn)`.
    pub fn add(&self, other: &ProjectiveTangent) -> ProjectiveTangent {
        let num = &self.num * &other.den + &other.num * &self.den;
        let den = &self.den * &other.den - &self.num * &other.num;
        // Both inputs are nonzero vectors and the map is a rotation composition,
        // so the result is never (0, 0).
        Self::normalized(num, den)
    }

    pub fn negate(&self) -> ProjectiveTangent {
        if self.den.is_zero() {
            return self.clone();
        }
        ProjectiveTangent {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// Free-function form of [`ProjectiveTangent::add`].
pub fn projective_tan_add(a: &ProjectiveTangent, b: &ProjectiveTangent) -> ProjectiveTangent {
    a.add(b)
}
