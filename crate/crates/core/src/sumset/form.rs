//! Symbolic integer combinations of transcendental atoms, for sets whose
//! elements are not arctangents of rationals (such as `arctan(e^q)`).
//!
//! Normalization folds the identities `arctan 1 = pi/4`, `arctan(1/t) =
//! pi/2 - arctan t` and `arctan(e^-q) = pi/2 - arctan(e^q)`, so equal forms
//! always mean equal values. Different forms may still be equal as reals,
//! which is why the interval engine reports the number of distinct forms
//! only as an upper bound.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arctan::elementary::{atan_rational, exp_rational, pi_fixed, Enclosure};
use crate::arctan::dyadic::{ceil_shr, floor_shr};
use crate::arctan::{ArcTanSumKey, Tangent};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// pi/4
    QuarterPi,
    /// arctan(t) with 0 < t < 1
    ArcTan(Rational),
    /// arctan(e^q) with q > 0
    ArcTanExp(Rational),
}

impl Atom {
    /// Fixed-point enclosure at scale `2^bits`.
    pub fn enclosure(&self, bits: u32) -> Enclosure {
        match self {
            Atom::QuarterPi => {
                let (lo, hi) = pi_fixed(bits);
                (floor_shr(&lo, 2), ceil_shr(&hi, 2))
            }
            Atom::ArcTan(t) => atan_rational(t.numer(), t.denom(), bits),
            Atom::ArcTanExp(q) => {
                // arctan is increasing, so bound each end separately.
                let w = bits + 8;
                let (lo, hi) = exp_rational(q, w);
                let den = BigInt::from(1) << w as usize;
                let (a, _) = atan_rational(&lo, &den, bits);
                let (_, b) = atan_rational(&hi, &den, bits);
                (a, b)
            }
        }
    }

    pub fn parse(s: &str) -> Result<Atom> {
        let s = s.trim();
        let inner = |prefix: &str| -> Option<&str> {
            s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'))
        };
        if s == "pi/4" {
            Ok(Atom::QuarterPi)
        } else if let Some(t) = inner("atanexp(") {
            let q = Rational::parse(t)?;
            let form = LinearForm::arctan_exp(&q);
            match form.terms() {
                [(atom, 1)] => Ok(atom.clone()),
                _ => Err(Error::SchemaError(format!("atom {s} is not in normal form"))),
            }
        } else if let Some(t) = inner("atan(") {
            let t = Rational::parse(t)?;
            if t.is_positive() && t < Rational::one() {
                Ok(Atom::ArcTan(t))
            } else {
                Err(Error::SchemaError(format!("atom {s} needs 0 < t < 1")))
            }
        } else {
            Err(Error::SchemaError(format!("unknown atom {s:?}")))
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::QuarterPi => f.write_str("pi/4"),
            Atom::ArcTan(t) => write!(f, "atan({t})"),
            Atom::ArcTanExp(q) => write!(f, "atanexp({q})"),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `sum c_i * atom_i` with nonzero integer coefficients, sorted by atom.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearForm(Vec<(Atom, i64)>);

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm(Vec::new())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Atom, i64)>) -> Self {
        let mut acc: BTreeMap<Atom, i64> = BTreeMap::new();
        for (a, c) in terms {
            *acc.entry(a).or_default() += c;
        }
        LinearForm(acc.into_iter().filter(|(_, c)| *c != 0).collect())
    }

    pub fn terms(&self) -> &[(Atom, i64)] {
        &self.0
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        LinearForm::from_terms(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn scale(&self, k: i64) -> LinearForm {
        LinearForm::from_terms(self.0.iter().map(|(a, c)| (a.clone(), c * k)))
    }

    pub fn negate(&self) -> LinearForm {
        self.scale(-1)
    }

    fn quarter_pi(k: i64) -> LinearForm {
        LinearForm::from_terms([(Atom::QuarterPi, k)])
    }

    /// arctan(t) in normal form.
    pub fn arctan(t: &Tangent) -> LinearForm {
        match t {
            Tangent::Infinite => Self::quarter_pi(2),
            Tangent::Finite(t) if t.is_zero() => LinearForm::zero(),
            Tangent::Finite(t) if t.is_negative() => Self::arctan(&Tangent::Finite(-t)).negate(),
            Tangent::Finite(t) if *t == Rational::one() => Self::quarter_pi(1),
            Tangent::Finite(t) if *t > Rational::one() => LinearForm::from_terms([
                (Atom::QuarterPi, 2),
                (Atom::ArcTan(t.recip().expect("t > 1")), -1),
            ]),
            Tangent::Finite(t) => LinearForm::from_terms([(Atom::ArcTan(t.clone()), 1)]),
        }
    }

    /// arctan(e^q) in normal form.
    pub fn arctan_exp(q: &Rational) -> LinearForm {
        if q.is_zero() {
            Self::quarter_pi(1)
        } else if q.is_negative() {
            LinearForm::from_terms([(Atom::QuarterPi, 2), (Atom::ArcTanExp(-q), -1)])
        } else {
            LinearForm::from_terms([(Atom::ArcTanExp(q.clone()), 1)])
        }
    }

    /// Form of an exact key `m pi + arctan t`.
    pub fn from_key(k: &ArcTanSumKey) -> LinearForm {
        Self::quarter_pi(4 * k.wrap).add(&Self::arctan(&k.tangent))
    }

    /// Fixed-point enclosure at scale `2^bits`.
    pub fn enclosure(&self, bits: u32) -> Enclosure {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (atom, c) in &self.0 {
            let (al, ah) = atom.enclosure(bits);
            let c = BigInt::from(*c);
            if c.sign() == num_bigint::Sign::Minus {
                lo += &c * ah;
                hi += &c * al;
            } else {
                lo += &c * al;
                hi += &c * ah;
            }
        }
        (lo, hi)
    }

    pub fn approx(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        let s = 2f64.powi(64);
        let f = |b: &BigInt| num_traits::ToPrimitive::to_f64(b).unwrap_or(f64::NAN) / s;
        0.5 * (f(&lo) + f(&hi))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (a, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> = self.0.iter().map(|(a, c)| (*c, a.to_string())).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(i64, String)> = Vec::deserialize(deserializer)?;
        let mut terms = Vec::new();
        for (c, s) in pairs {
            terms.push((Atom::parse(&s).map_err(serde::de::Error::custom)?, c));
        }
        Ok(LinearForm::from_terms(terms))
    }
}
