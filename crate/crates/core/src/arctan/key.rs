use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::elementary::{atan_rational, half_pi_fixed, pi_fixed, Enclosure};
use super::tangent::{ProjectiveTangent, Tangent};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_MAX_BITS: u32 = 8192;
const START_BITS: u32 = 64;

/// `coefficient * arctan(argument)`, with arctan(inf) = pi/2.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ArcTanTerm {
    pub coefficient: i64,
    pub argument: Tangent,
}

impl ArcTanTerm {
    pub fn new(coefficient: i64, argument: Tangent) -> Self {
        ArcTanTerm {
            coefficient,
            argument,
        }
    }

    pub fn unit(argument: impl Into<Tangent>) -> Self {
        ArcTanTerm::new(1, argument.into())
    }
}

/// Canonical representative `wrap * pi + arctan(tangent)` of a real number,
/// where arctan maps into `(-pi/2, pi/2]` and arctan(inf) = pi/2.
///
/// Field order makes the derived `Ord` the numeric order of the values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcTanSumKey {
    pub wrap: i64,
    pub tangent: Tangent,
}

impl ArcTanSumKey {
    pub fn new(wrap: i64, tangent: Tangent) -> Self {
        ArcTanSumKey { wrap, tangent }
    }

    pub fn zero() -> Self {
        ArcTanSumKey::new(0, Tangent::zero())
    }

    /// Key of arctan(t) for a single argument.
    pub fn atan(t: Tangent) -> Self {
        ArcTanSumKey::new(0, t)
    }

    pub fn negate(&self) -> Self {
        key_negate(self)
    }

    pub fn add(&self, other: &ArcTanSumKey) -> Self {
        key_add(self, other)
    }

    pub fn sub(&self, other: &ArcTanSumKey) -> Self {
        key_add(self, &key_negate(other))
    }

    /// Integer multiple by double-and-add.
    pub fn scale(&self, k: i64) -> Self {
        let base = if k < 0 { self.negate() } else { self.clone() };
        let mut n = k.unsigned_abs();
        let mut acc = ArcTanSumKey::zero();
        let mut pow = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.add(&pow);
            }
            n >>= 1;
            if n > 0 {
                pow = pow.add(&pow);
            }
        }
        acc
    }

    /// Fixed-point enclosure of the value at scale `2^bits`.
    pub fn enclosure(&self, bits: u32) -> Enclosure {
        let (pl, ph) = pi_fixed(bits);
        let m = BigInt::from(self.wrap);
        let (al, ah) = tangent_atan(&self.tangent, bits);
        let (wl, wh) = if m.is_negative() {
            (&m * &ph, &m * &pl)
        } else {
            (&m * &pl, &m * &ph)
        };
        (wl + al, wh + ah)
    }

    /// Double close to the value, with a bound on its error.
    pub fn approx(&self) -> (f64, f64) {
        const BITS: u32 = 80;
        let (lo, hi) = self.enclosure(BITS);
        let scale = 2f64.powi(BITS as i32);
        let lo_f = lo.to_f64().unwrap_or(f64::NAN) / scale;
        let hi_f = hi.to_f64().unwrap_or(f64::NAN) / scale;
        let mid = 0.5 * (lo_f + hi_f);
        let err = (hi_f - lo_f).abs() + 4.0 * f64::EPSILON * mid.abs().max(1.0);
        (mid, err)
    }
}

impl fmt::Display for ArcTanSumKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.wrap, self.tangent)
    }
}

impl fmt::Debug for ArcTanSumKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Enclosure of arctan(t) in `(-pi/2, pi/2]` at scale `2^bits`.
pub(crate) fn tangent_atan(t: &Tangent, bits: u32) -> Enclosure {
    match t {
        Tangent::Infinite => half_pi_fixed(bits),
        Tangent::Finite(q) => atan_rational(q.numer(), q.denom(), bits),
    }
}

/// Negation: `(m, t) -> (-m, -t)`, and `(m, inf) -> (-m-1, inf)`.
pub fn key_negate(k: &ArcTanSumKey) -> ArcTanSumKey {
    match &k.tangent {
        Tangent::Finite(t) => ArcTanSumKey::new(-k.wrap, Tangent::Finite(-t)),
        Tangent::Infinite => ArcTanSumKey::new(-k.wrap - 1, Tangent::Infinite),
    }
}

/// Exact sum of two keys. The tangent comes from the addition formula and
/// the wrap correction from the signs of the two tangents, so no numerics
/// are involved.
pub fn key_add(a: &ArcTanSumKey, b: &ArcTanSumKey) -> ArcTanSumKey {
    let m = a.wrap + b.wrap;
    match (&a.tangent, &b.tangent) {
        (Tangent::Infinite, Tangent::Infinite) => ArcTanSumKey::new(m + 1, Tangent::zero()),
        (Tangent::Infinite, Tangent::Finite(t)) | (Tangent::Finite(t), Tangent::Infinite) => {
            // pi/2 + arctan t
            match t.signum() {
                0 => ArcTanSumKey::new(m, Tangent::Infinite),
                1 => ArcTanSumKey::new(m + 1, Tangent::Finite(-t.recip().expect("nonzero"))),
                _ => ArcTanSumKey::new(m, Tangent::Finite(-t.recip().expect("nonzero"))),
            }
        }
        (Tangent::Finite(s), Tangent::Finite(t)) => {
            let (sn, sd, tn, td) = (s.numer(), s.denom(), t.numer(), t.denom());
            let num = sn * td + tn * sd;
            let den = sd * td - sn * tn;
            match den.sign() {
                num_bigint::Sign::Plus => {
                    ArcTanSumKey::new(m, Tangent::Finite(Rational::new(num, den).expect("den > 0")))
                }
                num_bigint::Sign::NoSign => {
                    if s.is_positive() {
                        ArcTanSumKey::new(m, Tangent::Infinite)
                    } else {
                        ArcTanSumKey::new(m - 1, Tangent::Infinite)
                    }
                }
                num_bigint::Sign::Minus => {
                    let shift = if s.is_positive() { 1 } else { -1 };
                    ArcTanSumKey::new(
                        m + shift,
                        Tangent::Finite(Rational::new(num, den).expect("den < 0")),
                    )
                }
            }
        }
    }
}

/// `a + b` as `(wrap, num, den)` without reducing the fraction: `den >= 0`,
/// and `den = 0` marks the pole. Compare results with [`unreduced_eq`].
/// Skipping the gcd makes this much cheaper than [`key_add`] on large keys.
pub(crate) fn key_add_unreduced(a: &ArcTanSumKey, b: &ArcTanSumKey) -> (i64, BigInt, BigInt) {
    let m = a.wrap + b.wrap;
    match (&a.tangent, &b.tangent) {
        (Tangent::Finite(s), Tangent::Finite(t)) => {
            let (sn, sd, tn, td) = (s.numer(), s.denom(), t.numer(), t.denom());
            let num = sn * td + tn * sd;
            let den = sd * td - sn * tn;
            match den.sign() {
                num_bigint::Sign::Plus => (m, num, den),
                // Same rule as `key_add`: the sum is +-pi/2.
                num_bigint::Sign::NoSign => {
                    let w = if s.is_positive() { m } else { m - 1 };
                    (w, BigInt::from(1), BigInt::zero())
                }
                num_bigint::Sign::Minus => {
                    let shift = if s.is_positive() { 1 } else { -1 };
                    (m + shift, -num, -den)
                }
            }
        }
        _ => {
            let k = key_add(a, b);
            match k.tangent {
                Tangent::Finite(q) => (k.wrap, q.numer().clone(), q.denom().clone()),
                Tangent::Infinite => (k.wrap, BigInt::from(1), BigInt::zero()),
            }
        }
    }
}

pub(crate) fn unreduced_eq(x: &(i64, BigInt, BigInt), y: &(i64, BigInt, BigInt)) -> bool {
    x.0 == y.0
        && match (x.2.is_zero(), y.2.is_zero()) {
            (true, true) => true,
            (false, false) => &x.1 * &y.2 == &y.1 * &x.2,
            _ => false,
        }
}

/// Exact tangent of `sum c_i arctan(r_i)` by folding through the projective
/// addition formula.
pub fn fold_tangent(terms: &[ArcTanTerm]) -> ProjectiveTangent {
    let mut acc = ProjectiveTangent::identity();
    for term in terms {
        let mut base = ProjectiveTangent::from_tangent(&term.argument);
        if term.coefficient < 0 {
            base = base.negate();
        }
        let mut n = term.coefficient.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.add(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.add(&base);
            }
        }
    }
    acc
}

/// Fixed-point enclosure of `sum c_i arctan(r_i)` at scale `2^bits`.
pub(crate) fn terms_enclosure(terms: &[ArcTanTerm], bits: u32) -> Enclosure {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for term in terms {
        let (al, ah) = tangent_atan(&term.argument, bits);
        let c = BigInt::from(term.coefficient);
        if term.coefficient >= 0 {
            lo += &c * al;
            hi += &c * ah;
        } else {
            lo += &c * ah;
            hi += &c * al;
        }
    }
    (lo, hi)
}

/// Canonical key of `sum c_i arctan(r_i)`.
///
/// The tangent is exact. The wrap `m` is the integer `(V - arctan t) / pi`
/// (or `(V - pi/2) / pi` at a pole); enclosures are refined from 64 bits,
/// doubling, until exactly one integer is enclosed.
pub fn canonical_key(terms: &[ArcTanTerm], max_bits: u32) -> Result<ArcTanSumKey> {
    if max_bits < 32 {
        return Err(Error::BadParams(format!("max_bits {max_bits} < 32")));
    }
    let tangent = fold_tangent(terms).to_tangent();
    let mut bits = START_BITS.min(max_bits);
    loop {
        if let Some(wrap) = certify_wrap(terms, &tangent, bits) {
            return Ok(ArcTanSumKey::new(wrap, tangent));
        }
        if bits >= max_bits {
            return Err(Error::PrecisionExhausted { max_bits });
        }
        bits = (bits * 2).min(max_bits);
    }
}

fn certify_wrap(terms: &[ArcTanTerm], tangent: &Tangent, bits: u32) -> Option<i64> {
    let (vl, vh) = terms_enclosure(terms, bits);
    let (bl, bh) = tangent_atan(tangent, bits);
    let (dl, dh) = (vl - bh, vh - bl);
    let (pl, ph) = pi_fixed(bits);
    // Z = d / pi, pi > 0.
    let z_lo = if dl.is_negative() {
        Rational::new(dl, pl.clone()).ok()?
    } else {
        Rational::new(dl, ph.clone()).ok()?
    };
    let z_hi = if dh.is_negative() {
        Rational::new(dh, ph).ok()?
    } else {
        Rational::new(dh, pl).ok()?
    };
    let first = -((-&z_lo).floor());
    let last = z_hi.floor();
    if first == last {
        first.to_i64()
    } else {
        None
    }
}

/// Wrap and tangent recomputed independently of `key_add`: used to certify
/// additivity in tests and the CLI self-checks.
pub fn certified_sum(a: &ArcTanSumKey, b: &ArcTanSumKey, max_bits: u32) -> Result<ArcTanSumKey> {
    let tangent = ProjectiveTangent::from_tangent(&a.tangent)
        .add(&ProjectiveTangent::from_tangent(&b.tangent))
        .to_tangent();
    let mut bits = START_BITS.min(max_bits);
    loop {
        let (al, ah) = a.enclosure(bits);
        let (bl, bh) = b.enclosure(bits);
        let (tl, th) = tangent_atan(&tangent, bits);
        let (pl, ph) = pi_fixed(bits);
        let (dl, dh) = (al + bl - th, ah + bh - tl);
        let z_lo = if dl.is_negative() {
            Rational::new(dl, pl.clone())?
        } else {
            Rational::new(dl, ph.clone())?
        };
        let z_hi = if dh.is_negative() {
            Rational::new(dh, ph)?
        } else {
            Rational::new(dh, pl)?
        };
        let first = -((-&z_lo).floor());
        if first == z_hi.floor() {
            let wrap = first
                .to_i64()
                .ok_or_else(|| Error::BadParams("wrap out of range".into()))?;
            return Ok(ArcTanSumKey::new(wrap, tangent));
        }
        if bits >= max_bits {
            return Err(Error::PrecisionExhausted { max_bits });
        }
        bits = (bits * 2).min(max_bits);
    }
}

/// Numeric comparison of two keys; identical to the derived order.
pub fn key_cmp(a: &ArcTanSumKey, b: &ArcTanSumKey) -> Ordering {
    a.cmp(b)
}
