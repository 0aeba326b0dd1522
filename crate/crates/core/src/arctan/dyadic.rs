//! Dyadic rationals and certified enclosures with outward rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `mantissa * 2^exponent`, kept with an odd mantissa (or zero with exponent 0)
/// so that structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `scaled / 2^bits`.
    pub fn from_fixed(scaled: BigInt, bits: u32) -> Self {
        Dyadic::new(scaled, -(bits as i64))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i8 {
        if self.mantissa.is_positive() {
            1
        } else if self.mantissa.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            Rational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as usize,
            )
            .expect("power of two is nonzero")
        }
    }

    /// Nearest-ish double; not a certified conversion.
    pub fn to_f64(&self) -> f64 {
        if self.mantissa.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (&self.mantissa >> shift as usize).to_f64().unwrap_or(f64::NAN);
        let e = self.exponent + shift;
        scale_f64(top, e)
    }

    /// `floor(self * 2^bits)`.
    pub fn floor_fixed(&self, bits: u32) -> BigInt {
        let e = self.exponent + bits as i64;
        if e >= 0 {
            &self.mantissa << e as usize
        } else {
            floor_shr(&self.mantissa, (-e) as u64)
        }
    }

    /// `ceil(self * 2^bits)`.
    pub fn ceil_fixed(&self, bits: u32) -> BigInt {
        -(-self).floor_fixed(bits)
    }

    pub fn round_down(&self, bits: u32) -> Dyadic {
        Dyadic::from_fixed(self.floor_fixed(bits), bits)
    }

    pub fn round_up(&self, bits: u32) -> Dyadic {
        Dyadic::from_fixed(self.ceil_fixed(bits), bits)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&-other)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }
}

impl std::ops::Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

pub(crate) fn floor_shr(n: &BigInt, k: u64) -> BigInt {
    // `>>` on BigInt rounds toward negative infinity.
    n >> k as usize
}

pub(crate) fn ceil_shr(n: &BigInt, k: u64) -> BigInt {
    -((-n) >> k as usize)
}

pub(crate) fn scale_f64(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// `floor(q * 2^bits)` for a rational `q`.
pub(crate) fn rational_floor_fixed(q: &Rational, bits: u32) -> BigInt {
    (q.numer() << bits as usize).div_floor(q.denom())
}

pub(crate) fn rational_ceil_fixed(q: &Rational, bits: u32) -> BigInt {
    -rational_floor_fixed(&-q, bits)
}

/// Closed interval `[lo, hi]` with dyadic endpoints. Results of arithmetic are
/// rounded outward to the grid `2^-precision_bits`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadParams(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(DyadicInterval {
            lo,
            hi,
            precision_bits,
        })
    }

    pub(crate) fn from_ordered(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        debug_assert!(lo <= hi);
        DyadicInterval {
            lo,
            hi,
            precision_bits,
        }
    }

    pub fn point(value: Dyadic, precision_bits: u32) -> Self {
        DyadicInterval {
            lo: value.clone(),
            hi: value,
            precision_bits,
        }
    }

    pub fn zero(precision_bits: u32) -> Self {
        Self::point(Dyadic::zero(), precision_bits)
    }

    /// Tightest grid enclosure of a rational.
    pub fn from_rational(q: &Rational, precision_bits: u32) -> Self {
        let lo = Dyadic::from_fixed(rational_floor_fixed(q, precision_bits), precision_bits);
        let hi = Dyadic::from_fixed(rational_ceil_fixed(q, precision_bits), precision_bits);
        DyadicInterval {
            lo,
            hi,
            precision_bits,
        }
    }

    /// Enclosure `[lo/2^bits, hi/2^bits]` from fixed-point bounds.
    pub(crate) fn from_fixed(lo: BigInt, hi: BigInt, bits: u32, precision_bits: u32) -> Self {
        Self::from_ordered(
            Dyadic::from_fixed(lo, bits),
            Dyadic::from_fixed(hi, bits),
            precision_bits,
        )
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        let lo = self.lo.to_rational();
        let hi = self.hi.to_rational();
        &lo <= q && q <= &hi
    }

    pub fn contains_interval(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_disjoint(&self, other: &DyadicInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.lo.add(&self.hi).to_f64() / 2.0
    }

    /// Sign if the interval excludes zero or is exactly zero.
    pub fn certain_sign(&self) -> Option<i8> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    fn outward(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        DyadicInterval {
            lo: lo.round_down(precision_bits),
            hi: hi.round_up(precision_bits),
            precision_bits,
        }
    }

    fn prec_with(&self, other: &DyadicInterval) -> u32 {
        self.precision_bits.min(other.precision_bits)
    }

    pub fn add(&self, other: &DyadicInterval) -> Self {
        Self::outward(
            self.lo.add(&other.lo),
            self.hi.add(&other.hi),
            self.prec_with(other),
        )
    }

    pub fn sub(&self, other: &DyadicInterval) -> Self {
        Self::outward(
            self.lo.sub(&other.hi),
            self.hi.sub(&other.lo),
            self.prec_with(other),
        )
    }

    pub fn neg(&self) -> Self {
        DyadicInterval {
            lo: -&self.hi,
            hi: -&self.lo,
            precision_bits: self.precision_bits,
        }
    }

    pub fn mul(&self, other: &DyadicInterval) -> Self {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Self::outward(lo, hi, self.prec_with(other))
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = Dyadic::from_int(k);
        let (a, b) = (self.lo.mul(&k), self.hi.mul(&k));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        DyadicInterval {
            lo,
            hi,
            precision_bits: self.precision_bits,
        }
    }

    /// `x * |x|`, monotone increasing.
    pub fn signed_square(&self) -> Self {
        let f = |d: &Dyadic| d.mul(&d.abs());
        Self::outward(f(&self.lo), f(&self.hi), self.precision_bits)
    }

    pub fn div(&self, other: &DyadicInterval) -> Result<Self> {
        if other.lo.signum() <= 0 && other.hi.signum() >= 0 {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec_with(other);
        let quotients = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (a, b) in quotients {
            let down = div_round(a, b, p, false);
            let up = div_round(a, b, p, true);
            lo = Some(match lo {
                Some(cur) if cur <= down => cur,
                _ => down,
            });
            hi = Some(match hi {
                Some(cur) if cur >= up => cur,
                _ => up,
            });
        }
        Ok(DyadicInterval {
            lo: lo.expect("nonempty"),
            hi: hi.expect("nonempty"),
            precision_bits: p,
        })
    }
}

/// `a / b` rounded to the grid `2^-bits`, downward or upward.
fn div_round(a: &Dyadic, b: &Dyadic, bits: u32, up: bool) -> Dyadic {
    // a/b * 2^bits = (ma/mb) * 2^(ea - eb + bits)
    let shift = a.exponent - b.exponent + bits as i64;
    let (mut num, mut den) = (a.mantissa.clone(), b.mantissa.clone());
    if shift >= 0 {
        num <<= shift as usize;
    } else {
        den <<= (-shift) as usize;
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    let q = if up {
        -((-num).div_floor(&den))
    } else {
        num.div_floor(&den)
    };
    Dyadic::from_fixed(q, bits)
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.17e}, {:.17e}]@{}",
            self.lo.to_f64(),
            self.hi.to_f64(),
            self.precision_bits
        )
    }
}
