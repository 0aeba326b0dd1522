//! Fixed-point enclosures of pi, arctan, exp, sin and cos.
//!
//! Every function returns a pair `(lo, hi)` of integers with
//! `lo / 2^bits <= f(x) <= hi / 2^bits`. Series terms are truncated with
//! `floor`, which keeps each computed term within 2 ulp of its exact value
//! as long as consecutive terms shrink by at least a factor of two; the
//! upper bound adds that accumulated slack plus a geometric tail bound.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{ceil_shr, floor_shr};
use crate::rational::Rational;

pub type Enclosure = (BigInt, BigInt);

const PI_GUARD: u32 = 16;

fn pi_cache() -> &'static Mutex<HashMap<u32, Enclosure>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Enclosure>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of pi from Machin's formula.
pub fn pi_fixed(bits: u32) -> Enclosure {
    if let Some(hit) = pi_cache().lock().expect("pi cache").get(&bits) {
        return hit.clone();
    }
    let w = bits + PI_GUARD;
    let (a_lo, a_hi) = atan_small(&BigInt::from(1), &BigInt::from(5), w);
    let (b_lo, b_hi) = atan_small(&BigInt::from(1), &BigInt::from(239), w);
    let lo = a_lo * 16 - b_hi * 4;
    let hi = a_hi * 16 - b_lo * 4;
    let out = (floor_shr(&lo, PI_GUARD as u64), ceil_shr(&hi, PI_GUARD as u64));
    pi_cache()
        .lock()
        .expect("pi cache")
        .insert(bits, out.clone());
    out
}

/// arctan(n/d) for `|n| <= d`, `d > 0`, via the Euler series
/// `atan x = x/(1+x^2) * sum_k c_k y^k`, `y = x^2/(1+x^2) <= 1/2`.
pub fn atan_small(n: &BigInt, d: &BigInt, bits: u32) -> Enclosure {
    debug_assert!(d.is_positive() && n.abs() <= *d);
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let neg = n.is_negative();
    let a = n.abs();
    let a2 = &a * &a;
    let q = &a2 + d * d;
    let mut term = ((&a * d) << bits as usize).div_floor(&q);
    let mut sum = BigInt::zero();
    let mut count: u64 = 0;
    let mut k: u64 = 0;
    while !term.is_zero() {
        sum += &term;
        count += 1;
        k += 1;
        term = (term * BigInt::from(2 * k) * &a2).div_floor(&(&q * BigInt::from(2 * k + 1)));
    }
    let lo = sum.clone();
    let hi = sum + BigInt::from(2 * count + 8);
    if neg {
        (-hi, -lo)
    } else {
        (lo, hi)
    }
}

/// arctan(n/d) for any rational with `d > 0`.
pub fn atan_rational(n: &BigInt, d: &BigInt, bits: u32) -> Enclosure {
    debug_assert!(d.is_positive());
    if n.abs() <= *d {
        return atan_small(n, d, bits);
    }
    // atan x = sign(x) * pi/2 - atan(1/x); 1/x = d/n, rewritten with a positive denominator.
    let (pi_lo, pi_hi) = pi_fixed(bits + 1);
    let (half_lo, half_hi) = (floor_shr(&pi_lo, 2), ceil_shr(&pi_hi, 2));
    let (rn, rd) = if n.is_negative() {
        (-d.clone(), -n.clone())
    } else {
        (d.clone(), n.clone())
    };
    let (r_lo, r_hi) = atan_small(&rn, &rd, bits);
    if n.is_positive() {
        (half_lo - r_hi, half_hi - r_lo)
    } else {
        (-half_hi - r_hi, -half_lo - r_lo)
    }
}

pub fn half_pi_fixed(bits: u32) -> Enclosure {
    let (lo, hi) = pi_fixed(bits + 1);
    (floor_shr(&lo, 2), ceil_shr(&hi, 2))
}

/// e^q for rational `q`. The caller checks the width and retries with a
/// larger `bits` if it needs a tighter result for large `|q|`.
pub fn exp_rational(q: &Rational, bits: u32) -> Enclosure {
    if q.is_zero() {
        let one = BigInt::one() << bits as usize;
        return (one.clone(), one);
    }
    if q.is_negative() {
        let inner = bits + 8;
        let (lo, hi) = exp_rational(&-q, inner);
        let num = BigInt::one() << (bits + inner) as usize;
        let r_lo = num.div_floor(&hi);
        let r_hi = -((-&num).div_floor(&lo));
        return (r_lo, r_hi);
    }
    // q = r * 2^s with r <= 1/2.
    let mut s: u32 = 0;
    let mut r = q.clone();
    let half = Rational::frac(1, 2);
    while r > half {
        r = r * &half;
        s += 1;
    }
    let magnitude = (q.to_f64() * 1.5).ceil().max(0.0) as u32;
    let w = bits + s + magnitude + 16;
    let (rn, rd) = (r.numer().clone(), r.denom().clone());
    let mut term = BigInt::one() << w as usize;
    let mut sum = BigInt::zero();
    let mut count: u64 = 0;
    let mut k: u64 = 0;
    while !term.is_zero() {
        sum += &term;
        count += 1;
        k += 1;
        term = (term * &rn).div_floor(&(&rd * BigInt::from(k)));
    }
    let mut lo = sum.clone();
    let mut hi = sum + BigInt::from(2 * count + 8);
    for _ in 0..s {
        lo = floor_shr(&(&lo * &lo), w as u64);
        hi = ceil_shr(&(&hi * &hi), w as u64);
    }
    let drop = (w - bits) as u64;
    (floor_shr(&lo, drop), ceil_shr(&hi, drop))
}

/// sin and cos of a fixed-point point `x = xs / 2^bits` with `0 <= x < 1`.
fn sin_cos_point(xs: &BigInt, bits: u32) -> (Enclosure, Enclosure) {
    let one = BigInt::one() << bits as usize;
    let x2 = xs * xs;
    let shift = 2 * bits as usize;
    let series = |first: BigInt, start: u64| -> Enclosure {
        let mut term = first;
        let mut k = start;
        let mut sum = BigInt::zero();
        let mut count: u64 = 0;
        let mut positive = true;
        while !term.is_zero() {
            if positive {
                sum += &term;
            } else {
                sum -= &term;
            }
            positive = !positive;
            count += 1;
            term = (term * &x2 / BigInt::from((k + 1) * (k + 2))) >> shift;
            k += 2;
        }
        let slack = BigInt::from(2 * count + 8);
        (&sum - &slack, sum + slack)
    };
    (series(xs.clone(), 1), series(one, 0))
}

/// Enclosures of `(sin(2 pi r), cos(2 pi r))` for a rational number of turns.
pub fn sin_cos_turns(r: &Rational, bits: u32) -> (Enclosure, Enclosure) {
    let frac = r - &Rational::from_integer(r.floor());
    let quarter = Rational::frac(1, 4);
    let quadrant_big = (&frac * &Rational::from(4)).floor();
    let quadrant: u8 = if quadrant_big >= BigInt::from(3) {
        3
    } else if quadrant_big >= BigInt::from(2) {
        2
    } else if quadrant_big >= BigInt::one() {
        1
    } else {
        0
    };
    let within = &frac - &(&quarter * &Rational::from(quadrant as i64));
    let eighth = Rational::frac(1, 8);
    let (a, swapped) = if within <= eighth {
        (within, false)
    } else {
        (&quarter - &within, true)
    };
    let one = BigInt::one() << bits as usize;
    let (s0, c0): (Enclosure, Enclosure) = if a.is_zero() {
        ((BigInt::zero(), BigInt::zero()), (one.clone(), one))
    } else {
        let w = bits + 16;
        let (pi_lo, pi_hi) = pi_fixed(w);
        let two_a = &a * &Rational::from(2);
        let x_lo = (&pi_lo * two_a.numer()).div_floor(two_a.denom());
        let x_hi = -((-(&pi_hi * two_a.numer())).div_floor(two_a.denom()));
        let ((s_lo, _), (_, c_hi)) = sin_cos_point(&x_lo, w);
        let ((_, s_hi), (c_lo, _)) = sin_cos_point(&x_hi, w);
        let g = 16u64;
        (
            (floor_shr(&s_lo, g), ceil_shr(&s_hi, g)),
            (floor_shr(&c_lo, g), ceil_shr(&c_hi, g)),
        )
    };
    let (s, c) = if swapped { (c0, s0) } else { (s0, c0) };
    let neg = |(lo, hi): Enclosure| (-hi, -lo);
    match quadrant {
        0 => (s, c),
        1 => (c, neg(s)),
        2 => (neg(s), neg(c)),
        _ => (neg(c), s),
    }
}
