use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::point::{Point, PointSet};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// The line `a x + b y = c` with coprime integer coefficients and `(a, b)`
/// sign-normalized: `a > 0`, or `a = 0` and `b > 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Line {
    /// The line through two distinct points.
    pub fn through(p: &Point, q: &Point) -> Line {
        debug_assert!(p != q);
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = &a * &p.x + &b * &p.y;
        Line::from_rationals(&a, &b, &c)
    }

    fn from_rationals(a: &Rational, b: &Rational, c: &Rational) -> Line {
        let l = a.denom().lcm(b.denom()).lcm(c.denom());
        let scale = |q: &Rational| q.numer() * (&l / q.denom());
        Line::normalized(scale(a), scale(b), scale(c))
    }

    fn normalized(a: BigInt, b: BigInt, c: BigInt) -> Line {
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
        }
        Line { a, b, c }
    }

    pub fn contains(&self, p: &Point) -> bool {
        let lhs = Rational::from(self.a.clone()) * p.x.clone()
            + Rational::from(self.b.clone()) * p.y.clone();
        lhs == Rational::from(self.c.clone())
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, self.c)
    }
}

/// Histogram of rich lines: `histogram[t]` counts lines with at least `t`
/// points, for `t = 2..=max_collinear`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RichLineProfile {
    pub histogram: BTreeMap<usize, usize>,
    pub max_collinear: usize,
}

/// Number of points on every line spanned by at least two points of the set.
fn line_multiplicities(set: &PointSet) -> HashMap<Line, usize> {
    let pts = set.points();
    let pair_counts = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut local: HashMap<Line, u64> = HashMap::new();
            for j in (i + 1)..pts.len() {
                *local.entry(Line::through(&pts[i], &pts[j])).or_default() += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (line, c) in b {
                *a.entry(line).or_default() += c;
            }
            a
        });
    // A line through m points carries m(m-1)/2 pairs.
    pair_counts
        .into_iter()
        .map(|(line, pairs)| {
            let m = ((1.0 + (1.0 + 8.0 * pairs as f64).sqrt()) / 2.0).round() as usize;
            debug_assert_eq!((m * (m - 1) / 2) as u64, pairs);
            (line, m)
        })
        .collect()
}

pub fn rich_line_profile(set: &PointSet) -> Result<RichLineProfile> {
    if set.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: set.len(),
        });
    }
    let mults = line_multiplicities(set);
    let max_collinear = mults.values().copied().max().unwrap_or(2);
    let mut exact = vec![0usize; max_collinear + 1];
    for &m in mults.values() {
        exact[m] += 1;
    }
    let mut histogram = BTreeMap::new();
    let mut running = 0;
    for t in (2..=max_collinear).rev() {
        running += exact[t];
        histogram.insert(t, running);
    }
    Ok(RichLineProfile {
        histogram,
        max_collinear,
    })
}

/// Classifies each pair `(p, q)` in `P x Q` by the `k` with
/// `2^k <= |line(p, q) ∩ Q| < 2^(k+1)`.
pub fn k_connected_stats(p_set: &PointSet, q_set: &PointSet) -> Result<BTreeMap<u32, u64>> {
    if !p_set.is_disjoint(q_set) {
        return Err(Error::NonDisjoint);
    }
    let on_line = line_multiplicities(q_set);
    let stats = p_set
        .points()
        .par_iter()
        .map(|p| {
            let mut local: BTreeMap<u32, u64> = BTreeMap::new();
            for q in q_set {
                let m = on_line.get(&Line::through(p, q)).copied().unwrap_or(1);
                *local.entry(m.ilog2()).or_default() += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            a
        });
    Ok(stats)
}
