//! Point-set and base-set generators: Cartesian products, the two
//! degenerate families with linearly many angles, and seeded random sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arctan::elementary::sin_cos_turns;
use crate::arctan::{ArcTanSumKey, DyadicInterval, Tangent};
use crate::error::{Error, Result};
use crate::geometry::{angle_enclosures, count_components, IntervalPoint, Point, PointSet};
use crate::rational::Rational;
use crate::sumset::Cardinality;

/// 64-bit linear congruential generator (Knuth's MMIX constants):
/// `state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
/// output is the high 32 bits of the new state.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        (self.state >> 32) as u32
    }

    pub fn next_u64(&mut self) -> u64 {
        ((self.next_u32() as u64) << 32) | self.next_u32() as u64
    }

    /// Uniform-ish integer in `[lo, hi]` (modulo reduction of `next_u64`).
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi as i128 - lo as i128 + 1) as u128;
        (lo as i128 + (self.next_u64() as u128 % span) as i128) as i64
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Provenance {
    IntervalRange,
    Geometric,
    Random { seed: u64 },
    Explicit,
}

/// A finite set of reals: ascending, distinct.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BaseSet {
    pub values: Vec<Rational>,
    pub provenance: Provenance,
}

impl BaseSet {
    pub fn explicit(values: impl IntoIterator<Item = Rational>) -> Self {
        let values: BTreeSet<Rational> = values.into_iter().collect();
        BaseSet {
            values: values.into_iter().collect(),
            provenance: Provenance::Explicit,
        }
    }

    pub fn ints(values: &[i64]) -> Self {
        Self::explicit(values.iter().map(|&v| Rational::from(v)))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum BaseSpec {
    /// `{1, ..., n}`
    Range,
    /// `{1, r, ..., r^(n-1)}`, `r > 1`
    Geometric { ratio: Rational },
    /// `n` distinct integers drawn from `[lo, hi]` by [`Lcg`].
    Random { seed: u64, lo: i64, hi: i64 },
}

pub fn generate_base_set(spec: &BaseSpec, n: usize) -> Result<BaseSet> {
    if n == 0 {
        return Err(Error::BadParams("n must be at least 1".into()));
    }
    match spec {
        BaseSpec::Range => Ok(BaseSet {
            values: (1..=n as i64).map(Rational::from).collect(),
            provenance: Provenance::IntervalRange,
        }),
        BaseSpec::Geometric { ratio } => {
            if *ratio <= Rational::one() {
                return Err(Error::BadParams(format!("geometric ratio {ratio} must exceed 1")));
            }
            Ok(BaseSet {
                values: (0..n as i32).map(|k| ratio.pow(k)).collect(),
                provenance: Provenance::Geometric,
            })
        }
        BaseSpec::Random { seed, lo, hi } => {
            if lo > hi || ((*hi as i128 - *lo as i128 + 1) as u128) < n as u128 {
                return Err(Error::BadParams(format!(
                    "cannot draw {n} distinct integers from [{lo}, {hi}]"
                )));
            }
            let mut rng = Lcg::new(*seed);
            let mut seen = BTreeSet::new();
            while seen.len() < n {
                seen.insert(rng.range(*lo, *hi));
            }
            Ok(BaseSet {
                values: seen.into_iter().map(Rational::from).collect(),
                provenance: Provenance::Random { seed: *seed },
            })
        }
    }
}

pub fn cartesian_product(base: &BaseSet) -> Result<PointSet> {
    if base.is_empty() {
        return Err(Error::EmptyBase);
    }
    let v = &base.values;
    PointSet::new(
        v.iter()
            .flat_map(|x| v.iter().map(move |y| Point::new(x.clone(), y.clone())))
            .collect(),
    )
}

/// `n - 1` points equally spaced on the unit circle (point `k` at `k/(n-1)`
/// turns) plus the origin, as certified enclosures at `bits` precision.
pub fn circle_with_center(n: usize, bits: u32) -> Result<Vec<IntervalPoint>> {
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    let m = (n - 1) as i64;
    let w = bits + 16;
    let mut out = vec![IntervalPoint {
        x: DyadicInterval::zero(bits),
        y: DyadicInterval::zero(bits),
    }];
    for k in 0..m {
        let (s, c) = sin_cos_turns(&Rational::frac(k, m), w);
        out.push(IntervalPoint {
            x: DyadicInterval::from_fixed(c.0, c.1, w, bits),
            y: DyadicInterval::from_fixed(s.0, s.1, w, bits),
        });
    }
    Ok(out)
}

/// Every angle of the circle-with-center configuration in turns, from
/// elementary geometry: central angles at the origin, base angles of the
/// isosceles triangles `O P_k P_j`, and inscribed angles (half the arc not
/// containing the apex).
pub fn circle_angle_turns(n: usize) -> Result<BTreeSet<Rational>> {
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    let m = (n - 1) as i64;
    let central = |i: i64, j: i64| {
        let d = (i - j).rem_euclid(m);
        Rational::frac(d.min(m - d), m)
    };
    let mut out = BTreeSet::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let c = central(i, j);
            out.insert(Rational::frac(1, 4) - &c / &Rational::from(2));
            out.insert(c);
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in (i + 1)..m {
                if i == k || j == k {
                    continue;
                }
                // Arc from i to j counterclockwise; if it contains k take the other one.
                let ccw = (j - i).rem_euclid(m);
                let contains_k = (k - i).rem_euclid(m) < ccw;
                let arc = if contains_k { m - ccw } else { ccw };
                out.insert(Rational::frac(arc, 2 * m));
            }
        }
    }
    Ok(out)
}

/// Distinct angles of `circle_with_center(n)`. The lower bound counts
/// disjoint enclosure components (certified); the upper bound is the exact
/// count from [`circle_angle_turns`]. Precision doubles from 64 bits until
/// they agree or `max_bits` is reached.
pub fn circle_angle_count(n: usize, max_bits: u32) -> Result<Cardinality> {
    let upper = circle_angle_turns(n)?.len() as u64;
    let mut bits = 64.min(max_bits);
    loop {
        let lower = count_components(angle_enclosures(&circle_with_center(n, bits)?)?) as u64;
        if lower == upper || bits >= max_bits {
            return Ok(Cardinality {
                lower,
                upper,
                resolved: lower == upper,
                precision_bits: Some(bits),
            });
        }
        bits = (bits * 2).min(max_bits);
    }
}

/// `n - 2` points `(tan(k θ), 0)`, `θ = arctan t`, `k = 1..n-2`, plus
/// `(0, 1)` and `(0, -1)`. The slopes from `(0, 1)` to the line points are
/// `tan(k θ - π/2)`, an arithmetic progression of angles. Requires every
/// `k θ` to stay in `(0, π)` away from `π/2`.
pub fn line_with_symmetric_pair(n: usize, t: &Rational) -> Result<PointSet> {
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    if !t.is_positive() {
        return Err(Error::BadParams(format!("t = {t} must be positive")));
    }
    let step = ArcTanSumKey::atan(Tangent::Finite(t.clone()));
    let mut acc = ArcTanSumKey::zero();
    let mut points = vec![Point::int(0, 1), Point::int(0, -1)];
    for k in 1..=(n - 2) {
        acc = acc.add(&step);
        let x = match (acc.wrap, &acc.tangent) {
            (0, Tangent::Finite(x)) if x.is_positive() => x.clone(),
            (1, Tangent::Finite(x)) if x.is_negative() => x.clone(),
            _ => return Err(Error::AngleOverflow { step: k }),
        };
        points.push(Point::new(x, 0));
    }
    PointSet::new(points)
}

/// A point-set family for sweeps and the CLI.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum ConstructionSpec {
    /// `{0..n-1}^2`
    Grid { n: usize },
    /// `B x B`
    Cartesian { base: BaseSet },
    CircleCenter { n: usize },
    LineSymmetricPair { n: usize, t: Rational },
    /// `n` distinct integer points in `[0, range]^2`.
    Random { n: usize, seed: u64, range: i64 },
}

impl ConstructionSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionSpec::Grid { .. } => "grid",
            ConstructionSpec::Cartesian { .. } => "cartesian",
            ConstructionSpec::CircleCenter { .. } => "circle_center",
            ConstructionSpec::LineSymmetricPair { .. } => "line_symmetric_pair",
            ConstructionSpec::Random { .. } => "random",
        }
    }

    /// Exact point set; the circle family has no exact form and is rejected.
    pub fn build(&self) -> Result<PointSet> {
        match self {
            ConstructionSpec::Grid { n } => {
                cartesian_product(&BaseSet::explicit((0..*n as i64).map(Rational::from)))
            }
            ConstructionSpec::Cartesian { base } => cartesian_product(base),
            ConstructionSpec::CircleCenter { .. } => Err(Error::BadParams(
                "circle_center has irrational coordinates; use circle_angle_count".into(),
            )),
            ConstructionSpec::LineSymmetricPair { n, t } => line_with_symmetric_pair(*n, t),
            ConstructionSpec::Random { n, seed, range } => random_points(*n, *seed, *range),
        }
    }
}

/// `n` distinct integer points with coordinates in `[0, range]`.
pub fn random_points(n: usize, seed: u64, range: i64) -> Result<PointSet> {
    let cells = (range as i128 + 1) * (range as i128 + 1);
    if range < 0 || cells < n as i128 {
        return Err(Error::BadParams(format!("cannot place {n} points in [0, {range}]^2")));
    }
    let mut rng = Lcg::new(seed);
    let mut seen = BTreeSet::new();
    while seen.len() < n {
        seen.insert((rng.range(0, range), rng.range(0, range)));
    }
    PointSet::new(seen.into_iter().map(|(x, y)| Point::int(x, y)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{distinct_angle_count, signed_apex_values};

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn lcg_reference_sequence() {
        let mut r = Lcg::new(0);
        // state1 = c, state2 = a*c + c (mod 2^64)
        assert_eq!(r.next_u32(), (Lcg::INCREMENT >> 32) as u32);
        let s2 = Lcg::INCREMENT
            .wrapping_mul(Lcg::MULTIPLIER)
            .wrapping_add(Lcg::INCREMENT);
        assert_eq!(r.next_u32(), (s2 >> 32) as u32);
    }

    #[test]
    fn base_set_examples() {
        assert_eq!(generate_base_set(&BaseSpec::Range, 4).unwrap().values, BaseSet::ints(&[1, 2, 3, 4]).values);
        let g = generate_base_set(&BaseSpec::Geometric { ratio: q(2, 1) }, 3).unwrap();
        assert_eq!(g.values, BaseSet::ints(&[1, 2, 4]).values);
        let spec = BaseSpec::Random { seed: 42, lo: 1, hi: 1_000_000 };
        let a = generate_base_set(&spec, 5).unwrap();
        assert_eq!(a, generate_base_set(&spec, 5).unwrap());
        assert_eq!(a.len(), 5);
        assert!(a.values.windows(2).all(|w| w[0] < w[1]));
        assert!(generate_base_set(&BaseSpec::Geometric { ratio: q(1, 1) }, 3).is_err());
        assert!(generate_base_set(&BaseSpec::Random { seed: 1, lo: 1, hi: 3 }, 5).is_err());
    }

    #[test]
    fn cartesian_examples() {
        let p = cartesian_product(&BaseSet::ints(&[0, 1])).unwrap();
        assert_eq!(p, PointSet::from_ints(&[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap());
        assert_eq!(cartesian_product(&BaseSet::ints(&[1, 2, 3])).unwrap().len(), 9);
        assert_eq!(cartesian_product(&BaseSet::ints(&[1, 2, 4, 8])).unwrap().len(), 16);
        assert_eq!(cartesian_product(&BaseSet::ints(&[])), Err(Error::EmptyBase));
    }

    #[test]
    fn circle_five_is_square_plus_center() {
        let pts = circle_with_center(5, 64).unwrap();
        assert!(pts.iter().all(|p| p.x.is_point() && p.y.is_point()));
        let exact = PointSet::from_ints(&[(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)]).unwrap();
        let truth = distinct_angle_count(&exact).unwrap().0 as u64;
        let c = circle_angle_count(5, 1024).unwrap();
        assert!(c.resolved);
        assert_eq!(c.lower, truth);
        assert_eq!(circle_angle_count(3, 64), Err(Error::TooFewPoints { needed: 4, got: 3 }));
    }

    #[test]
    fn circle_counts_resolve() {
        for n in [4, 9, 17] {
            let c = circle_angle_count(n, 1024).unwrap();
            assert!(c.resolved, "n = {n}: {c:?}");
            assert!(c.lower <= 2 * n as u64, "n = {n}: {}", c.lower);
        }
    }

    #[test]
    fn line_family_examples() {
        let p = line_with_symmetric_pair(5, &q(1, 10)).unwrap();
        let xs: Vec<Rational> = p.iter().filter(|pt| pt.y.is_zero()).map(|pt| pt.x.clone()).collect();
        // tan(3θ) = (1/10 + 20/99) / (1 - 2/99) = 299/970
        assert_eq!(xs, vec![q(1, 10), q(20, 99), q(299, 970)]);
        assert_eq!(
            line_with_symmetric_pair(4, &q(1, 1)),
            Err(Error::AngleOverflow { step: 2 })
        );
    }

    #[test]
    fn line_family_apex_count() {
        let p = line_with_symmetric_pair(6, &q(1, 10)).unwrap();
        let line_only = PointSet::from_iter_dedup(
            p.iter().filter(|pt| pt.y.is_zero() || **pt == Point::int(0, 1)).cloned(),
        );
        let values = signed_apex_values(&line_only, &Point::int(0, 1), true).unwrap();
        assert_eq!(values.len(), 2 * (6 - 3) + 1);
    }

    #[test]
    fn line_family_directions_form_an_arithmetic_progression() {
        let t = q(1, 10);
        let p = line_with_symmetric_pair(12, &t).unwrap();
        let apex = Point::int(0, 1);
        let mut keys: Vec<ArcTanSumKey> = p
            .iter()
            .filter(|pt| pt.y.is_zero())
            .map(|pt| {
                let slope = (&pt.y - &apex.y).checked_div(&(&pt.x - &apex.x)).unwrap();
                ArcTanSumKey::atan(Tangent::Finite(slope))
            })
            .collect();
        keys.sort();
        let step = ArcTanSumKey::atan(Tangent::Finite(t));
        for w in keys.windows(2) {
            assert_eq!(w[1].sub(&w[0]), step);
        }
    }
}
