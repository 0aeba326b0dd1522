use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::direction::{direction_set, Direction};
use super::point::{Point, PointSet};
use crate::arctan::{key_add, key_negate, ArcTanSumKey};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exact identity of an unsigned angle in `[0, pi]`: the sign of its cosine
/// and the squared cosine. `cos = cos_sign * sqrt(cos_squared)` is injective
/// on `[0, pi]`, so equal keys mean equal angles.
///
/// `Ord` is the order of the angles themselves (0 first, pi last).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AngleKey {
    pub cos_sign: i8,
    pub cos_squared: Rational,
}

impl AngleKey {
    fn signed_value(&self) -> Rational {
        if self.cos_sign < 0 {
            -&self.cos_squared
        } else {
            self.cos_squared.clone()
        }
    }

    /// The angle in radians, for display.
    pub fn radians(&self) -> f64 {
        let c = self.cos_squared.to_f64().sqrt() * self.cos_sign as f64;
        c.clamp(-1.0, 1.0).acos()
    }
}

impl Ord for AngleKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // Larger cosine means smaller angle.
        other.signed_value().cmp(&self.signed_value())
    }
}

impl PartialOrd for AngleKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Key of the angle at `q` between rays `q->p` and `q->r`.
pub fn angle_key(p: &Point, q: &Point, r: &Point) -> Result<AngleKey> {
    if p == q || r == q || p == r {
        return Err(Error::DegenerateTriple);
    }
    let (ux, uy) = p.sub(q);
    let (vx, vy) = r.sub(q);
    let d = &ux * &vx + &uy * &vy;
    let n = (&ux * &ux + &uy * &uy) * (&vx * &vx + &vy * &vy);
    let cos_squared = (&d * &d).checked_div(&n)?;
    Ok(AngleKey {
        cos_sign: d.signum(),
        cos_squared,
    })
}

/// Hashable raw key built from integer coordinates; small inputs stay in
/// machine words.
#[derive(Clone, PartialEq, Eq, Hash)]
enum RawKey {
    Small(i8, u128, u128),
    Big(i8, BigInt, BigInt),
}

impl RawKey {
    fn into_angle_key(self) -> AngleKey {
        match self {
            RawKey::Small(s, n, d) => AngleKey {
                cos_sign: s,
                cos_squared: Rational::new(BigInt::from(n), BigInt::from(d)).expect("d > 0"),
            },
            RawKey::Big(s, n, d) => AngleKey {
                cos_sign: s,
                cos_squared: Rational::new(n, d).expect("d > 0"),
            },
        }
    }
}

/// Integer coordinates of a point set, in machine words when every
/// coordinate is below 2^28 in magnitude (then all products fit in `u128`).
enum Coords {
    Small(Vec<(i64, i64)>),
    Big(Vec<(BigInt, BigInt)>),
}

const SMALL_LIMIT: i64 = 1 << 28;

impl Coords {
    fn of(set: &PointSet) -> Coords {
        let big = set.integer_coordinates();
        let small: Option<Vec<(i64, i64)>> = big
            .iter()
            .map(|(x, y)| {
                let (x, y) = (x.to_i64()?, y.to_i64()?);
                (x.abs() < SMALL_LIMIT && y.abs() < SMALL_LIMIT).then_some((x, y))
            })
            .collect();
        match small {
            Some(s) => Coords::Small(s),
            None => Coords::Big(big),
        }
    }

    fn len(&self) -> usize {
        match self {
            Coords::Small(v) => v.len(),
            Coords::Big(v) => v.len(),
        }
    }

    /// Key at apex `q` for rays to `p` and `r` (indices, pairwise distinct).
    fn key(&self, p: usize, q: usize, r: usize) -> RawKey {
        match self {
            Coords::Small(c) => {
                let (ux, uy) = ((c[p].0 - c[q].0) as i128, (c[p].1 - c[q].1) as i128);
                let (vx, vy) = ((c[r].0 - c[q].0) as i128, (c[r].1 - c[q].1) as i128);
                let d = ux * vx + uy * vy;
                let n = ((ux * ux + uy * uy) as u128) * ((vx * vx + vy * vy) as u128);
                let d2 = d.unsigned_abs() * d.unsigned_abs();
                let g = d2.gcd(&n);
                RawKey::Small(d.signum() as i8, d2 / g, n / g)
            }
            Coords::Big(c) => {
                let (ux, uy) = (&c[p].0 - &c[q].0, &c[p].1 - &c[q].1);
                let (vx, vy) = (&c[r].0 - &c[q].0, &c[r].1 - &c[q].1);
                let d = &ux * &vx + &uy * &vy;
                let n = (&ux * &ux + &uy * &uy) * (&vx * &vx + &vy * &vy);
                let d2 = &d * &d;
                let g = d2.gcd(&n);
                let sign = if d.is_zero() {
                    0
                } else if d.is_positive() {
                    1
                } else {
                    -1
                };
                RawKey::Big(sign, d2 / &g, n / g)
            }
        }
    }

    fn apex_keys(&self, q: usize) -> HashSet<RawKey> {
        let n = self.len();
        let mut out = HashSet::new();
        for p in 0..n {
            if p == q {
                continue;
            }
            for r in (p + 1)..n {
                if r == q {
                    continue;
                }
                out.insert(self.key(p, q, r));
            }
        }
        out
    }
}

fn collect_keys(sets: impl ParallelIterator<Item = HashSet<RawKey>>) -> BTreeSet<AngleKey> {
    let merged = sets.reduce(HashSet::new, |a, b| {
        if a.len() < b.len() {
            merge(b, a)
        } else {
            merge(a, b)
        }
    });
    merged.into_iter().map(RawKey::into_angle_key).collect()
}

fn merge(mut a: HashSet<RawKey>, b: HashSet<RawKey>) -> HashSet<RawKey> {
    a.extend(b);
    a
}

/// Number of distinct unsigned angles over all triples of distinct points,
/// and the keys themselves in angle order. Work is split by apex across the
/// rayon pool; the result does not depend on the split.
pub fn distinct_angle_count(set: &PointSet) -> Result<(usize, BTreeSet<AngleKey>)> {
    if set.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: set.len(),
        });
    }
    let coords = Coords::of(set);
    let keys = collect_keys((0..set.len()).into_par_iter().map(|q| coords.apex_keys(q)));
    Ok((keys.len(), keys))
}

/// Whether apex counting compares unsigned angles or signed differences of
/// slope angles.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ApexMode {
    Unsigned,
    /// `vertical` enables the exact pi/2 key for vertical slopes.
    Signed { vertical: bool },
}

impl Default for ApexMode {
    fn default() -> Self {
        ApexMode::Signed { vertical: true }
    }
}

/// Distinct angles with apex `q`.
///
/// Unsigned: keys over unordered pairs `{p, r}` of other points. Signed:
/// distinct values `arctan(slope(p, q)) - arctan(slope(r, q))` over ordered
/// pairs, including `p = r`.
pub fn apex_angle_count(set: &PointSet, q: &Point, mode: ApexMode) -> Result<usize> {
    match mode {
        ApexMode::Unsigned => {
            let pos = set.points().binary_search(q).map_err(|_| Error::ApexNotInSet)?;
            let coords = Coords::of(set);
            Ok(coords.apex_keys(pos).len())
        }
        ApexMode::Signed { vertical } => Ok(signed_apex_values(set, q, vertical)?.len()),
    }
}

/// The signed apex values as exact keys.
pub fn signed_apex_values(
    set: &PointSet,
    q: &Point,
    vertical: bool,
) -> Result<BTreeSet<ArcTanSumKey>> {
    if !set.contains(q) {
        return Err(Error::ApexNotInSet);
    }
    let others = PointSet::from_iter_dedup(set.iter().filter(|p| *p != q).cloned());
    let directions = direction_set(q, &others)?;
    if !vertical && directions.contains(&Direction::Infinite) {
        return Err(Error::VerticalSlopeUnsupported);
    }
    let atans: Vec<ArcTanSumKey> = directions
        .iter()
        .map(|d| ArcTanSumKey::atan(d.to_tangent()))
        .collect();
    Ok(difference_keys(&atans))
}

/// `{a - b : a, b in keys}`, computed in parallel by rows.
pub(crate) fn difference_keys(keys: &[ArcTanSumKey]) -> BTreeSet<ArcTanSumKey> {
    let negated: Vec<ArcTanSumKey> = keys.iter().map(key_negate).collect();
    keys.par_iter()
        .map(|a| {
            negated
                .iter()
                .map(|nb| key_add(a, nb))
                .collect::<HashSet<_>>()
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        })
        .into_iter()
        .collect()
}
