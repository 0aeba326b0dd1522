use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point with exact rational coordinates. The derived order is
/// lexicographic in `(x, y)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        Point {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(x, y)
    }

    pub fn sub(&self, other: &Point) -> (Rational, Rational) {
        (&self.x - &other.x, &self.y - &other.y)
    }

    /// Reflection across the x-axis.
    pub fn mirror_x(&self) -> Point {
        Point {
            x: self.x.clone(),
            y: -&self.y,
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A finite set of distinct points, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Builds a set, rejecting duplicates.
    pub fn new(mut points: Vec<Point>) -> Result<Self> {
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].x.to_string(), w[0].y.to_string()));
        }
        Ok(PointSet { points })
    }

    /// Builds a set, silently merging duplicates.
    pub fn from_iter_dedup(points: impl IntoIterator<Item = Point>) -> Self {
        let mut points: Vec<Point> = points.into_iter().collect();
        points.sort();
        points.dedup();
        PointSet { points }
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        PointSet::new(coords.iter().map(|&(x, y)| Point::int(x, y)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        !self.points.iter().any(|p| other.contains(p))
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet::from_iter_dedup(self.points.iter().chain(other.points.iter()).cloned())
    }

    pub fn map(&self, f: impl Fn(&Point) -> Point) -> Result<PointSet> {
        PointSet::new(self.points.iter().map(f).collect())
    }

    /// Coordinates multiplied by the least common denominator, as integers.
    /// Angles and collinearity are invariant under this scaling.
    pub fn integer_coordinates(&self) -> Vec<(BigInt, BigInt)> {
        let lcm = self
            .points
            .iter()
            .flat_map(|p| [p.x.denom(), p.y.denom()])
            .fold(BigInt::one(), |acc, d| acc.lcm(d));
        let scale = |q: &Rational| q.numer() * (&lcm / q.denom());
        self.points.iter().map(|p| (scale(&p.x), scale(&p.y))).collect()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_rejected() {
        let err = PointSet::from_ints(&[(1, 1), (0, 0), (1, 1)]).unwrap_err();
        assert_eq!(err, Error::DuplicatePoint("1".into(), "1".into()));
    }

    #[test]
    fn points_are_sorted_lexicographically() {
        let s = PointSet::from_ints(&[(1, 0), (0, 5), (0, 1)]).unwrap();
        assert_eq!(s.points(), &[Point::int(0, 1), Point::int(0, 5), Point::int(1, 0)]);
        assert!(s.contains(&Point::int(0, 5)));
        assert!(!s.contains(&Point::int(5, 0)));
    }

    #[test]
    fn integer_coordinates_use_common_denominator() {
        let s = PointSet::new(vec![
            Point::new(Rational::frac(1, 2), Rational::frac(1, 3)),
            Point::int(1, 0),
        ])
        .unwrap();
        let ints = s.integer_coordinates();
        assert_eq!(ints[0], (BigInt::from(3), BigInt::from(2)));
        assert_eq!(ints[1], (BigInt::from(6), BigInt::from(0)));
    }
}
