use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::point::{Point, PointSet};
use crate::arctan::Tangent;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Slope of a line; `Infinite` is vertical. Finite slopes sort before it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Slope(Rational),
    Infinite,
}

impl Direction {
    /// Direction of the line through two distinct points.
    pub fn between(p: &Point, q: &Point) -> Direction {
        let dx = &q.x - &p.x;
        if dx.is_zero() {
            Direction::Infinite
        } else {
            Direction::Slope((&q.y - &p.y).checked_div(&dx).expect("dx != 0"))
        }
    }

    /// The slope as a tangent value (vertical is the pole).
    pub fn to_tangent(&self) -> Tangent {
        match self {
            Direction::Slope(q) => Tangent::Finite(q.clone()),
            Direction::Infinite => Tangent::Infinite,
        }
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Slope(q) => write!(f, "{q}"),
            Direction::Infinite => f.write_str("inf"),
        }
    }
}

/// Distinct slopes from `p` to the points of `q_set`.
pub fn direction_set(p: &Point, q_set: &PointSet) -> Result<BTreeSet<Direction>> {
    if q_set.contains(p) {
        return Err(Error::PointInQ);
    }
    Ok(q_set.iter().map(|q| Direction::between(p, q)).collect())
}

fn direction_count(p: &Point, q_set: &PointSet) -> usize {
    q_set
        .iter()
        .map(|q| Direction::between(p, q))
        .collect::<HashSet<_>>()
        .len()
}

/// The point of `p_set` seeing the most distinct directions to `q_set`, by
/// exhaustive search. Ties go to the lexicographically smallest point.
pub fn beck_apex(p_set: &PointSet, q_set: &PointSet) -> Result<(Point, usize)> {
    if p_set.is_empty() || q_set.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !p_set.is_disjoint(q_set) {
        return Err(Error::NonDisjoint);
    }
    let counts: Vec<usize> = p_set
        .points()
        .par_iter()
        .map(|p| direction_count(p, q_set))
        .collect();
    // Points are sorted, so the first maximum is the lexicographic tie-break.
    let (best, count) = counts
        .iter()
        .enumerate()
        .fold((0, 0), |(bi, bc), (i, &c)| if c > bc { (i, c) } else { (bi, bc) });
    Ok((p_set.points()[best].clone(), count))
}
