//! Angle counting for points whose coordinates are only known as certified
//! enclosures. Disjoint enclosures prove distinct angles, so the number of
//! connected components of the enclosures is a certified lower bound on the
//! number of distinct angles.

use rayon::prelude::*;

use crate::arctan::{Dyadic, DyadicInterval};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct IntervalPoint {
    pub x: DyadicInterval,
    pub y: DyadicInterval,
}

fn square(x: &DyadicInterval) -> DyadicInterval {
    match x.certain_sign() {
        Some(_) => x.mul(x),
        None => {
            let m = x.lo().abs().max(x.hi().abs());
            let top = DyadicInterval::point(m, x.precision_bits());
            let sq = top.mul(&top);
            DyadicInterval::new(Dyadic::zero(), sq.hi().clone(), x.precision_bits())
                .expect("0 <= m^2")
        }
    }
}

/// Enclosure of `cos(angle) * |cos(angle)|` at apex `q`, which is decreasing
/// in the angle and so separates angles exactly like the exact key does.
pub fn angle_proxy(p: &IntervalPoint, q: &IntervalPoint, r: &IntervalPoint) -> Result<DyadicInterval> {
    let (ux, uy) = (p.x.sub(&q.x), p.y.sub(&q.y));
    let (vx, vy) = (r.x.sub(&q.x), r.y.sub(&q.y));
    let d = ux.mul(&vx).add(&uy.mul(&vy));
    let n = square(&ux).add(&square(&uy)).mul(&square(&vx).add(&square(&vy)));
    d.signed_square().div(&n)
}

/// Proxies for every apex and unordered pair of other points.
pub fn angle_enclosures(points: &[IntervalPoint]) -> Result<Vec<DyadicInterval>> {
    let n = points.len();
    let per_apex: Vec<Result<Vec<DyadicInterval>>> = (0..n)
        .into_par_iter()
        .map(|q| {
            let mut out = Vec::new();
            for p in 0..n {
                for r in (p + 1)..n {
                    if p != q && r != q {
                        out.push(angle_proxy(&points[p], &points[q], &points[r])?);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for chunk in per_apex {
        all.extend(chunk?);
    }
    Ok(all)
}

/// Number of connected components of a union of closed intervals.
pub fn count_components(mut intervals: Vec<DyadicInterval>) -> usize {
    intervals.sort_by(|a, b| a.lo().cmp(b.lo()));
    let mut count = 0;
    let mut reach: Option<Dyadic> = None;
    for iv in intervals {
        match &reach {
            Some(r) if iv.lo() <= r => {
                if iv.hi() > r {
                    reach = Some(iv.hi().clone());
                }
            }
            _ => {
                count += 1;
                reach = Some(iv.hi().clone());
            }
        }
    }
    count
}
