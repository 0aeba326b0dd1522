#![allow(dead_code)]

use std::path::PathBuf;

use anglelab::constructions::Lcg;
use anglelab::geometry::{Point, PointSet};
use anglelab::Rational;

/// Float brute force: every angle via `atan2(|cross|, dot)`, sorted and
/// clustered at `tol`. Returns `None` when two clusters are closer than
/// `gap`, i.e. when floats cannot be trusted to separate them.
pub fn float_angle_oracle(set: &PointSet, gap: f64, tol: f64) -> Option<usize> {
    let pts: Vec<(f64, f64)> = set.iter().map(|p| (p.x.to_f64(), p.y.to_f64())).collect();
    let mut angles = Vec::new();
    for (qi, q) in pts.iter().enumerate() {
        for (pi, p) in pts.iter().enumerate() {
            for (ri, r) in pts.iter().enumerate().skip(pi + 1) {
                if pi == qi || ri == qi {
                    continue;
                }
                let (ux, uy) = (p.0 - q.0, p.1 - q.1);
                let (vx, vy) = (r.0 - q.0, r.1 - q.1);
                angles.push((ux * vy - uy * vx).abs().atan2(ux * vx + uy * vy));
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    let mut clusters = 0;
    let mut last: Option<f64> = None;
    for a in angles {
        match last {
            Some(prev) if a - prev <= tol => {}
            Some(prev) if a - prev < gap => return None,
            _ => clusters += 1,
        }
        last = Some(a);
    }
    Some(clusters)
}

/// A random rational point set of size `3..=max` with small coordinates.
pub fn random_rational_points(rng: &mut Lcg, max: usize) -> PointSet {
    let n = rng.range(3, max as i64) as usize;
    let mut pts = Vec::new();
    while pts.len() < n {
        let coord = |rng: &mut Lcg| Rational::frac(rng.range(-8, 8), rng.range(1, 3));
        let p = Point::new(coord(rng), coord(rng));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointSet::new(pts).unwrap()
}

pub fn random_rationals(rng: &mut Lcg, n: usize, positive: bool) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    while out.len() < n {
        let lo = if positive { 1 } else { -30 };
        let v = Rational::frac(rng.range(lo, 30), rng.range(1, 7));
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// A fresh scratch directory under the system temp dir.
pub fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("anglelab-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
