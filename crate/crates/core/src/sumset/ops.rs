use num_bigint::BigInt;
use num_traits::Pow;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::engine::{combo_cardinality, Cardinality, CoeffPattern, ComboOptions};
use super::set::ExactRealSet;
use crate::arctan::{ArcTanSumKey, Tangent};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `{x - y}` for rational sets.
pub fn difference_set(x: &ExactRealSet, y: &ExactRealSet) -> Result<ExactRealSet> {
    let (xs, ys) = (x.as_rationals()?, y.as_rationals()?);
    Ok(ExactRealSet::rationals(
        xs.iter().flat_map(|a| ys.iter().map(move |b| a - b)).collect::<Vec<_>>(),
    ))
}

/// `{arctan(u / v)}` as exact keys; this is `f(X - Y)` for
/// `f = arctan∘exp`, `X = log U`, `Y = log V` without any logarithms.
pub fn arctan_ratio_set(u: &ExactRealSet, v: &ExactRealSet) -> Result<ExactRealSet> {
    let (us, vs) = (u.as_rationals()?, v.as_rationals()?);
    if vs.iter().any(Rational::is_zero) {
        return Err(Error::DivisionByZero);
    }
    let keys: Vec<ArcTanSumKey> = us
        .par_iter()
        .flat_map_iter(|a| {
            vs.iter()
                .map(move |b| ArcTanSumKey::atan(Tangent::Finite(a.checked_div(b).expect("b != 0"))))
        })
        .collect();
    Ok(ExactRealSet::keys(keys))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GapSource {
    X,
    Y,
}

/// How real sets are presented: directly, or as logarithms of positive
/// rationals (`X = log U`), in which case differences become ratios.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Presentation {
    #[default]
    Additive,
    Ratio,
}

/// Smallest distance between elements two apart, with its witness.
/// In ratio presentation `u` is the ratio `u_{k+2} / u_k` (the gap is its log).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GapReport {
    pub u: Rational,
    pub source: GapSource,
    /// 1-based: the witness is `x_{k+2} - x_k`.
    pub k: usize,
}

fn check_ratio_form(values: &[Rational]) -> Result<()> {
    if values.iter().any(|v| !v.is_positive()) {
        return Err(Error::BadParams("ratio presentation needs positive rationals".into()));
    }
    Ok(())
}

fn best_gap(values: &[Rational], form: Presentation) -> Option<(Rational, usize)> {
    let mut best: Option<(Rational, usize)> = None;
    for k in 0..values.len().saturating_sub(2) {
        let g = match form {
            Presentation::Additive => &values[k + 2] - &values[k],
            Presentation::Ratio => &values[k + 2] / &values[k],
        };
        if best.as_ref().is_none_or(|(b, _)| g < *b) {
            best = Some((g, k + 1));
        }
    }
    best
}

/// Ties prefer `X`, then the smallest `k`.
pub fn near_neighbor_gap(
    x: &ExactRealSet,
    y: &ExactRealSet,
    form: Presentation,
) -> Result<GapReport> {
    let (xs, ys) = (x.as_rationals()?, y.as_rationals()?);
    if xs.len() < 3 && ys.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: xs.len().max(ys.len()),
        });
    }
    if form == Presentation::Ratio {
        check_ratio_form(xs)?;
        check_ratio_form(ys)?;
    }
    let gx = best_gap(xs, form);
    let gy = best_gap(ys, form);
    let report = match (gx, gy) {
        (Some((u, k)), None) => GapReport { u, source: GapSource::X, k },
        (None, Some((u, k))) => GapReport { u, source: GapSource::Y, k },
        (Some((ux, kx)), Some((uy, ky))) => {
            if uy < ux {
                GapReport { u: uy, source: GapSource::Y, k: ky }
            } else {
                GapReport { u: ux, source: GapSource::X, k: kx }
            }
        }
        (None, None) => unreachable!("one set has at least three elements"),
    };
    Ok(report)
}

/// The set `A` and shifts `h` handed to the expander theorem.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SqueezeSplit {
    pub a: ExactRealSet,
    pub h: [Rational; 3],
    pub case: u8,
    pub gap: GapReport,
    pub presentation: Presentation,
}

/// Case 1 (gap in `X` at `k`): `A = {-y_{2i}}`, `h = (x_k, x_{k+1}, x_{k+2})`.
/// Case 2 (gap in `Y`): `A = {x_{2i}}`, `h = (-y_{k+2}, -y_{k+1}, -y_k)`.
/// In ratio presentation negation becomes the reciprocal.
pub fn squeeze_case_split(
    x: &ExactRealSet,
    y: &ExactRealSet,
    form: Presentation,
) -> Result<SqueezeSplit> {
    let gap = near_neighbor_gap(x, y, form)?;
    let (xs, ys) = (x.as_rationals()?, y.as_rationals()?);
    let neg = |v: &Rational| match form {
        Presentation::Additive => -v,
        Presentation::Ratio => v.recip().expect("positive"),
    };
    let evens = |v: &[Rational]| -> Vec<Rational> { v.iter().skip(1).step_by(2).cloned().collect() };
    let k = gap.k - 1;
    let (a, h, case) = match gap.source {
        GapSource::X => (
            evens(ys).iter().map(neg).collect::<Vec<_>>(),
            [xs[k].clone(), xs[k + 1].clone(), xs[k + 2].clone()],
            1,
        ),
        GapSource::Y => (
            evens(xs),
            [neg(&ys[k + 2]), neg(&ys[k + 1]), neg(&ys[k])],
            2,
        ),
    };
    Ok(SqueezeSplit {
        a: ExactRealSet::rationals(a),
        h,
        case,
        gap,
        presentation: form,
    })
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PluenneckeReport {
    pub k: u32,
    pub l: u32,
    pub lhs: Cardinality,
    pub difference_size: u64,
    pub set_size: u64,
    /// `|S-S|^(k+l) / |S|^(k+l-1)` as a float, for display.
    pub rhs: f64,
    /// Exact comparison `lhs * |S|^(k+l-1) <= |S-S|^(k+l)`, using the
    /// certified upper bound of `lhs` when it is not resolved.
    pub holds: bool,
}

/// Checks `|kS - lS| <= |S-S|^(k+l) / |S|^(k+l-1)`.
pub fn pluennecke_check(
    s: &ExactRealSet,
    k: u32,
    l: u32,
    opts: &ComboOptions,
) -> Result<PluenneckeReport> {
    if k == 0 || l == 0 {
        return Err(Error::BadParams("k and l must be at least 1".into()));
    }
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sets = std::slice::from_ref(s);
    let lhs = combo_cardinality(sets, &CoeffPattern::new(vec![k as i64, -(l as i64)])?, opts)?;
    let diff = combo_cardinality(sets, &CoeffPattern::new(vec![1, -1])?, opts)?;
    // A smaller |S-S| only tightens the right side, so use its lower bound.
    let d = diff.lower;
    let n = s.len() as u64;
    let left = BigInt::from(lhs.upper) * Pow::pow(BigInt::from(n), k + l - 1);
    let right: BigInt = Pow::pow(BigInt::from(d), k + l);
    let rhs = (Rational::from(right.clone()) / Rational::from(Pow::pow(BigInt::from(n), k + l - 1)))
        .to_f64();
    Ok(PluenneckeReport {
        k,
        l,
        lhs,
        difference_size: d,
        set_size: n,
        rhs,
        holds: left <= right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn ints(v: &[i64]) -> ExactRealSet {
        ExactRealSet::ints(v)
    }

    fn atan(n: i64, d: i64) -> ArcTanSumKey {
        ArcTanSumKey::atan(Tangent::Finite(q(n, d)))
    }

    #[test]
    fn difference_examples() {
        assert_eq!(difference_set(&ints(&[0, 1]), &ints(&[0])).unwrap(), ints(&[0, 1]));
        assert_eq!(difference_set(&ints(&[0, 1, 2]), &ints(&[0, 1, 2])).unwrap().len(), 5);
        assert_eq!(
            difference_set(&ints(&[1, 2, 4]), &ints(&[1, 3])).unwrap(),
            ints(&[-2, -1, 0, 1, 3])
        );
    }

    #[test]
    fn ratio_set_examples() {
        let one = arctan_ratio_set(&ints(&[1]), &ints(&[1])).unwrap();
        assert_eq!(one, ExactRealSet::keys([atan(1, 1)]));
        let two = arctan_ratio_set(&ints(&[1, 2]), &ints(&[1, 2])).unwrap();
        assert_eq!(two, ExactRealSet::keys([atan(1, 2), atan(1, 1), atan(2, 1)]));
        assert_eq!(arctan_ratio_set(&ints(&[1, 2, 3]), &ints(&[1, 2, 3])).unwrap().len(), 7);
        assert_eq!(arctan_ratio_set(&ints(&[1]), &ints(&[0, 1])), Err(Error::DivisionByZero));
    }

    #[test]
    fn gap_examples() {
        let add = Presentation::Additive;
        let g = near_neighbor_gap(&ints(&[0, 1, 2]), &ints(&[0, 10, 20]), add).unwrap();
        assert_eq!(g, GapReport { u: q(2, 1), source: GapSource::X, k: 1 });
        let g = near_neighbor_gap(&ints(&[0, 5, 10]), &ints(&[0, 1, 2]), add).unwrap();
        assert_eq!(g, GapReport { u: q(2, 1), source: GapSource::Y, k: 1 });
        let x = ExactRealSet::rationals([q(0, 1), q(1, 1), q(2, 1), q(5, 2)]);
        let g = near_neighbor_gap(&x, &ints(&[0, 10, 20]), add).unwrap();
        assert_eq!(g, GapReport { u: q(3, 2), source: GapSource::X, k: 2 });
        assert!(matches!(
            near_neighbor_gap(&ints(&[0, 1]), &ints(&[0]), add),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn squeeze_examples() {
        let add = Presentation::Additive;
        let s = squeeze_case_split(&ints(&[0, 1, 2]), &ints(&[0, 10, 20]), add).unwrap();
        assert_eq!((s.case, s.a.clone(), s.h.clone()), (1, ints(&[-10]), [q(0, 1), q(1, 1), q(2, 1)]));
        let s = squeeze_case_split(&ints(&[0, 5, 10]), &ints(&[0, 1, 2]), add).unwrap();
        assert_eq!((s.case, s.a.clone(), s.h.clone()), (2, ints(&[5]), [q(-2, 1), q(-1, 1), q(0, 1)]));
        let s = squeeze_case_split(&ints(&[0, 1, 2]), &ints(&[0, 1, 2]), add).unwrap();
        assert_eq!((s.case, s.a.clone(), s.h.clone()), (1, ints(&[-1]), [q(0, 1), q(1, 1), q(2, 1)]));
    }

    #[test]
    fn ratio_squeeze_mirrors_additive_on_logs() {
        // X = log{1,2,4,8}, Y = log{1,3,9}: the ratio gap 4 beats 9.
        let s = squeeze_case_split(&ints(&[1, 2, 4, 8]), &ints(&[1, 3, 9]), Presentation::Ratio)
            .unwrap();
        assert_eq!(s.gap, GapReport { u: q(4, 1), source: GapSource::X, k: 1 });
        assert_eq!(s.case, 1);
        assert_eq!(s.a, ExactRealSet::rationals([q(1, 3)]));
        assert_eq!(s.h, [q(1, 1), q(2, 1), q(4, 1)]);
    }

    #[test]
    fn pluennecke_examples() {
        let o = ComboOptions::default();
        let r = pluennecke_check(&ints(&[0]), 4, 3, &o).unwrap();
        assert_eq!((r.lhs.lower, r.rhs, r.holds), (1, 1.0, true));
        let r = pluennecke_check(&ints(&[1, 2, 3, 4, 5]), 4, 3, &o).unwrap();
        assert_eq!(r.lhs.lower, 29);
        assert!((r.rhs - 9f64.powi(7) / 5f64.powi(6)).abs() < 1e-9 && r.holds);
        let s = ExactRealSet::keys([atan(1, 1), atan(2, 1)]);
        let r = pluennecke_check(&s, 4, 3, &o).unwrap();
        assert_eq!((r.lhs.lower, r.difference_size), (8, 3));
        assert!((r.rhs - 3f64.powi(7) / 64.0).abs() < 1e-9 && r.holds);
    }
}
