//! End-to-end trace of the many-angles argument on a concrete base set `B`:
//! split, pick a rich apex, turn its directions into an arctangent set `T`,
//! and evaluate the sumset chain on `T`.

use num_bigint::BigInt;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::constructions::{cartesian_product, BaseSet};
use crate::error::{Error, Result};
use crate::geometry::{beck_apex, direction_set, signed_apex_values, Point, PointSet};
use crate::rational::Rational;
use crate::sumset::{
    arctan_ratio_set, combo_cardinality, expander_check, squeeze_case_split, Cardinality,
    CoeffPattern, ComboOptions, ExactRealSet, ExpanderInput, ExpanderReport, Presentation,
    SqueezeSplit,
};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SplitResult {
    pub b1: BaseSet,
    pub b2: BaseSet,
}

/// Sorts `B`, drops the median when `|B|` is odd, and halves it so that
/// `max B1 < min B2`.
pub fn split_b(b: &BaseSet) -> Result<SplitResult> {
    let mut v = b.values.clone();
    v.sort();
    v.dedup();
    if v.len() < 4 {
        return Err(Error::TooFewElements { needed: 4, got: v.len() });
    }
    if v.len() % 2 == 1 {
        v.remove(v.len() / 2);
    }
    let upper = v.split_off(v.len() / 2);
    let part = |values: Vec<Rational>| BaseSet {
        values,
        provenance: b.provenance.clone(),
    };
    Ok(SplitResult {
        b1: part(v),
        b2: part(upper),
    })
}

/// One inequality of the chain with its concrete values.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ChainEntry {
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// The informational expander-theorem path on `X = log(B2 - b)`,
/// `Y = log(B2 - a)` in ratio form.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Theorem3Path {
    pub split: Option<SqueezeSplit>,
    pub expander: Option<ExpanderReport>,
    pub error: Option<String>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PipelineReport {
    pub b_size: usize,
    pub split: SplitResult,
    pub apex: Point,
    pub direction_count: u64,
    pub ratio_set_size: u64,
    pub apex_signed_angle_count: u64,
    /// Independent count from the geometry layer over `Q ∪ {apex}`.
    pub geometry_signed_angle_count: u64,
    pub difference: Cardinality,
    /// `|4T - 3T|`; `None` when the staged convolution exceeds the budget.
    pub seven_fold: Option<Cardinality>,
    pub seven_fold_error: Option<String>,
    pub pluennecke_rhs: f64,
    pub pluennecke_holds: Option<bool>,
    pub key_bound: f64,
    pub final_lower_bound: Option<f64>,
    pub target: f64,
    /// `|T| = D`
    pub invariant_size: bool,
    /// `|T - T|` equals the geometry layer's signed apex count.
    pub invariant_cross_module: bool,
    pub chain: Vec<ChainEntry>,
    pub theorem3: Theorem3Path,
    pub resolved: bool,
}

fn within(c: &Cardinality, v: u64) -> bool {
    c.lower <= v && v <= c.upper
}

pub fn run_pipeline(b: &BaseSet, opts: &ComboOptions) -> Result<PipelineReport> {
    let split = split_b(b)?;
    let p_set = cartesian_product(&split.b1)?;
    let q_set = cartesian_product(&split.b2)?;
    let (apex, _) = beck_apex(&p_set, &q_set)?;
    let direction_count = direction_set(&apex, &q_set)?.len() as u64;

    let b2 = ExactRealSet::rationals(split.b2.values.clone());
    let x_set = b2.translate_rational(&-&apex.y)?;
    let y_set = b2.translate_rational(&-&apex.x)?;
    let t = arctan_ratio_set(&x_set, &y_set)?;
    let t_size = t.len() as u64;

    let sets = std::slice::from_ref(&t);
    let difference = combo_cardinality(sets, &CoeffPattern::new(vec![1, -1])?, opts)?;
    let with_apex = q_set.union(&PointSet::new(vec![apex.clone()])?);
    let geometry_count = signed_apex_values(&with_apex, &apex, true)?.len() as u64;

    let (seven_fold, seven_fold_error) =
        match combo_cardinality(sets, &CoeffPattern::new(vec![4, -3])?, opts) {
            Ok(c) => (Some(c), None),
            Err(e @ Error::PipelineInfeasible { .. }) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };

    let d = difference.lower;
    let n6 = Pow::pow(BigInt::from(t_size), 6u32);
    let d7 = Pow::pow(BigInt::from(d), 7u32);
    let pluennecke_rhs = (Rational::from(d7.clone()) / Rational::from(n6.clone())).to_f64();
    let pluennecke_holds = seven_fold
        .as_ref()
        .map(|s| BigInt::from(s.upper) * &n6 <= d7);
    let final_lower_bound = seven_fold
        .as_ref()
        .map(|s| (s.lower as f64 * (t_size as f64).powi(6)).powf(1.0 / 7.0));
    let key_bound = (split.b2.len() as f64).powf(2.5);
    let target = (b.len() as f64).powf(2.0 + 1.0 / 14.0);

    let invariant_size = t_size == direction_count;
    let invariant_cross_module = within(&difference, geometry_count);

    let mut chain = vec![
        ChainEntry {
            inequality: "|T| = D".into(),
            lhs: t_size as f64,
            rhs: direction_count as f64,
            holds: invariant_size,
        },
        ChainEntry {
            inequality: "|T-T| = |signed apex angles|".into(),
            lhs: d as f64,
            rhs: geometry_count as f64,
            holds: invariant_cross_module,
        },
    ];
    if let (Some(s), Some(holds), Some(lb)) = (&seven_fold, pluennecke_holds, final_lower_bound) {
        chain.push(ChainEntry {
            inequality: "|4T-3T| <= |T-T|^7 / |T|^6".into(),
            lhs: s.upper as f64,
            rhs: pluennecke_rhs,
            holds,
        });
        chain.push(ChainEntry {
            inequality: "|T-T| >= (|4T-3T| |T|^6)^(1/7)".into(),
            lhs: d as f64,
            rhs: lb,
            holds,
        });
        chain.push(ChainEntry {
            inequality: "|4T-3T| >= |B2|^(5/2)".into(),
            lhs: s.lower as f64,
            rhs: key_bound,
            holds: s.lower as f64 >= key_bound,
        });
    }
    chain.push(ChainEntry {
        inequality: "|T-T| >= |B|^(2+1/14)".into(),
        lhs: d as f64,
        rhs: target,
        holds: d as f64 >= target,
    });

    let theorem3 = theorem3_path(&x_set, &y_set, opts);
    let resolved = difference.resolved && seven_fold.as_ref().is_none_or(|s| s.resolved);
    Ok(PipelineReport {
        b_size: b.len(),
        split,
        apex,
        direction_count,
        ratio_set_size: t_size,
        apex_signed_angle_count: d,
        geometry_signed_angle_count: geometry_count,
        difference,
        seven_fold,
        seven_fold_error,
        pluennecke_rhs,
        pluennecke_holds,
        key_bound,
        final_lower_bound,
        target,
        invariant_size,
        invariant_cross_module,
        chain,
        theorem3,
        resolved,
    })
}

fn theorem3_path(x: &ExactRealSet, y: &ExactRealSet, opts: &ComboOptions) -> Theorem3Path {
    let split = match squeeze_case_split(x, y, Presentation::Ratio) {
        Ok(s) => s,
        Err(e) => {
            return Theorem3Path {
                split: None,
                expander: None,
                error: Some(e.to_string()),
            }
        }
    };
    let input = split.a.as_rationals().map(|a| ExpanderInput {
        presentation: Presentation::Ratio,
        a: a.to_vec(),
        h: split.h.clone(),
    });
    let expander = input.and_then(|input| expander_check(&input, opts, true));
    let (expander, error) = match expander {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Theorem3Path {
        split: Some(split),
        expander,
        error,
    }
}

/// Least-squares slope of `log(count)` against `log(n)`.
pub fn exponent_fit(records: &[(u64, u64)]) -> Result<f64> {
    if records.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 records, got {}", records.len())));
    }
    let mut ns: Vec<u64> = records.iter().map(|r| r.0).collect();
    ns.sort();
    ns.dedup();
    if ns.len() != records.len() {
        return Err(Error::DegenerateFit("n values must be distinct".into()));
    }
    if records.iter().any(|&(n, c)| n == 0 || c == 0) {
        return Err(Error::DegenerateFit("n and counts must be positive".into()));
    }
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|&(n, c)| ((n as f64).ln(), (c as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(v: &[i64]) -> BaseSet {
        BaseSet::ints(v)
    }

    #[test]
    fn split_examples() {
        let s = split_b(&base(&[1, 2, 3, 4])).unwrap();
        assert_eq!((s.b1.values, s.b2.values), (base(&[1, 2]).values, base(&[3, 4]).values));
        let s = split_b(&base(&[5, 1, 4, 2, 3])).unwrap();
        assert_eq!((s.b1.values, s.b2.values), (base(&[1, 2]).values, base(&[4, 5]).values));
        let s = split_b(&base(&[1, 10, 100, 1000])).unwrap();
        assert_eq!(s.b2.values, base(&[100, 1000]).values);
        assert_eq!(split_b(&base(&[1, 2, 3])), Err(Error::TooFewElements { needed: 4, got: 3 }));
    }

    fn check_invariants(r: &PipelineReport) {
        assert!(r.invariant_size, "{r:?}");
        assert!(r.invariant_cross_module, "{r:?}");
        assert_eq!(r.pluennecke_holds, Some(true));
        assert!(r.resolved);
    }

    #[test]
    fn pipeline_examples() {
        let r = run_pipeline(&base(&[1, 2, 3, 4]), &ComboOptions::default()).unwrap();
        assert!(r.direction_count >= 3);
        check_invariants(&r);
        let r = run_pipeline(&base(&[1, 2, 4, 8]), &ComboOptions::default()).unwrap();
        check_invariants(&r);
        assert_eq!(r.apex_signed_angle_count, r.geometry_signed_angle_count);
        let r = run_pipeline(&base(&[1, 2, 3, 4, 5, 6]), &ComboOptions::default()).unwrap();
        check_invariants(&r);
        assert!(r.theorem3.split.is_some());
    }

    #[test]
    fn pipeline_budget_is_graceful() {
        let opts = ComboOptions {
            budget: 100,
            ..ComboOptions::default()
        };
        let r = run_pipeline(&base(&[1, 2, 3, 4, 5, 6]), &opts).unwrap();
        assert!(r.seven_fold.is_none() && r.seven_fold_error.is_some());
        assert!(r.invariant_size && r.invariant_cross_module);
    }

    #[test]
    fn monotone_apex_count_on_nested_ranges() {
        let mut last = 0;
        for m in 2..=4 {
            let b: Vec<i64> = (1..=2 * m).collect();
            let s = split_b(&base(&b)).unwrap();
            let (_, c) = beck_apex(
                &cartesian_product(&s.b1).unwrap(),
                &cartesian_product(&s.b2).unwrap(),
            )
            .unwrap();
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn fit_examples() {
        assert!((exponent_fit(&[(2, 4), (4, 16), (8, 64)]).unwrap() - 2.0).abs() < 1e-12);
        assert!((exponent_fit(&[(2, 8), (4, 64), (8, 512)]).unwrap() - 3.0).abs() < 1e-12);
        assert!(exponent_fit(&[(2, 4), (4, 16)]).is_err());
        assert!(exponent_fit(&[(2, 4), (2, 5), (4, 16)]).is_err());
        assert!(exponent_fit(&[(2, 0), (3, 5), (4, 16)]).is_err());
    }
}
