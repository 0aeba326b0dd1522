use serde::{Deserialize, Serialize};

use super::engine::{combo_cardinality, Cardinality, CoeffPattern, ComboOptions, CountMode};
use super::form::LinearForm;
use super::ops::Presentation;
use super::set::ExactRealSet;
use crate::arctan::{ArcTanSumKey, Tangent};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Input to the expander check for `f = arctan∘exp`.
///
/// `Additive`: `A` and `h` are the reals themselves, so `f(a + h)` is
/// transcendental and only interval counting applies. `Ratio`: `A = log α`
/// and `h = log η` for positive rationals, so `f(a + h) = arctan(α η)` is an
/// exact key.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExpanderInput {
    pub presentation: Presentation,
    pub a: Vec<Rational>,
    pub h: [Rational; 3],
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ExpanderReport {
    pub n: usize,
    /// Certified lower bounds of the two factors (exact when resolved).
    pub card_left: u64,
    pub card_right: u64,
    pub left: Cardinality,
    pub right: Cardinality,
    pub product: u128,
    /// `N^5 / (log2 N)^3`, or 1 for the degenerate `N = 1`.
    pub benchmark: f64,
    pub ratio: f64,
    pub degenerate: bool,
    pub spacing_ok: bool,
    /// The theorem asks for positive `A`; recorded, not enforced.
    pub a_positive: bool,
    pub mode: CountMode,
    pub resolved: bool,
    pub warnings: Vec<String>,
}

/// `N^5 / (log2 N)^3`; 1 (degenerate) for `N <= 1`.
pub fn expander_benchmark(n: usize) -> (f64, bool) {
    if n <= 1 {
        (1.0, true)
    } else {
        let nf = n as f64;
        (nf.powi(5) / nf.log2().powi(3), false)
    }
}

/// Checks the two factors of the expander theorem:
/// `|2F1 - 2F1 + 2F2 - F2|` and `|2F3 - 2F3 + 2F2 - F2|` with
/// `Fi = f(A + h_i)`. A spacing violation is an error unless `force` is set,
/// in which case it becomes a warning.
pub fn expander_check(
    input: &ExpanderInput,
    opts: &ComboOptions,
    force: bool,
) -> Result<ExpanderReport> {
    let mut a = input.a.clone();
    a.sort();
    a.dedup();
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let h = &input.h;
    if !(h[0] < h[1] && h[1] < h[2]) {
        return Err(Error::BadShifts);
    }
    let ratio = input.presentation == Presentation::Ratio;
    if ratio && (a.iter().chain(h.iter()).any(|v| !v.is_positive())) {
        return Err(Error::BadParams("ratio presentation needs positive rationals".into()));
    }
    let step = |lo: &Rational, hi: &Rational| if ratio { hi / lo } else { hi - lo };
    let required = std::cmp::max(step(&h[0], &h[1]), step(&h[1], &h[2]));
    let min_gap = a.windows(2).map(|w| step(&w[0], &w[1])).min();
    let mut warnings = Vec::new();
    let spacing_ok = min_gap.as_ref().is_none_or(|g| *g >= required);
    if !spacing_ok {
        let gap = min_gap.expect("violation needs a gap").to_string();
        if !force {
            return Err(Error::SpacingViolation {
                gap,
                required: required.to_string(),
            });
        }
        warnings.push(format!("spacing violated: gap {gap} < {required}"));
    }
    let a_positive = if ratio {
        a.iter().all(|v| *v > Rational::one())
    } else {
        a.iter().all(Rational::is_positive)
    };
    if !a_positive {
        warnings.push("A is not positive; the theorem assumes positive A".into());
    }

    let shifted = |hi: &Rational| -> ExactRealSet {
        if ratio {
            ExactRealSet::keys(a.iter().map(|v| ArcTanSumKey::atan(Tangent::Finite(v * hi))))
        } else {
            ExactRealSet::forms(a.iter().map(|v| LinearForm::arctan_exp(&(v + hi))))
        }
    };
    let (f1, f2, f3) = (shifted(&h[0]), shifted(&h[1]), shifted(&h[2]));
    let mode = if ratio { opts.mode } else { CountMode::Interval };
    let run_opts = ComboOptions { mode, ..*opts };
    let pattern = CoeffPattern::new(vec![2, -2, 2, -1])?;
    let left = combo_cardinality(&[f1.clone(), f1, f2.clone(), f2.clone()], &pattern, &run_opts)?;
    let right = combo_cardinality(&[f3.clone(), f3, f2.clone(), f2], &pattern, &run_opts)?;
    let product = left.lower as u128 * right.lower as u128;
    let (benchmark, degenerate) = expander_benchmark(a.len());
    Ok(ExpanderReport {
        n: a.len(),
        card_left: left.lower,
        card_right: right.lower,
        left,
        right,
        product,
        benchmark,
        ratio: product as f64 / benchmark,
        degenerate,
        spacing_ok,
        a_positive,
        mode,
        resolved: left.resolved && right.resolved,
        warnings,
    })
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ConcavitySample {
    pub t: f64,
    pub closed_form: f64,
    pub finite_difference: f64,
    pub relative_error: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub h: [f64; 3],
    pub samples: Vec<ConcavitySample>,
    /// Closed form strictly negative at every sample.
    pub negative: bool,
    /// Closed form within `tolerance` relative error of the finite
    /// difference estimate at every sample.
    pub agree: bool,
    pub tolerance: f64,
}

pub const CONCAVITY_STEP: f64 = 1e-4;
pub const CONCAVITY_TOLERANCE: f64 = 1e-4;

/// The Lemma's closed form for `d²y/dx²` along
/// `(f(t+h2) - f(t+h1), f(t+h3) - f(t+h2))`, `f = arctan∘exp`, evaluated
/// exactly as written.
pub fn concavity_closed_form(t: f64, h: [f64; 3]) -> f64 {
    let e = |k: usize| (t + h[k]).exp();
    let (e1, e2, e3) = (e(0), e(1), e(2));
    let num = 2.0 * (1.0 + e3 * e3) * (1.0 + e1 * e1) * (e3 - e2) * (e1 * e1 - e3 * e3);
    let den = (e2 - e1) * (1.0 + e3 * e3).powi(2) * (e2 - e1);
    num / den
}

/// Central finite-difference estimate of `d²y/dx² = (y'' x' - y' x'') / x'^3`.
pub fn concavity_finite_difference(t: f64, h: [f64; 3], step: f64) -> f64 {
    let f = |x: f64| x.exp().atan();
    let x = |s: f64| f(s + h[1]) - f(s + h[0]);
    let y = |s: f64| f(s + h[2]) - f(s + h[1]);
    let d1 = |g: &dyn Fn(f64) -> f64| (g(t + step) - g(t - step)) / (2.0 * step);
    let d2 = |g: &dyn Fn(f64) -> f64| (g(t + step) - 2.0 * g(t) + g(t - step)) / (step * step);
    let (x1, x2, y1, y2) = (d1(&x), d2(&x), d1(&y), d2(&y));
    (y2 * x1 - y1 * x2) / x1.powi(3)
}

pub fn concavity_check(h: [f64; 3], t_samples: &[f64]) -> Result<ConcavityReport> {
    if !(h[0] < h[1] && h[1] < h[2]) {
        return Err(Error::BadShifts);
    }
    let samples: Vec<ConcavitySample> = t_samples
        .iter()
        .map(|&t| {
            let closed_form = concavity_closed_form(t, h);
            let finite_difference = concavity_finite_difference(t, h, CONCAVITY_STEP);
            let relative_error =
                (closed_form - finite_difference).abs() / finite_difference.abs().max(f64::MIN_POSITIVE);
            ConcavitySample {
                t,
                closed_form,
                finite_difference,
                relative_error,
            }
        })
        .collect();
    Ok(ConcavityReport {
        h,
        negative: samples.iter().all(|s| s.closed_form < 0.0),
        agree: samples.iter().all(|s| s.relative_error <= CONCAVITY_TOLERANCE),
        samples,
        tolerance: CONCAVITY_TOLERANCE,
    })
}
