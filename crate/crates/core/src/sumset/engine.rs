//! Cardinalities of signed iterated sumsets `c_1 S_1 + ... + c_k S_k`.
//!
//! The pattern is expanded into `sum |c_i|` signed copies of the input sets,
//! which are merged two at a time (cheapest product first) into exact
//! deduplicated intermediate sets. The last merge only counts.
//!
//! For arctangent keys the last merge avoids materializing every sum: pair
//! sums are approximated in `f64` with a proven error bound `E`, sorted in
//! bands, and split wherever consecutive approximations differ by more than
//! `2E` (such values are certainly different). Only the members of a
//! cluster are compared exactly.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::form::{Atom, LinearForm};
use super::set::ExactRealSet;
use crate::arctan::key::{key_add_unreduced, unreduced_eq};
use crate::arctan::{key_add, key_negate, ArcTanSumKey, DyadicInterval, DEFAULT_MAX_BITS};
use crate::error::{Error, Result};
use crate::geometry::count_components;
use crate::rational::Rational;

pub const DEFAULT_BUDGET: u64 = 50_000_000;
const BAND_PAIRS: u64 = 4_000_000;

/// Nonzero integer coefficients, one per summand position.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CoeffPattern(Vec<i64>);

impl CoeffPattern {
    pub fn new(coefficients: Vec<i64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.contains(&0) {
            return Err(Error::BadParams(
                "pattern must be a nonempty list of nonzero integers".into(),
            ));
        }
        Ok(CoeffPattern(coefficients))
    }

    /// Parses `"4,-3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let coefficients = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::BadParams(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CoeffPattern::new(coefficients)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of summands, `sum |c_i|`.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for CoeffPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    #[default]
    Exact,
    Interval,
}

#[derive(Clone, Copy, Debug)]
pub struct ComboOptions {
    pub mode: CountMode,
    pub max_bits: u32,
    /// Maximum number of candidate pairs in any single merge.
    pub budget: u64,
}

impl Default for ComboOptions {
    fn default() -> Self {
        ComboOptions {
            mode: CountMode::Exact,
            max_bits: DEFAULT_MAX_BITS,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl ComboOptions {
    pub fn interval(max_bits: u32) -> Self {
        ComboOptions {
            mode: CountMode::Interval,
            max_bits,
            ..Default::default()
        }
    }
}

/// Certified bounds on a cardinality; exact results have `lower == upper`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Cardinality {
    pub lower: u64,
    pub upper: u64,
    pub resolved: bool,
    /// Final precision for interval results.
    pub precision_bits: Option<u32>,
}

impl Cardinality {
    pub fn exact(n: u64) -> Self {
        Cardinality {
            lower: n,
            upper: n,
            resolved: true,
            precision_bits: None,
        }
    }

    pub fn value(&self) -> Option<u64> {
        self.resolved.then_some(self.lower)
    }
}

/// Elements that can be added and negated exactly.
trait Element: Clone + Eq + Hash + Send + Sync {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self) -> Self;
}

impl Element for Rational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self) -> Self {
        -self
    }
}

impl Element for ArcTanSumKey {
    fn plus(&self, other: &Self) -> Self {
        key_add(self, other)
    }
    fn minus(&self) -> Self {
        key_negate(self)
    }
}

/// Linear form over interned atoms, sorted by atom id.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Form(Vec<(u32, i64)>);

impl Element for Form {
    fn plus(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let c = a[i].1 + b[j].1;
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Form(out)
    }
    fn minus(&self) -> Self {
        Form(self.0.iter().map(|&(a, c)| (a, -c)).collect())
    }
}

/// One pending summand of the staged merge.
struct Operand<E> {
    elements: Vec<E>,
    /// Sorted multiset of (set id, sign) copies this operand represents.
    signature: Vec<(usize, i8)>,
}

impl<E> Operand<E> {
    fn sign(&self) -> i8 {
        let first = self.signature[0].1;
        if self.signature.iter().all(|s| s.1 == first) {
            first
        } else {
            0
        }
    }
}

fn pair_count(a: usize, b: usize, symmetric: bool) -> u128 {
    if symmetric {
        (a as u128) * (a as u128 + 1) / 2
    } else {
        a as u128 * b as u128
    }
}

fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::PipelineInfeasible { needed, budget })
    } else {
        Ok(())
    }
}

/// Expands the pattern into signed operands.
fn operands<E: Element>(sets: &[Vec<E>], pattern: &CoeffPattern) -> Vec<Operand<E>> {
    let mut out = Vec::new();
    for (pos, &c) in pattern.coefficients().iter().enumerate() {
        let id = if sets.len() == 1 { 0 } else { pos };
        let sign: i8 = if c < 0 { -1 } else { 1 };
        let base: Vec<E> = if sign < 0 {
            sets[id].iter().map(Element::minus).collect()
        } else {
            sets[id].clone()
        };
        for _ in 0..c.unsigned_abs() {
            out.push(Operand {
                elements: base.clone(),
                signature: vec![(id, sign)],
            });
        }
    }
    out
}

/// Index pair to merge next: smallest candidate count, then identical
/// signatures, then equal signs, then lowest indices.
fn next_pair<E>(ops: &[Operand<E>]) -> (usize, usize) {
    let mut best: Option<((u128, u8, u8), usize, usize)> = None;
    for a in 0..ops.len() {
        for b in (a + 1)..ops.len() {
            let same = ops[a].signature == ops[b].signature;
            let cost = (
                pair_count(ops[a].elements.len(), ops[b].elements.len(), same),
                u8::from(!same),
                u8::from(ops[a].sign() == 0 || ops[a].sign() != ops[b].sign()),
            );
            if best.as_ref().is_none_or(|(c, _, _)| cost < *c) {
                best = Some((cost, a, b));
            }
        }
    }
    let (_, a, b) = best.expect("at least two operands");
    (a, b)
}

/// Distinct sums of two element lists (upper-triangular when symmetric).
fn merge_sets<E: Element>(x: &[E], y: &[E], symmetric: bool) -> Vec<E> {
    (0..x.len())
        .into_par_iter()
        .map(|i| {
            let start = if symmetric { i } else { 0 };
            y[start..].iter().map(|b| x[i].plus(b)).collect::<HashSet<E>>()
        })
        .reduce(HashSet::new, |a, b| {
            let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            big.extend(small);
            big
        })
        .into_iter()
        .collect()
}

/// Runs the staged merge until two operands remain; returns them and whether
/// they carry the same signature.
fn reduce_to_pair<E: Element>(
    mut ops: Vec<Operand<E>>,
    budget: u64,
) -> Result<(Operand<E>, Option<Operand<E>>, bool)> {
    while ops.len() > 2 {
        let (a, b) = next_pair(&ops);
        let same = ops[a].signature == ops[b].signature;
        check_budget(
            pair_count(ops[a].elements.len(), ops[b].elements.len(), same),
            budget,
        )?;
        let right = ops.remove(b);
        let left = ops.remove(a);
        // Equal signatures mean equal sets (possibly in another order), so
        // the upper-triangular merge must index one list against itself.
        let elements = if same {
            merge_sets(&left.elements, &left.elements, true)
        } else {
            merge_sets(&left.elements, &right.elements, false)
        };
        let mut signature = left.signature;
        signature.extend(right.signature);
        signature.sort();
        ops.insert(a, Operand { elements, signature });
    }
    let mut second = if ops.len() == 2 { ops.pop() } else { None };
    let first = ops.pop().expect("nonempty pattern");
    let same = second.as_ref().is_some_and(|s| s.signature == first.signature);
    if let (true, Some(s)) = (same, second.as_mut()) {
        s.elements = first.elements.clone();
    }
    Ok((first, second, same))
}

/// Cardinality of `{sum c_i s_i : s_i in S_i}`. A single set is broadcast to
/// every position. Rational sets are always counted exactly; symbolic sets
/// need interval mode; arctangent sets support both.
pub fn combo_cardinality(
    sets: &[ExactRealSet],
    pattern: &CoeffPattern,
    opts: &ComboOptions,
) -> Result<Cardinality> {
    if sets.len() != 1 && sets.len() != pattern.len() {
        return Err(Error::BadParams(format!(
            "{} sets for a pattern of length {}",
            sets.len(),
            pattern.len()
        )));
    }
    let kind = sets[0].kind();
    if let Some(other) = sets.iter().find(|s| s.kind() != kind) {
        return Err(Error::KindMismatch(format!("{kind} and {} sets mixed", other.kind())));
    }
    if sets.iter().any(|s| s.is_empty()) {
        return Ok(Cardinality::exact(0));
    }
    match (&sets[0], opts.mode) {
        (ExactRealSet::Rational(_), _) => {
            let lists: Vec<Vec<Rational>> = sets
                .iter()
                .map(|s| s.as_rationals().map(<[_]>::to_vec))
                .collect::<Result<_>>()?;
            let (a, b, same) = reduce_to_pair(operands(&lists, pattern), opts.budget)?;
            let n = match b {
                None => a.elements.len(),
                Some(b) => {
                    check_budget(pair_count(a.elements.len(), b.elements.len(), same), opts.budget)?;
                    merge_sets(&a.elements, &b.elements, same).len()
                }
            };
            Ok(Cardinality::exact(n as u64))
        }
        (ExactRealSet::ArcTan(_), CountMode::Exact) => {
            let lists: Vec<Vec<ArcTanSumKey>> = sets
                .iter()
                .map(|s| s.as_keys().map(<[_]>::to_vec))
                .collect::<Result<_>>()?;
            let (a, b, same) = reduce_to_pair(operands(&lists, pattern), opts.budget)?;
            let n = match b {
                None => a.elements.len() as u64,
                Some(b) => {
                    check_budget(pair_count(a.elements.len(), b.elements.len(), same), opts.budget)?;
                    clustered_count(&a.elements, &b.elements, same)
                }
            };
            Ok(Cardinality::exact(n))
        }
        (ExactRealSet::Symbolic(_), CountMode::Exact) => Err(Error::KindMismatch(
            "symbolic sets can only be counted in interval mode".into(),
        )),
        (_, CountMode::Interval) => interval_cardinality(sets, pattern, opts),
    }
}

/// Exact number of distinct values `x + y` (with `i <= j` when symmetric).
fn clustered_count(x: &[ArcTanSumKey], y: &[ArcTanSumKey], symmetric: bool) -> u64 {
    clustered_count_banded(x, y, symmetric, BAND_PAIRS)
}

fn clustered_count_banded(
    x: &[ArcTanSumKey],
    y: &[ArcTanSumKey],
    symmetric: bool,
    band_pairs: u64,
) -> u64 {
    let approx = |keys: &[ArcTanSumKey]| -> Vec<(f64, f64, usize)> {
        let mut v: Vec<(f64, f64, usize)> = keys
            .par_iter()
            .enumerate()
            .map(|(i, k)| {
                let (m, e) = k.approx();
                (m, e, i)
            })
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        v
    };
    let ax = approx(x);
    let ay = if symmetric { ax.clone() } else { approx(y) };
    let xs: Vec<f64> = ax.iter().map(|a| a.0).collect();
    let ys: Vec<f64> = ay.iter().map(|a| a.0).collect();
    let max_abs = |v: &[f64]| v.iter().fold(0f64, |m, a| m.max(a.abs()));
    let max_err = |v: &[(f64, f64, usize)]| v.iter().fold(0f64, |m, a| m.max(a.1));
    let scale = max_abs(&xs) + max_abs(&ys);
    let err = max_err(&ax) + max_err(&ay) + 2.0 * f64::EPSILON * scale;
    let gap = 2.0 * err;
    let slack = 4.0 * f64::EPSILON * (scale + 1.0);

    let first_j = |i: usize| if symmetric { i } else { 0 };
    // Index of the first j (>= first_j) with xs[i] + ys[j] not below t.
    let cut = |i: usize, t: f64| -> usize {
        let lo = first_j(i);
        lo + ys[lo..].partition_point(|&v| v < t - xs[i])
    };
    let count_below = |t: f64| -> u64 {
        (0..xs.len())
            .into_par_iter()
            .map(|i| (cut(i, t) - first_j(i)) as u64)
            .sum()
    };
    let total: u64 = (0..xs.len()).map(|i| (ys.len() - first_j(i)) as u64).sum();

    // Band boundaries at roughly `band_pairs` pairs each.
    let mut bounds: Vec<f64> = Vec::new();
    let (mut lo_t, hi_t) = (
        xs[0] + ys[0] - 1.0,
        xs[xs.len() - 1] + ys[ys.len() - 1] + 1.0,
    );
    let mut target = band_pairs;
    while target < total {
        let (mut a, mut b) = (lo_t, hi_t);
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(mid) >= target {
                b = mid;
            } else {
                a = mid;
            }
        }
        if bounds.last().is_some_and(|&last| b <= last) {
            // A huge run of equal approximations; skip ahead.
            target += band_pairs;
            continue;
        }
        bounds.push(b);
        lo_t = b;
        target = count_below(b) + band_pairs;
    }

    let mut distinct = 0u64;
    let mut carry: Vec<(f64, u32, u32)> = Vec::new();
    let mut left = f64::NEG_INFINITY;
    for band in 0..=bounds.len() {
        let right = bounds.get(band).copied();
        let mut items: Vec<(f64, u32, u32)> = (0..xs.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let from = if left == f64::NEG_INFINITY { first_j(i) } else { cut(i, left) };
                let to = right.map_or(ys.len(), |r| cut(i, r));
                let xi = xs[i];
                let ys = &ys;
                (from..to).map(move |j| (xi + ys[j], i as u32, j as u32))
            })
            .collect();
        items.append(&mut carry);
        items.par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        let done = match right {
            None => items.len(),
            Some(r) => {
                let threshold = r - gap - slack;
                let mut c = items.partition_point(|it| it.0 < threshold);
                while c > 0 && c < items.len() && items[c].0 - items[c - 1].0 <= gap {
                    c -= 1;
                }
                c
            }
        };
        carry = items.split_off(done);
        distinct += count_clusters(&items, gap, |i, j| {
            key_add_unreduced(&x[ax[i as usize].2], &y[ay[j as usize].2])
        });
        if let Some(r) = right {
            left = r;
        }
    }
    debug_assert!(carry.is_empty());
    distinct
}

/// Distinct exact values among sorted approximations, splitting at gaps
/// larger than `gap` and resolving each cluster exactly. Members of a
/// cluster are compared against one representative per value found so far;
/// clusters almost always hold a single value, so this stays linear.
fn count_clusters<F>(items: &[(f64, u32, u32)], gap: f64, exact: F) -> u64
where
    F: Fn(u32, u32) -> (i64, BigInt, BigInt) + Sync,
{
    let mut singles = 0u64;
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=items.len() {
        if k == items.len() || items[k].0 - items[k - 1].0 > gap {
            if k - start == 1 {
                singles += 1;
            } else {
                clusters.push((start, k));
            }
            start = k;
        }
    }
    let resolved: u64 = clusters
        .par_iter()
        .map(|&(s, e)| {
            let mut reps: Vec<(i64, BigInt, BigInt)> = Vec::new();
            for &(_, i, j) in &items[s..e] {
                let v = exact(i, j);
                if !reps.iter().any(|r| unreduced_eq(r, &v)) {
                    reps.push(v);
                }
            }
            reps.len() as u64
        })
        .sum();
    singles + resolved
}

/// Interns atoms so forms are small integer vectors.
#[derive(Default)]
struct Interner {
    atoms: Vec<Atom>,
}

impl Interner {
    fn id(&mut self, atom: &Atom) -> u32 {
        match self.atoms.iter().position(|a| a == atom) {
            Some(i) => i as u32,
            None => {
                self.atoms.push(atom.clone());
                (self.atoms.len() - 1) as u32
            }
        }
    }

    fn intern(&mut self, form: &LinearForm) -> Form {
        let mut v: Vec<(u32, i64)> = form.terms().iter().map(|(a, c)| (self.id(a), *c)).collect();
        v.sort();
        Form(v)
    }
}

/// Interval mode: the upper bound is the number of distinct symbolic forms,
/// the lower bound the number of connected components of their enclosures.
/// Precision doubles from 64 bits while the bounds differ, up to `max_bits`;
/// past 256 bits it stops early once a doubling no longer separates anything.
fn interval_cardinality(
    sets: &[ExactRealSet],
    pattern: &CoeffPattern,
    opts: &ComboOptions,
) -> Result<Cardinality> {
    let mut interner = Interner::default();
    let lists: Vec<Vec<Form>> = sets
        .iter()
        .map(|s| Ok(s.to_forms()?.iter().map(|f| interner.intern(f)).collect()))
        .collect::<Result<_>>()?;
    let (a, b, same) = reduce_to_pair(operands(&lists, pattern), opts.budget)?;
    let forms = match b {
        None => a.elements,
        Some(b) => {
            check_budget(pair_count(a.elements.len(), b.elements.len(), same), opts.budget)?;
            merge_sets(&a.elements, &b.elements, same)
        }
    };
    let upper = forms.len() as u64;
    let mut bits = 64.min(opts.max_bits.max(8));
    let mut previous = 0u64;
    loop {
        let lower = interval_lower(&forms, &interner.atoms, bits);
        let stalled = bits >= 256 && lower == previous;
        if lower == upper || bits >= opts.max_bits || stalled {
            return Ok(Cardinality {
                lower,
                upper,
                resolved: lower == upper,
                precision_bits: Some(bits),
            });
        }
        previous = lower;
        bits = (bits * 2).min(opts.max_bits);
    }
}

fn interval_lower(forms: &[Form], atoms: &[Atom], bits: u32) -> u64 {
    let w = bits + 8;
    let encl: Vec<(BigInt, BigInt)> = atoms.par_iter().map(|a| a.enclosure(w)).collect();
    let intervals: Vec<DyadicInterval> = forms
        .par_iter()
        .map(|f| {
            let (mut lo, mut hi) = (BigInt::from(0), BigInt::from(0));
            for &(id, c) in &f.0 {
                let (al, ah) = &encl[id as usize];
                if c >= 0 {
                    lo += al * c;
                    hi += ah * c;
                } else {
                    lo += ah * c;
                    hi += al * c;
                }
            }
            DyadicInterval::from_fixed(lo, hi, w, bits)
        })
        .collect();
    count_components(intervals) as u64
}
