//! Exact arithmetic for sums of arctangents of rationals.

pub mod dyadic;
pub mod elementary;
pub mod eval;
pub mod key;
pub mod tangent;

pub use dyadic::{Dyadic, DyadicInterval};
pub use eval::eval_interval;
pub use key::{
    canonical_key, certified_sum, fold_tangent, key_add, key_cmp, key_negate, ArcTanSumKey,
    ArcTanTerm, DEFAULT_MAX_BITS,
};
pub use tangent::{projective_tan_add, ProjectiveTangent, Tangent};
