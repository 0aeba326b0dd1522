//! Iterated sumsets of exact real sets and the checkers built on them.

pub mod engine;
pub mod expander;
pub mod form;
pub mod ops;
pub mod set;

pub use engine::{
    combo_cardinality, Cardinality, CoeffPattern, ComboOptions, CountMode, DEFAULT_BUDGET,
};
pub use expander::{
    concavity_check, expander_benchmark, expander_check, ConcavityReport, ExpanderInput,
    ExpanderReport,
};
pub use form::{Atom, LinearForm};
pub use ops::{
    arctan_ratio_set, difference_set, near_neighbor_gap, pluennecke_check, squeeze_case_split,
    GapReport, GapSource, PluenneckeReport, Presentation, SqueezeSplit,
};
pub use set::{ExactRealSet, SetKind};
