//! Distinct-angle statistics for planar point sets, exact arctangent
//! arithmetic and sumset cardinalities of arctangent sets.

pub mod arctan;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod pipeline;
pub mod rational;
pub mod sumset;

pub use error::{Error, Result};
pub use rational::Rational;
