//! Belief-function toolkit: Dempster–Shafer mass functions on bitmask subsets,
//! the belief evolution network and full-causality function, probability
//! transformations, combination and fusion rules, evaluation metrics and a
//! fusion-based classifier.

pub mod belief;
pub mod ben;
pub mod classifier;
pub mod combination;
pub mod error;
pub mod evaluation;
pub mod frame;
pub mod fusion;
pub mod mass;
pub mod mobius;
pub mod pmf;
pub mod scenarios;
pub mod text;
pub mod transform;

#[cfg(test)]
pub(crate) mod testing;

pub use belief::{mass_from_b, mass_from_fc, mass_from_q};
pub use ben::{export_dot, BeliefEvolutionNetwork};
pub use error::{Error, Result};
pub use frame::{FocalSet, Frame, MAX_FRAME_SIZE};
pub use mass::{BeliefInterval, MassFunction, SpecialKind, Verdict, Violation};
pub use pmf::ProbabilityMassFunction;
pub use text::Precision;
pub use transform::{LayerDistribution, Method, TransformResult};
