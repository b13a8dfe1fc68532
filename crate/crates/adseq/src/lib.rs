//! Low-adaptivity monotone submodular maximization under matroid constraints.
//!
//! The crate provides:
//!
//! - threshold-driven sequence optimizers ([`maximize::adaptive_sequencing`],
//!   [`maximize::adaptive_sequencing_pp`]) with full instrumentation of
//!   adaptive rounds, function queries and matroid-oracle steps;
//! - an accelerated continuous greedy over the multilinear extension with
//!   swap rounding back to a feasible set ([`continuous`]);
//! - random feasible-sequence generators for independence and rank oracles
//!   ([`sequencing`]);
//! - concrete matroids (uniform, partition, graphic, intersections, a
//!   hidden-partition adversary) and value oracles (modular, coverage);
//! - classical baselines (greedy, lazy greedy) and an exhaustive solver for
//!   desk-scale verification;
//! - a file-format/CSV harness behind the `adseq` binary ([`harness`]).
//!
//! Start from the runnable programs in `examples/`; each one exercises a
//! major capability end to end.

pub mod continuous;
pub mod core;
pub mod functions;
pub mod harness;
pub mod matroids;
pub mod maximize;
pub mod sequencing;
pub mod stats;

pub use crate::core::{
    AlgoParams, Element, ElementSet, Error, GroundSet, MatroidOracle, QueryLedger, Result,
    SubmodularOracle,
};
