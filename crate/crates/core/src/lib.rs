//! Toolkit for the multidimensional assignment problem: choose `n` mutually
//! coordinate-disjoint `s`-tuples minimizing total weight.
//!
//! The crate provides the data model ([`model`]), seeded instance families
//! ([`instance`]), an exact linear-assignment subroutine ([`ap`]), a ladder of
//! local searches ([`heuristics`]), a memetic search loop with an adaptive
//! generation-size controller ([`memetic`]), and an exhaustive optimum for
//! small instances ([`exact`]).

pub mod ap;
pub mod exact;
pub mod heuristics;
pub mod instance;
pub mod memetic;
pub mod model;
pub mod rng;
