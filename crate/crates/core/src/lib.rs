//! Sampling-based trajectory planning for ships among polygonal hazards.
//!
//! The crate provides four planners (RRT, RRT*, Informed RRT* and PQ-RRT*)
//! built on a kinematic ship model with line-of-sight steering, together with
//! hazard preprocessing, free-space triangulation, random encounter scenario
//! generation and a Monte Carlo benchmark harness with Welch's t-test.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod env;
pub mod error;
pub mod planners;
pub mod scenario;
pub mod stats;
pub mod tree;
pub mod vessel;

pub use error::{Error, Result};
