//! Exploratory landscape analysis for large-scale black-box optimization.
//!
//! The crate samples a design on a benchmark instance, optionally maps it
//! to a low-dimensional space with rank-weighted PCA, and computes the
//! landscape feature groups on either space. Harnesses cover feature-cost
//! timing, property classification under cross-validation, and similarity
//! between original and reduced features.

pub mod budget;
pub mod cellmap;
pub mod dimred;
pub mod error;
pub mod features;
pub mod harness;
pub mod linalg;
pub mod ml;
pub mod rng;
pub mod sampling;
pub mod stats;
pub mod testbed;

pub use error::{Error, Result};
