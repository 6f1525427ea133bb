//! Weight-space analysis of composite-score rankings.

pub mod dataset;
pub mod enforce;
pub mod error;
pub mod improve;
pub mod kemeny;
pub mod lp;
pub mod registry;
pub mod sampler;
pub mod scoring;

pub use error::{Error, Result};
