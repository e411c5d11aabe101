//! Inventory-variation analytics for trading-firm panels.
//!
//! The pipeline ingests a trade tape, aggregates per-firm signed euro
//! inventory changes onto an interval grid, and analyzes the panel:
//!
//! - [`market`]: tape parsing, activity filter, panels and return series
//! - [`spectra`]: correlation matrix, eigen-spectrum, random-matrix and
//!   label-shuffling null thresholds, dominant factor
//! - [`classify`]: one-factor fits, Reversing/Uncategorized/Trending
//!   labels, size proxies, year-to-year transitions
//! - [`causality`]: high-frequency autocorrelation and lagged
//!   cross-correlation with integrated past/future sums
//! - [`herding`]: herding indicator with exact binomial test, buy ratio,
//!   effective number, Welch validation
//! - [`synth`]: a one-factor market generator with ground truth, so every
//!   stage can be validated end to end without proprietary exchange data
//!
//! All analysis functions are pure; randomness enters only through
//! explicit seeds, and repeated runs reproduce results bit for bit.

pub mod causality;
pub mod classify;
pub mod error;
pub mod herding;
pub mod market;
pub mod reference;
pub mod report;
pub mod special;
pub mod spectra;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
