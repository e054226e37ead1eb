//! Event-by-event simulation of single-particle interference and
//! Bell-type experiments.
//!
//! Every particle is processed to detection before the next one is created.
//! Interference and correlations emerge from adaptive processors
//! ([`dlm`], [`components`], [`detectors`]) that learn from the stream of
//! messages they receive. [`oracle`] holds the corresponding wave/quantum
//! predictions and [`analysis`] the post-processing used in the laboratory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod components;
pub mod data;
pub mod detectors;
pub mod dlm;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod messengers;
pub mod oracle;
pub mod rng;
pub mod sweep;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use sweep::Execution;
