//! Event records shared by the experiments and the analysis pipeline.

use serde::{Deserialize, Serialize};

/// One detection at an EPRB station.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationEvent {
    /// Detector that fired, `+1` or `−1`.
    pub x: i8,
    /// Time tag in nanoseconds.
    pub t: f64,
    /// Which of the two analyzer settings was active (0 or 1).
    pub setting: u8,
}

/// One photon of the delayed-choice experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayedChoiceEvent {
    /// Detector that fired (0 or 1).
    pub w: u8,
    /// Interferometer arm taken after the input splitter.
    pub d: u8,
    /// Draw that switched the modulator.
    pub r: f64,
    pub closed: bool,
}
