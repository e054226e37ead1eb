//! Experiment networks and their one-particle-at-a-time simulation loops.
//!
//! Each sweep point owns fresh processor states and its own random streams,
//! keyed by a component path, so points can run in any order or in
//! parallel and still give identical results.

pub mod delayed_choice;
pub mod eprb;
pub mod mzi;
pub mod neutron;
pub mod two_beam;

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub(crate) fn stream(seed: u64, path: impl AsRef<str>) -> RngStream {
    RngStream::for_path(seed, path.as_ref())
}

pub(crate) fn check_events(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::config("event count must be at least 1"))
    } else {
        Ok(())
    }
}

/// Evenly spaced angles `0, step, …` covering `[0, 2π)`.
pub fn full_period(step_deg: f64) -> Vec<f64> {
    let n = (360.0 / step_deg).round() as usize;
    (0..n).map(|k| (k as f64 * step_deg).to_radians()).collect()
}
