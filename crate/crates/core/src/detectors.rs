//! Detector models: ideal counters and adaptive-threshold detectors.

use crate::dlm::AverageDlm;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Detector that clicks with probability `‖v‖²`, where `v` is a running
/// average of the messages it has received.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveDetector {
    pub state: AverageDlm,
    pub clicks: u64,
    pub arrivals: u64,
}

impl AdaptiveDetector {
    pub fn new(state: AverageDlm) -> Self {
        Self {
            state,
            clicks: 0,
            arrivals: 0,
        }
    }

    /// Detector whose internal vector starts at a random unit vector.
    pub fn random(gamma: f64, rng: &mut RngStream) -> Result<Self> {
        Ok(Self::new(AverageDlm::random(gamma, rng)?))
    }

    /// Detector whose internal vector starts at zero.
    pub fn blank(gamma: f64) -> Result<Self> {
        Ok(Self::new(AverageDlm::new([0.0, 0.0], gamma)?))
    }

    /// Absorb one message; returns whether the detector clicked.
    pub fn detect(&mut self, msg: [f64; 2], r: f64) -> bool {
        self.state.update(msg);
        self.arrivals += 1;
        let click = self.state.norm_sqr() > r;
        if click {
            self.clicks += 1;
        }
        click
    }
}

/// Ideal particle counter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counter {
    pub count: u64,
}

impl Counter {
    pub fn detect(&mut self) -> bool {
        self.count += 1;
        true
    }
}

/// Semicircular screen of 181 detectors at 1° spacing from −90° to +90°.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorScreen {
    pub detectors: Vec<AdaptiveDetector>,
}

pub const SCREEN_SIZE: usize = 181;

impl DetectorScreen {
    pub fn new(detectors: Vec<AdaptiveDetector>) -> Result<Self> {
        if detectors.len() != SCREEN_SIZE {
            return Err(Error::config(format!(
                "screen needs {SCREEN_SIZE} detectors, got {}",
                detectors.len()
            )));
        }
        Ok(Self { detectors })
    }

    /// Centre of detector `k` in degrees.
    pub fn angle_deg(k: usize) -> f64 {
        k as f64 - 90.0
    }

    /// Index of the detector whose window `[θk − ½°, θk + ½°)` holds `theta_deg`.
    pub fn route(theta_deg: f64) -> Result<usize> {
        if !(-90.0..=90.0).contains(&theta_deg) {
            return Err(Error::Routing(theta_deg));
        }
        Ok(((theta_deg + 90.5).floor() as usize).min(SCREEN_SIZE - 1))
    }

    pub fn clicks(&self) -> Vec<u64> {
        self.detectors.iter().map(|d| d.clicks).collect()
    }

    pub fn arrivals(&self) -> Vec<u64> {
        self.detectors.iter().map(|d| d.arrivals).collect()
    }
}
