//! Wheeler's delayed-choice experiment with polarized photons.
//!
//! Network: source → PBS_in → two arms (phase `φ` on arm 0) → PBS_out →
//! EOM (switched per photon) → Wollaston prism → D0 / D1. The switched-on
//! EOM acts as a half-wave plate whose mixing `sin²2θ` equals the
//! reflectivity `R` of the output beam splitter it emulates.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::{check_events, stream};
use crate::analysis::{distinguishability, visibility, FringeScan};
use crate::components::{eom_angle_for_reflectivity, hwp_transform, Splitter, SplitterKind};
use crate::data::DelayedChoiceEvent;
use crate::error::{Error, Result};
use crate::messengers::{Messenger, Spinor};
use crate::sweep::{map_points, Execution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayedChoiceConfig {
    pub events_per_point: u64,
    pub gamma: f64,
    pub reflectivity: f64,
    pub phases: Vec<f64>,
    /// Source polarization angle `ξ`.
    pub xi: f64,
    /// Probability that a photon meets the closed configuration.
    pub closed_probability: f64,
    pub seed: u64,
}

impl Default for DelayedChoiceConfig {
    fn default() -> Self {
        Self {
            events_per_point: 10_000,
            gamma: 0.99,
            reflectivity: 0.5,
            phases: super::full_period(10.0),
            xi: FRAC_PI_4,
            closed_probability: 0.5,
            seed: 0,
        }
    }
}

impl DelayedChoiceConfig {
    fn validate(&self) -> Result<()> {
        check_events(self.events_per_point)?;
        if !(0.0..=0.5).contains(&self.reflectivity) {
            return Err(Error::config(format!(
                "reflectivity {} outside [0, 0.5]",
                self.reflectivity
            )));
        }
        if !(0.0..=1.0).contains(&self.closed_probability) {
            return Err(Error::config("closed probability outside [0,1]"));
        }
        Ok(())
    }
}

/// Detector counts for one configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DetectorCounts {
    /// `n[w]`: clicks at detector `w`.
    pub n: [u64; 2],
    /// `by_path[w][d]`: clicks at detector `w` from photons that took arm `d`.
    pub by_path: [[u64; 2]; 2],
    /// Photons absorbed in a blocked arm or leaving the unused PBS port.
    pub lost: u64,
}

impl DetectorCounts {
    pub fn detected(&self) -> u64 {
        self.n[0] + self.n[1]
    }

    /// Fraction of detected photons registered at D0.
    pub fn d0_fraction(&self) -> f64 {
        self.n[0] as f64 / self.detected().max(1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayedChoicePoint {
    pub phi: f64,
    pub open: DetectorCounts,
    pub closed: DetectorCounts,
}

/// Simulate one phase point. With `blocked = Some(d)` photons entering arm
/// `d` are absorbed. Per-photon records are appended to `events` if given.
pub fn run_point(
    cfg: &DelayedChoiceConfig,
    index: usize,
    phi: f64,
    blocked: Option<u8>,
    mut events: Option<&mut Vec<DelayedChoiceEvent>>,
) -> Result<DelayedChoicePoint> {
    cfg.validate()?;
    let tag = match blocked {
        None => String::new(),
        Some(d) => format!("/blocked{d}"),
    };
    let base = format!("delayed_choice/{index}{tag}");
    // One source for the whole scan: its two phases set the fringe offset.
    let mut src = stream(cfg.seed, "delayed_choice/source");
    let mut r_in = stream(cfg.seed, format!("{base}/pbs_in"));
    let mut r_out = stream(cfg.seed, format!("{base}/pbs_out"));
    let mut r_wp = stream(cfg.seed, format!("{base}/wollaston"));
    let mut r_eom = stream(cfg.seed, format!("{base}/eom"));
    let mut pbs_in = Splitter::new(SplitterKind::Polarizing, cfg.gamma, &mut r_in)?;
    let mut pbs_out = Splitter::new(SplitterKind::Polarizing, cfg.gamma, &mut r_out)?;
    let mut wp = Splitter::new(SplitterKind::Polarizing, cfg.gamma, &mut r_wp)?;
    let eom_theta = eom_angle_for_reflectivity(cfg.reflectivity)?;

    let psi1 = src.angle();
    let psi2 = src.angle();
    let photon = Spinor::photon(psi1, psi2, cfg.xi);

    let mut point = DelayedChoicePoint {
        phi,
        open: DetectorCounts::default(),
        closed: DetectorCounts::default(),
    };
    for _ in 0..cfg.events_per_point {
        let mut m = Messenger::new(photon);
        let (arm, msg) = pbs_in.process(0, m.message, r_in.next_uniform())?;
        m.label_path(arm);
        m.message = msg;
        // The configuration is chosen only after the photon has entered an arm.
        let r_n = r_eom.next_uniform();
        let closed = r_n < cfg.closed_probability;
        let counts = if closed { &mut point.closed } else { &mut point.open };
        if blocked == Some(arm) {
            counts.lost += 1;
            continue;
        }
        if arm == 0 {
            m.message = m.message.advance_phase(phi);
        }
        let (port, msg) = pbs_out.process(arm, m.message, r_out.next_uniform())?;
        if port != 0 {
            counts.lost += 1;
            continue;
        }
        m.message = if closed { hwp_transform(msg, eom_theta) } else { msg };
        let (w, _) = wp.process(0, m.message, r_wp.next_uniform())?;
        let d = m.path_label.expect("label set at the input splitter");
        counts.n[usize::from(w)] += 1;
        counts.by_path[usize::from(w)][usize::from(d)] += 1;
        if let Some(ev) = events.as_deref_mut() {
            ev.push(DelayedChoiceEvent { w, d, r: r_n, closed });
        }
    }
    Ok(point)
}

pub fn run_delayed_choice(cfg: &DelayedChoiceConfig, exec: Execution) -> Result<Vec<DelayedChoicePoint>> {
    map_points(&cfg.phases, exec, |i, &phi| run_point(cfg, i, phi, None, None))
}

/// Interference and which-path figures of merit of a delayed-choice run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complementarity {
    /// Visibility of `N0/N` in the closed configuration.
    pub visibility: f64,
    /// `|P(D0 | arm 0 only) − P(D0 | arm 1 only)|` in the closed configuration.
    pub distinguishability: f64,
    /// `|N(D0, arm 0) − N(D0, arm 1)| / N(D0)` over the unblocked scan.
    pub label_asymmetry: f64,
}

/// Evaluate `V` and `D`. The scan supplies `V` and the label asymmetry;
/// two extra closed-configuration runs with one arm blocked supply `D`.
pub fn complementarity(cfg: &DelayedChoiceConfig, points: &[DelayedChoicePoint]) -> Result<Complementarity> {
    let scan = FringeScan {
        phases: points.iter().map(|p| p.phi).collect(),
        intensity: points.iter().map(|p| p.closed.d0_fraction()).collect(),
    };
    let (v, _) = visibility(&scan)?;

    let closed_only = DelayedChoiceConfig {
        closed_probability: 1.0,
        ..cfg.clone()
    };
    let p0 = run_point(&closed_only, 0, 0.0, Some(1), None)?.closed.d0_fraction();
    let p1 = run_point(&closed_only, 0, 0.0, Some(0), None)?.closed.d0_fraction();
    let d = distinguishability(p0, p1)?;

    let (mut a, mut b) = (0u64, 0u64);
    for p in points {
        a += p.closed.by_path[0][0];
        b += p.closed.by_path[0][1];
    }
    let label_asymmetry = if a + b == 0 {
        0.0
    } else {
        (a as f64 - b as f64).abs() / (a + b) as f64
    };
    Ok(Complementarity {
        visibility: v,
        distinguishability: d,
        label_asymmetry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_match_recorded_events() {
        let cfg = DelayedChoiceConfig {
            events_per_point: 3000,
            ..Default::default()
        };
        let mut events = Vec::new();
        let p = run_point(&cfg, 0, 0.3, None, Some(&mut events)).unwrap();
        let from_events = events.iter().filter(|e| e.closed && e.w == 0 && e.d == 1).count();
        assert_eq!(from_events as u64, p.closed.by_path[0][1]);
        let detected = p.open.detected() + p.closed.detected();
        assert_eq!(events.len() as u64, detected);
        assert_eq!(detected + p.open.lost + p.closed.lost, 3000);
    }

    #[test]
    fn open_configuration_shows_no_fringe() {
        let cfg = DelayedChoiceConfig {
            events_per_point: 20_000,
            ..Default::default()
        };
        for (k, phi) in [0.0, 1.5, 3.0].into_iter().enumerate() {
            let f = run_point(&cfg, k, phi, None, None).unwrap().open.d0_fraction();
            assert!((f - 0.5).abs() < 0.03, "phi={phi} f={f}");
        }
    }
}
