//! Single-photon Mach-Zehnder interferometer built from two adaptive beam
//! splitters.

use serde::{Deserialize, Serialize};

use super::{check_events, stream};
use crate::components::{Splitter, SplitterKind};
use crate::error::Result;
use crate::messengers::{ScalarMessage, Spinor};
use crate::sweep::{map_points, Execution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MziConfig {
    pub events_per_point: u64,
    pub gamma: f64,
    /// Phase `φ0` on arm 0 for each sweep point; arm 1 has phase zero.
    pub phases: Vec<f64>,
    pub seed: u64,
}

impl Default for MziConfig {
    fn default() -> Self {
        Self {
            events_per_point: 10_000,
            gamma: 0.98,
            phases: super::full_period(10.0),
            seed: 0,
        }
    }
}

/// Counts behind BS1 (`N0`, `N1`) and BS2 (`N2`, `N3`) at one phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MziPoint {
    pub phi: f64,
    pub counts: [u64; 4],
}

impl MziPoint {
    pub fn fraction(&self, k: usize) -> f64 {
        self.counts[k] as f64 / (self.counts[2] + self.counts[3]) as f64
    }
}

pub fn run_mzi_point(cfg: &MziConfig, index: usize, phi0: f64) -> Result<MziPoint> {
    check_events(cfg.events_per_point)?;
    let base = format!("mzi/{index}");
    let mut src = stream(cfg.seed, format!("{base}/source"));
    let mut r1 = stream(cfg.seed, format!("{base}/bs1"));
    let mut r2 = stream(cfg.seed, format!("{base}/bs2"));
    let mut bs1 = Splitter::new(SplitterKind::Photon5050, cfg.gamma, &mut r1)?;
    let mut bs2 = Splitter::new(SplitterKind::Photon5050, cfg.gamma, &mut r2)?;
    let phases = [phi0, 0.0];
    // A coherent source: one phase for every photon of the run.
    let msg = Spinor::from_scalar(ScalarMessage::from_phase(src.angle()));

    let mut counts = [0u64; 4];
    for _ in 0..cfg.events_per_point {
        let (arm, m) = bs1.process(0, msg, r1.next_uniform())?;
        counts[usize::from(arm)] += 1;
        let m = m.advance_phase(phases[usize::from(arm)]);
        let (out, _) = bs2.process(arm, m, r2.next_uniform())?;
        counts[2 + usize::from(out)] += 1;
    }
    Ok(MziPoint { phi: phi0, counts })
}

pub fn run_mzi(cfg: &MziConfig, exec: Execution) -> Result<Vec<MziPoint>> {
    map_points(&cfg.phases, exec, |i, &phi| run_mzi_point(cfg, i, phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_conserved() {
        let cfg = MziConfig {
            events_per_point: 2000,
            phases: vec![0.0, 1.0],
            ..Default::default()
        };
        for p in run_mzi(&cfg, Execution::Sequential).unwrap() {
            assert_eq!(p.counts[0] + p.counts[1], 2000);
            assert_eq!(p.counts[2] + p.counts[3], 2000);
        }
    }
}
