//! EPRB experiment with polarization-dependent time tags.

use serde::{Deserialize, Serialize};

use super::{check_events, stream};
use crate::analysis::{chsh_s, coincidence_count, correlations, CoincidenceTable, Correlations};
use crate::components::{malus_pbs_sample, time_tag_sample};
use crate::data::StationEvent;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EprbConfig {
    pub pairs: u64,
    /// Maximum time-tag delay `T0` in ns.
    pub t0: f64,
    /// Analyzer angles `[a1, a1′, a2, a2′]` in radians.
    pub angles: [f64; 4],
    /// Time between successive pair emissions in ns.
    pub emission_interval: f64,
    pub seed: u64,
}

impl Default for EprbConfig {
    fn default() -> Self {
        use std::f64::consts::PI;
        Self {
            pairs: 300_000,
            t0: 1000.0,
            angles: [0.0, PI / 4.0, PI / 8.0, 3.0 * PI / 8.0],
            emission_interval: 30_000.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EprbData {
    pub station1: Vec<StationEvent>,
    pub station2: Vec<StationEvent>,
}

struct Station {
    eom: crate::rng::RngStream,
    pbs: crate::rng::RngStream,
    tag: crate::rng::RngStream,
    settings: [f64; 2],
    offset: f64,
}

impl Station {
    fn new(seed: u64, i: usize, settings: [f64; 2]) -> Self {
        let base = format!("eprb/station{i}");
        Self {
            eom: stream(seed, format!("{base}/eom")),
            pbs: stream(seed, format!("{base}/pbs")),
            tag: stream(seed, format!("{base}/tag")),
            settings,
            offset: (i as f64 - 1.0) * std::f64::consts::FRAC_PI_2,
        }
    }

    fn measure(&mut self, xi: f64, emitted_at: f64, t0: f64) -> Result<StationEvent> {
        let setting = u8::from(self.eom.bit());
        let xi_p = xi + self.offset - self.settings[usize::from(setting)];
        let x = malus_pbs_sample(xi_p, self.pbs.next_uniform());
        let t = emitted_at + time_tag_sample(xi_p, t0, self.tag.next_uniform())?;
        Ok(StationEvent { x, t, setting })
    }
}

pub fn run_eprb(cfg: &EprbConfig) -> Result<EprbData> {
    check_events(cfg.pairs)?;
    if !(cfg.emission_interval > 0.0) {
        return Err(Error::config("emission interval must be positive"));
    }
    let mut source = stream(cfg.seed, "eprb/source");
    let [a1, a1p, a2, a2p] = cfg.angles;
    let mut s1 = Station::new(cfg.seed, 1, [a1, a1p]);
    let mut s2 = Station::new(cfg.seed, 2, [a2, a2p]);
    let n = cfg.pairs as usize;
    let mut data = EprbData {
        station1: Vec::with_capacity(n),
        station2: Vec::with_capacity(n),
    };
    for k in 0..cfg.pairs {
        let xi = source.angle();
        let at = k as f64 * cfg.emission_interval;
        data.station1.push(s1.measure(xi, at, cfg.t0)?);
        data.station2.push(s2.measure(xi, at, cfg.t0)?);
    }
    Ok(data)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EprbAnalysis {
    pub table: CoincidenceTable,
    /// `correlations[s1][s2]` for setting indices of the two stations.
    pub correlations: [[Correlations; 2]; 2],
    pub s: f64,
}

/// Count coincidences within `window` and form the four correlations and `S`.
pub fn analyze_eprb(data: &EprbData, window: f64, delta_g: f64) -> Result<EprbAnalysis> {
    let table = coincidence_count(&data.station1, &data.station2, window, delta_g)?;
    let c = |i, j| correlations(table.cell(i, j));
    let correlations = [[c(0, 0)?, c(0, 1)?], [c(1, 0)?, c(1, 1)?]];
    let s = chsh_s(
        correlations[0][0].e,
        correlations[0][1].e,
        correlations[1][0].e,
        correlations[1][1].e,
    )?;
    Ok(EprbAnalysis {
        table,
        correlations,
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stations_record_every_pair() {
        let cfg = EprbConfig {
            pairs: 1000,
            ..Default::default()
        };
        let d = run_eprb(&cfg).unwrap();
        assert_eq!(d.station1.len(), 1000);
        assert_eq!(d.station2.len(), 1000);
        assert!(d.station1.iter().all(|e| e.x.abs() == 1 && e.setting < 2));
    }

    #[test]
    fn station_one_ignores_station_two_settings() {
        let a = EprbConfig {
            pairs: 2000,
            ..Default::default()
        };
        let mut b = a.clone();
        b.angles[2] = 1.0;
        b.angles[3] = -0.3;
        assert_eq!(run_eprb(&a).unwrap().station1, run_eprb(&b).unwrap().station1);
    }
}
