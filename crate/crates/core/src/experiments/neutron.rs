//! Triple-Laue neutron interferometer and the spin-path Bell test built on it.
//!
//! Splitter ports follow the crystal geometry: a particle entering port 0
//! leaves through port 1 when transmitted and port 0 when reflected. Paths
//! 0 and 1 leave BS0; paths 2 and 3 are the reflected beams of BS1 and BS2
//! and meet at BS3, whose transmitted beam is H and reflected beam is O.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use serde::{Deserialize, Serialize};

use super::{check_events, stream};
use crate::analysis::{neutron_bell_correlation, neutron_bell_s};
use crate::components::{phase_shift, spin_analyzer_select, Splitter, SplitterKind};
use crate::error::{Error, Result};
use crate::messengers::{Axis, Spinor};
use crate::rng::RngStream;
use crate::sweep::{map_points, Execution};

const TRANSMITTED: u8 = 1;

/// Where a neutron leaves the interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exit {
    H(Spinor),
    O(Spinor),
    /// Transmitted at BS1 or BS2; never counted.
    Lost,
}

struct Interferometer {
    splitters: [Splitter; 4],
    rngs: [RngStream; 4],
    mu_metal: bool,
}

impl Interferometer {
    fn new(seed: u64, base: &str, gamma: f64, reflectivity: f64, mu_metal: bool) -> Result<Self> {
        let kind = SplitterKind::Neutron { reflectivity };
        let mut rngs = [0, 1, 2, 3].map(|k| stream(seed, format!("{base}/bs{k}")));
        let mut make = |k: usize| Splitter::new(kind, gamma, &mut rngs[k]);
        let splitters = [make(0)?, make(1)?, make(2)?, make(3)?];
        Ok(Self {
            splitters,
            rngs,
            mu_metal,
        })
    }

    fn split(&mut self, k: usize, input: u8, msg: Spinor) -> Result<(u8, Spinor)> {
        let r = self.rngs[k].next_uniform();
        self.splitters[k].process(input, msg, r)
    }

    fn send(&mut self, msg: Spinor, chi0: f64, chi1: f64) -> Result<Exit> {
        let (port, mut m) = self.split(0, 0, msg)?;
        let path = if port == TRANSMITTED { 0 } else { 1 };
        if self.mu_metal {
            let angle = if path == 0 { -FRAC_PI_2 } else { FRAC_PI_2 };
            m = m.su2_rotate(Axis::Y, angle);
        }
        let (port, m) = self.split(1 + path, 0, m)?;
        if port == TRANSMITTED {
            return Ok(Exit::Lost);
        }
        // Reflected at BS1 → path 2 → BS3 input 0; at BS2 → path 3 → input 1.
        let m = phase_shift(m, if path == 0 { chi0 } else { chi1 });
        let (port, m) = self.split(3, path as u8, m)?;
        Ok(if port == TRANSMITTED { Exit::H(m) } else { Exit::O(m) })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutronMziConfig {
    pub events_per_point: u64,
    pub gamma: f64,
    pub reflectivity: f64,
    /// Phase difference `χ = χ0 − χ1` for each sweep point.
    pub chis: Vec<f64>,
    /// Half-width `η` of the per-neutron phase noise `δ1, δ2 ∈ [−η, η]`.
    pub noise_halfwidth: f64,
    pub seed: u64,
}

impl Default for NeutronMziConfig {
    fn default() -> Self {
        Self {
            events_per_point: 100_000,
            gamma: 0.99,
            reflectivity: 0.2,
            chis: super::full_period(10.0),
            noise_halfwidth: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutronMziPoint {
    pub chi: f64,
    pub o: u64,
    pub h: u64,
    pub emitted: u64,
}

pub fn run_neutron_mzi_point(cfg: &NeutronMziConfig, index: usize, chi: f64) -> Result<NeutronMziPoint> {
    check_events(cfg.events_per_point)?;
    if !(cfg.noise_halfwidth >= 0.0) {
        return Err(Error::config("noise half-width must be non-negative"));
    }
    let base = format!("neutron_mzi/{index}");
    let mut src = stream(cfg.seed, format!("{base}/source"));
    let mut ifm = Interferometer::new(cfg.seed, &base, cfg.gamma, cfg.reflectivity, false)?;
    let (psi1, psi2, theta) = (src.angle(), src.angle(), src.uniform_in(0.0, PI));
    let eta = cfg.noise_halfwidth;

    let mut point = NeutronMziPoint {
        chi,
        o: 0,
        h: 0,
        emitted: cfg.events_per_point,
    };
    for _ in 0..cfg.events_per_point {
        let (d1, d2) = if eta > 0.0 {
            (src.uniform_in(-eta, eta), src.uniform_in(-eta, eta))
        } else {
            (0.0, 0.0)
        };
        let msg = Spinor::neutron(psi1 + d1, psi2 + d2, theta);
        match ifm.send(msg, chi, 0.0)? {
            Exit::H(_) => point.h += 1,
            Exit::O(_) => point.o += 1,
            Exit::Lost => {}
        }
    }
    Ok(point)
}

pub fn run_neutron_mzi(cfg: &NeutronMziConfig, exec: Execution) -> Result<Vec<NeutronMziPoint>> {
    map_points(&cfg.chis, exec, |i, &chi| run_neutron_mzi_point(cfg, i, chi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutronBellConfig {
    /// Neutrons per count `N(α, χ)`.
    pub events_per_count: u64,
    pub gamma: f64,
    pub reflectivity: f64,
    /// Spin-rotator angles.
    pub alphas: Vec<f64>,
    /// Phase differences. With `random_chi` the grid must contain `χ + π`
    /// for every `χ`.
    pub chis: Vec<f64>,
    /// Draw `χ` from the grid for every neutron instead of holding it fixed.
    pub random_chi: bool,
    pub seed: u64,
}

impl Default for NeutronBellConfig {
    fn default() -> Self {
        Self {
            events_per_count: 10_000,
            gamma: 0.99,
            reflectivity: 0.2,
            alphas: super::full_period(45.0),
            chis: super::full_period(45.0),
            random_chi: false,
            seed: 0,
        }
    }
}

/// Offsets `(Δα, Δχ)` of the four counts that make up one correlation.
const COUNT_OFFSETS: [(f64, f64); 4] = [(0.0, 0.0), (PI, PI), (PI, 0.0), (0.0, PI)];

/// Spin-up O-beam counts `N(α,χ), N(α+π,χ+π), N(α+π,χ), N(α,χ+π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutronBellPoint {
    pub alpha: f64,
    pub chi: f64,
    pub counts: [u64; 4],
}

impl NeutronBellPoint {
    pub fn correlation(&self) -> Result<f64> {
        let [n1, n2, n3, n4] = self.counts;
        neutron_bell_correlation(n1, n2, n3, n4)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutronBellGrid {
    pub points: Vec<NeutronBellPoint>,
}

fn same_angle(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d < 1e-9 || TAU - d < 1e-9
}

fn index_of(grid: &[f64], angle: f64) -> Option<usize> {
    grid.iter().position(|&g| same_angle(g, angle))
}

impl NeutronBellGrid {
    pub fn point(&self, alpha: f64, chi: f64) -> Option<&NeutronBellPoint> {
        self.points
            .iter()
            .find(|p| same_angle(p.alpha, alpha) && same_angle(p.chi, chi))
    }

    /// `E(α, χ)` looked up modulo `2π`.
    pub fn correlation(&self, alpha: f64, chi: f64) -> Result<f64> {
        self.point(alpha, chi)
            .ok_or_else(|| Error::config(format!("({alpha}, {chi}) is not on the grid")))?
            .correlation()
    }

    /// CHSH combination `E(α,χ) + E(α,χ′) − E(α′,χ) + E(α′,χ′)`.
    pub fn chsh(&self, alpha: f64, chi: f64, alpha_p: f64, chi_p: f64) -> Result<f64> {
        Ok(neutron_bell_s(
            self.correlation(alpha, chi)?,
            self.correlation(alpha, chi_p)?,
            self.correlation(alpha_p, chi)?,
            self.correlation(alpha_p, chi_p)?,
        ))
    }

    /// `S` at `α = 0, χ = π/4, α′ = π/2, χ′ = −π/4`, where the ideal
    /// correlation gives `2√2`.
    pub fn s_max(&self) -> Result<f64> {
        self.chsh(0.0, FRAC_PI_4, FRAC_PI_2, -FRAC_PI_4)
    }
}

struct BellSetup {
    ifm: Interferometer,
    msg: Spinor,
    analyzer: RngStream,
}

impl BellSetup {
    fn new(cfg: &NeutronBellConfig, base: &str) -> Result<Self> {
        let mut src = stream(cfg.seed, format!("{base}/source"));
        // Spin up along the guide field; only the global phase is random.
        let msg = Spinor::neutron(src.angle(), src.angle(), 0.0);
        Ok(Self {
            ifm: Interferometer::new(cfg.seed, base, cfg.gamma, cfg.reflectivity, true)?,
            msg,
            analyzer: stream(cfg.seed, format!("{base}/analyzer")),
        })
    }

    /// Send one neutron; true if it passes the spin analyzer in the O-beam.
    fn detect(&mut self, alpha: f64, chi: f64) -> Result<bool> {
        Ok(match self.ifm.send(self.msg, chi, 0.0)? {
            Exit::O(m) => spin_analyzer_select(m.su2_rotate(Axis::X, alpha), self.analyzer.next_uniform()),
            _ => false,
        })
    }
}

/// The four counts of one grid point, taken one after another on the same
/// interferometer.
fn fixed_point(cfg: &NeutronBellConfig, i: usize, j: usize) -> Result<NeutronBellPoint> {
    let mut setup = BellSetup::new(cfg, &format!("neutron_bell/{i}/{j}"))?;
    let (alpha, chi) = (cfg.alphas[i], cfg.chis[j]);
    let mut counts = [0u64; 4];
    for (n, (da, dc)) in counts.iter_mut().zip(COUNT_OFFSETS) {
        for _ in 0..cfg.events_per_count {
            *n += u64::from(setup.detect(alpha + da, chi + dc)?);
        }
    }
    Ok(NeutronBellPoint { alpha, chi, counts })
}

/// Spin-rotator settings `α` then `α + π`, each for `events_per_count`
/// neutrons per grid `χ`; every neutron meets a randomly chosen `χ`.
fn random_chi_row(cfg: &NeutronBellConfig, i: usize) -> Result<Vec<NeutronBellPoint>> {
    let base = format!("neutron_bell/random_chi/{i}");
    let mut setup = BellSetup::new(cfg, &base)?;
    let mut chooser = stream(cfg.seed, format!("{base}/chi"));
    let alpha = cfg.alphas[i];
    let k = cfg.chis.len();
    let mut bins = [vec![0u64; k], vec![0u64; k]];
    for (b, da) in bins.iter_mut().zip([0.0, PI]) {
        for _ in 0..cfg.events_per_count * k as u64 {
            let j = ((chooser.next_uniform() * k as f64) as usize).min(k - 1);
            b[j] += u64::from(setup.detect(alpha + da, cfg.chis[j])?);
        }
    }
    cfg.chis
        .iter()
        .enumerate()
        .map(|(j, &chi)| {
            let jp = index_of(&cfg.chis, chi + PI).expect("grid checked for pi partners");
            Ok(NeutronBellPoint {
                alpha,
                chi,
                counts: [bins[0][j], bins[1][jp], bins[1][j], bins[0][jp]],
            })
        })
        .collect()
}

pub fn run_neutron_bell(cfg: &NeutronBellConfig, exec: Execution) -> Result<NeutronBellGrid> {
    check_events(cfg.events_per_count)?;
    if cfg.alphas.is_empty() || cfg.chis.is_empty() {
        return Err(Error::config("alpha and chi grids must be non-empty"));
    }
    let points = if cfg.random_chi {
        if let Some(&c) = cfg.chis.iter().find(|&&c| index_of(&cfg.chis, c + PI).is_none()) {
            return Err(Error::config(format!(
                "chi grid lacks the partner of {c} shifted by pi"
            )));
        }
        let rows: Vec<usize> = (0..cfg.alphas.len()).collect();
        map_points(&rows, exec, |_, &i| random_chi_row(cfg, i))?
            .into_iter()
            .flatten()
            .collect()
    } else {
        let cells: Vec<(usize, usize)> = (0..cfg.alphas.len())
            .flat_map(|i| (0..cfg.chis.len()).map(move |j| (i, j)))
            .collect();
        map_points(&cells, exec, |_, &(i, j)| fixed_point(cfg, i, j))?
    };
    Ok(NeutronBellGrid { points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_chi_grid_must_be_closed_under_pi() {
        let cfg = NeutronBellConfig {
            chis: vec![0.0, 1.0],
            random_chi: true,
            ..Default::default()
        };
        assert!(matches!(run_neutron_bell(&cfg, Execution::Sequential), Err(Error::Config(_))));
    }

    #[test]
    fn counted_neutrons_never_exceed_emitted() {
        let cfg = NeutronMziConfig {
            events_per_point: 5000,
            chis: vec![0.0, 2.0],
            ..Default::default()
        };
        for p in run_neutron_mzi(&cfg, Execution::Sequential).unwrap() {
            assert!(p.o + p.h <= p.emitted);
        }
    }
}
