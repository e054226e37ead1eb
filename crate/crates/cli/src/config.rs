//! JSON run configuration. Angles are given in degrees and converted to
//! radians when building the simulation configs.

use std::path::Path;

use ebsim_core::experiments::delayed_choice::DelayedChoiceConfig;
use ebsim_core::experiments::eprb::EprbConfig;
use ebsim_core::experiments::full_period;
use ebsim_core::experiments::mzi::MziConfig;
use ebsim_core::experiments::neutron::{NeutronBellConfig, NeutronMziConfig};
use ebsim_core::experiments::two_beam::TwoBeamConfig;
use ebsim_core::messengers::SourceMode;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A config file holds at most one section per experiment.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub two_beam: Option<TwoBeamSection>,
    pub mzi: Option<MziSection>,
    pub delayed_choice: Option<DelayedChoiceSection>,
    pub neutron_mzi: Option<NeutronMziSection>,
    pub eprb: Option<EprbSection>,
    pub neutron_bell: Option<NeutronBellSection>,
    pub analyze: Option<AnalyzeSection>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Values given on the command line take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub events: Option<u64>,
}

fn sweep(step_deg: f64) -> Result<Vec<f64>, CliError> {
    if !(step_deg > 0.0 && step_deg <= 360.0) {
        return Err(CliError::Config(format!("sweep step {step_deg} deg outside (0, 360]")));
    }
    Ok(full_period(step_deg))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TwoBeamSection {
    pub events: u64,
    pub gamma: f64,
    pub slit_width: f64,
    pub slit_separation: f64,
    pub screen_radius: f64,
    pub source: SourceMode,
    pub blank_detectors: bool,
    pub seed: u64,
}

impl Default for TwoBeamSection {
    fn default() -> Self {
        let c = TwoBeamConfig::default();
        Self {
            events: c.events,
            gamma: c.gamma,
            slit_width: c.slit_width,
            slit_separation: c.slit_separation,
            screen_radius: c.screen_radius,
            source: c.mode,
            blank_detectors: c.blank_detectors,
            seed: c.seed,
        }
    }
}

impl TwoBeamSection {
    pub fn resolve(mut self, o: Overrides) -> (Self, TwoBeamConfig) {
        self.seed = o.seed.unwrap_or(self.seed);
        self.events = o.events.unwrap_or(self.events);
        let c = TwoBeamConfig {
            events: self.events,
            gamma: self.gamma,
            slit_width: self.slit_width,
            slit_separation: self.slit_separation,
            screen_radius: self.screen_radius,
            mode: self.source,
            blank_detectors: self.blank_detectors,
            seed: self.seed,
        };
        (self, c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MziSection {
    pub events_per_point: u64,
    pub gamma: f64,
    pub phi_step_deg: f64,
    pub seed: u64,
}

impl Default for MziSection {
    fn default() -> Self {
        let c = MziConfig::default();
        Self {
            events_per_point: c.events_per_point,
            gamma: c.gamma,
            phi_step_deg: 10.0,
            seed: c.seed,
        }
    }
}

impl MziSection {
    pub fn resolve(mut self, o: Overrides) -> Result<(Self, MziConfig), CliError> {
        self.seed = o.seed.unwrap_or(self.seed);
        self.events_per_point = o.events.unwrap_or(self.events_per_point);
        let c = MziConfig {
            events_per_point: self.events_per_point,
            gamma: self.gamma,
            phases: sweep(self.phi_step_deg)?,
            seed: self.seed,
        };
        Ok((self, c))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DelayedChoiceSection {
    pub events_per_point: u64,
    pub gamma: f64,
    /// One scan per reflectivity.
    pub reflectivities: Vec<f64>,
    pub phi_step_deg: f64,
    pub xi_deg: f64,
    pub closed_probability: f64,
    pub seed: u64,
}

impl Default for DelayedChoiceSection {
    fn default() -> Self {
        let c = DelayedChoiceConfig::default();
        Self {
            events_per_point: c.events_per_point,
            gamma: c.gamma,
            reflectivities: vec![c.reflectivity],
            phi_step_deg: 10.0,
            xi_deg: c.xi.to_degrees(),
            closed_probability: c.closed_probability,
            seed: c.seed,
        }
    }
}

impl DelayedChoiceSection {
    pub fn resolve(mut self, o: Overrides) -> Result<(Self, Vec<DelayedChoiceConfig>), CliError> {
        self.seed = o.seed.unwrap_or(self.seed);
        self.events_per_point = o.events.unwrap_or(self.events_per_point);
        if self.reflectivities.is_empty() {
            return Err(CliError::Config("reflectivities must not be empty".into()));
        }
        let phases = sweep(self.phi_step_deg)?;
        let configs = self
            .reflectivities
            .iter()
            .map(|&reflectivity| DelayedChoiceConfig {
                events_per_point: self.events_per_point,
                gamma: self.gamma,
                reflectivity,
                phases: phases.clone(),
                xi: self.xi_deg.to_radians(),
                closed_probability: self.closed_probability,
                seed: self.seed,
            })
            .collect();
        Ok((self, configs))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NeutronMziSection {
    pub events_per_point: u64,
    pub gamma: f64,
    pub reflectivity: f64,
    pub chi_step_deg: f64,
    pub noise_halfwidth_deg: f64,
    pub seed: u64,
}

impl Default for NeutronMziSection {
    fn default() -> Self {
        let c = NeutronMziConfig::default();
        Self {
            events_per_point: c.events_per_point,
            gamma: c.gamma,
            reflectivity: c.reflectivity,
            chi_step_deg: 10.0,
            noise_halfwidth_deg: c.noise_halfwidth.to_degrees(),
            seed: c.seed,
        }
    }
}

impl NeutronMziSection {
    pub fn resolve(mut self, o: Overrides) -> Result<(Self, NeutronMziConfig), CliError> {
        self.seed = o.seed.unwrap_or(self.seed);
        self.events_per_point = o.events.unwrap_or(self.events_per_point);
        let c = NeutronMziConfig {
            events_per_point: self.events_per_point,
            gamma: self.gamma,
            reflectivity: self.reflectivity,
            chis: sweep(self.chi_step_deg)?,
            noise_halfwidth: self.noise_halfwidth_deg.to_radians(),
            seed: self.seed,
        };
        Ok((self, c))
    }
}

/// Clock-offset handling for coincidence counting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyzeSection {
    /// Coincidence windows in ns; one table per window.
    pub windows_ns: Vec<f64>,
    /// Estimate the station clock offset from the time-tag differences.
    pub estimate_delta_g: bool,
    /// Fixed offset in ns, used when no estimate is requested.
    pub delta_g_ns: f64,
    pub bin_width_ns: f64,
    pub max_lag_ns: f64,
}

impl Default for AnalyzeSection {
    fn default() -> Self {
        Self {
            windows_ns: vec![2.0, 50.0, 200.0],
            estimate_delta_g: false,
            delta_g_ns: 0.0,
            bin_width_ns: 0.5,
            max_lag_ns: 1000.0,
        }
    }
}

impl AnalyzeSection {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.windows_ns.is_empty() || self.windows_ns.iter().any(|w| !(*w >= 0.0)) {
            return Err(CliError::Config("windows_ns must be a non-empty list of values >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EprbSection {
    pub pairs: u64,
    pub t0_ns: f64,
    /// `[a1, a1', a2, a2']` in degrees.
    pub angles_deg: [f64; 4],
    pub emission_interval_ns: f64,
    pub seed: u64,
    pub analysis: AnalyzeSection,
}

impl Default for EprbSection {
    fn default() -> Self {
        let c = EprbConfig::default();
        Self {
            pairs: c.pairs,
            t0_ns: c.t0,
            angles_deg: c.angles.map(f64::to_degrees),
            emission_interval_ns: c.emission_interval,
            seed: c.seed,
            analysis: AnalyzeSection::default(),
        }
    }
}

impl EprbSection {
    pub fn resolve(mut self, o: Overrides) -> Result<(Self, EprbConfig), CliError> {
        self.seed = o.seed.unwrap_or(self.seed);
        self.pairs = o.events.unwrap_or(self.pairs);
        self.analysis.validate()?;
        let c = EprbConfig {
            pairs: self.pairs,
            t0: self.t0_ns,
            angles: self.angles_deg.map(f64::to_radians),
            emission_interval: self.emission_interval_ns,
            seed: self.seed,
        };
        Ok((self, c))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NeutronBellSection {
    pub events_per_count: u64,
    pub gamma: f64,
    pub reflectivity: f64,
    pub alpha_step_deg: f64,
    pub chi_step_deg: f64,
    pub random_chi: bool,
    pub seed: u64,
}

impl Default for NeutronBellSection {
    fn default() -> Self {
        let c = NeutronBellConfig::default();
        Self {
            events_per_count: c.events_per_count,
            gamma: c.gamma,
            reflectivity: c.reflectivity,
            alpha_step_deg: 45.0,
            chi_step_deg: 45.0,
            random_chi: c.random_chi,
            seed: c.seed,
        }
    }
}

impl NeutronBellSection {
    pub fn resolve(mut self, o: Overrides) -> Result<(Self, NeutronBellConfig), CliError> {
        self.seed = o.seed.unwrap_or(self.seed);
        self.events_per_count = o.events.unwrap_or(self.events_per_count);
        let c = NeutronBellConfig {
            events_per_count: self.events_per_count,
            gamma: self.gamma,
            reflectivity: self.reflectivity,
            alphas: sweep(self.alpha_step_deg)?,
            chis: sweep(self.chi_step_deg)?,
            random_chi: self.random_chi,
            seed: self.seed,
        };
        Ok((self, c))
    }
}
