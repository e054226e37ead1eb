//! Result tables and their CSV/JSON encodings.

use std::io::Read;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Degrees rounded to 1e-9 so that sweep angles print as `30`, not
/// `29.999999999999996`.
pub fn deg(rad: f64) -> f64 {
    (rad.to_degrees() * 1e9).round() / 1e9
}

pub fn encode<T: Serialize>(rows: &[T], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| CliError::io("csv encoding", e))?;
            }
            w.into_inner().map_err(|e| CliError::io("csv encoding", e))
        }
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(rows).map_err(|e| CliError::io("json encoding", e))?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

pub fn decode_csv<T: DeserializeOwned>(input: impl Read) -> Result<Vec<T>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoBeamRow {
    pub theta_deg: f64,
    /// Photons that reached the detector.
    pub counts: u64,
    pub clicks: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MziRow {
    pub phi_deg: f64,
    #[serde(rename = "N0")]
    pub n0: u64,
    #[serde(rename = "N1")]
    pub n1: u64,
    #[serde(rename = "N2")]
    pub n2: u64,
    #[serde(rename = "N3")]
    pub n3: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Configuration {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayedChoiceRow {
    pub phi_deg: f64,
    #[serde(rename = "R")]
    pub reflectivity: f64,
    pub config: Configuration,
    #[serde(rename = "N0")]
    pub n0: u64,
    #[serde(rename = "N1")]
    pub n1: u64,
    #[serde(rename = "N0_path0")]
    pub n0_path0: u64,
    #[serde(rename = "N0_path1")]
    pub n0_path1: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutronMziRow {
    pub chi_deg: f64,
    #[serde(rename = "NO")]
    pub n_o: u64,
    #[serde(rename = "NH")]
    pub n_h: u64,
}

/// One setting pair at one coincidence window. `S` repeats on the four
/// rows of a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EprbRow {
    #[serde(rename = "W_ns")]
    pub window_ns: f64,
    pub a1: f64,
    pub a2: f64,
    #[serde(rename = "Cpp")]
    pub cpp: u64,
    #[serde(rename = "Cpm")]
    pub cpm: u64,
    #[serde(rename = "Cmp")]
    pub cmp: u64,
    #[serde(rename = "Cmm")]
    pub cmm: u64,
    #[serde(rename = "E1")]
    pub e1: Option<f64>,
    #[serde(rename = "E2")]
    pub e2: Option<f64>,
    #[serde(rename = "E")]
    pub e: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutronBellRow {
    pub alpha_deg: f64,
    pub chi_deg: f64,
    #[serde(rename = "N1")]
    pub n1: u64,
    #[serde(rename = "N2")]
    pub n2: u64,
    #[serde(rename = "N3")]
    pub n3: u64,
    #[serde(rename = "N4")]
    pub n4: u64,
    /// Empty when all four counts are zero.
    #[serde(rename = "E")]
    pub e: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleMziRow {
    pub phi_deg: f64,
    pub sin2_half_phi: f64,
    pub cos2_half_phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleTwoBeamRow {
    pub theta_deg: f64,
    pub intensity: f64,
    pub envelope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleMalusRow {
    pub angle_deg: f64,
    pub sin2: f64,
    pub cos2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleNeutronMziRow {
    pub chi_deg: f64,
    #[serde(rename = "pO")]
    pub p_o: f64,
    #[serde(rename = "pH")]
    pub p_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleNeutronBellRow {
    pub alpha_deg: f64,
    pub chi_deg: f64,
    pub p: f64,
    #[serde(rename = "E")]
    pub e: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSingletRow {
    pub delta_deg: f64,
    #[serde(rename = "E_photon")]
    pub e_photon: f64,
    #[serde(rename = "E_spin")]
    pub e_spin: f64,
}
