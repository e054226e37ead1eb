//! Command-line front end: config parsing, experiment dispatch and result
//! serialization.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod manifest;
pub mod output;
mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use error::CliError;
pub use output::Format;
pub use run::{run, EprbEventFile};

#[derive(Debug, Parser)]
#[command(name = "ebsim", version, about = "Event-by-event simulation of interference and EPRB experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config with one section per experiment.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Event count: per sweep point, per count, or pairs for `eprb`.
    #[arg(long, global = true)]
    pub events: Option<u64>,
    /// Result table path; stdout when omitted. The manifest is written next
    /// to it as `<stem>.manifest.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Evaluate sweep points one after another.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    TwoBeam,
    Mzi,
    DelayedChoice,
    NeutronMzi,
    Eprb {
        /// Also save the raw station records for `analyze`.
        #[arg(long)]
        events_out: Option<PathBuf>,
    },
    NeutronBell,
    /// Closed-form predictions.
    Oracle {
        #[arg(value_enum)]
        which: OracleKind,
        #[arg(long, default_value_t = 10.0)]
        step_deg: f64,
    },
    /// Recount coincidences in saved EPRB station records.
    Analyze { input: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Malus,
    TwoBeam,
    Mzi,
    NeutronMzi,
    NeutronBell,
    Singlet,
}
