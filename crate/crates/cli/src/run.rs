use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ebsim_core::analysis::{chsh_s, coincidence_count, correlations, delta_g_estimate};
use ebsim_core::experiments::delayed_choice::{complementarity, run_delayed_choice};
use ebsim_core::experiments::eprb::{run_eprb, EprbData};
use ebsim_core::experiments::full_period;
use ebsim_core::experiments::mzi::run_mzi;
use ebsim_core::experiments::neutron::{run_neutron_bell, run_neutron_mzi};
use ebsim_core::experiments::two_beam::{run_two_beam, TwoBeamResult};
use ebsim_core::fit::fit_amplitude;
use ebsim_core::oracle;
use ebsim_core::Execution;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{
    AnalyzeSection, ConfigFile, NeutronBellSection, NeutronMziSection, Overrides, TwoBeamSection,
};
use crate::error::CliError;
use crate::manifest::{config_digest, manifest_path, RunManifest};
use crate::output::*;
use crate::{Cli, Command, OracleKind};

struct Report {
    experiment: &'static str,
    digest: String,
    seed: Option<u64>,
    table: Vec<u8>,
    summary: Value,
    extra_outputs: Vec<PathBuf>,
}

/// Saved station records together with the analyzer angles (degrees).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EprbEventFile {
    pub angles_deg: [f64; 4],
    pub station1: Vec<ebsim_core::data::StationEvent>,
    pub station2: Vec<ebsim_core::data::StationEvent>,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let file = ConfigFile::load(cli.config.as_deref())?;
    let o = Overrides {
        seed: cli.seed,
        events: cli.events,
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let f = cli.format;
    let report = match &cli.command {
        Command::TwoBeam => two_beam(file.two_beam.unwrap_or_default(), o, f)?,
        Command::Mzi => mzi(&file, o, f, exec)?,
        Command::DelayedChoice => delayed_choice(&file, o, f, exec)?,
        Command::NeutronMzi => neutron_mzi(file.neutron_mzi.unwrap_or_default(), o, f, exec)?,
        Command::Eprb { events_out } => eprb(&file, o, f, events_out.as_deref())?,
        Command::NeutronBell => neutron_bell(file.neutron_bell.unwrap_or_default(), o, f, exec)?,
        Command::Oracle { which, step_deg } => oracle_table(&file, *which, *step_deg, f)?,
        Command::Analyze { input } => analyze(&file, input, f)?,
    };

    let Some(out) = &cli.out else {
        return std::io::stdout()
            .write_all(&report.table)
            .map_err(|e| CliError::io("stdout", e));
    };
    std::fs::write(out, &report.table).map_err(|e| CliError::io(&out.display().to_string(), e))?;
    let mut outputs = vec![out.clone()];
    outputs.extend(report.extra_outputs);
    let manifest = RunManifest {
        experiment: report.experiment.into(),
        config_digest: report.digest,
        seed: report.seed,
        version: env!("CARGO_PKG_VERSION").into(),
        outputs,
        duration_s: start.elapsed().as_secs_f64(),
        summary: report.summary,
    };
    let path = manifest_path(out);
    let text = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::io("manifest", e))?;
    std::fs::write(&path, text).map_err(|e| CliError::io(&path.display().to_string(), e))
}

fn rms(pairs: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for (a, b) in pairs {
        s += (a - b).powi(2);
        n += 1;
    }
    (s / n.max(1) as f64).sqrt()
}

fn two_beam(section: TwoBeamSection, o: Overrides, f: Format) -> Result<Report, CliError> {
    let (section, cfg) = section.resolve(o);
    let res = run_two_beam(&cfg)?;
    let angles = TwoBeamResult::angles_deg();
    let rows: Vec<_> = angles
        .iter()
        .zip(res.arrivals.iter().zip(&res.clicks))
        .map(|(&theta_deg, (&counts, &clicks))| TwoBeamRow {
            theta_deg,
            counts,
            clicks,
        })
        .collect();
    let model: Vec<f64> = angles
        .iter()
        .map(|t| oracle::two_beam_intensity(t.to_radians(), cfg.slit_width, cfg.slit_separation))
        .collect();
    let data: Vec<f64> = res.clicks.iter().map(|&c| c as f64).collect();
    let fit = fit_amplitude(&model, &data)?;
    Ok(Report {
        experiment: "two-beam",
        digest: config_digest(&("two_beam", &section))?,
        seed: Some(section.seed),
        table: encode(&rows, f)?,
        summary: json!({
            "fit_amplitude": fit.amplitude,
            "fit_rms": fit.rms,
            "fit_r_squared": fit.r_squared,
            "detected": res.detected(),
            "emitted": res.emitted,
            "efficiency": res.efficiency(),
        }),
        extra_outputs: vec![],
    })
}

fn mzi(file: &ConfigFile, o: Overrides, f: Format, exec: Execution) -> Result<Report, CliError> {
    let (section, cfg) = file.mzi.clone().unwrap_or_default().resolve(o)?;
    let points = run_mzi(&cfg, exec)?;
    let rows: Vec<_> = points
        .iter()
        .map(|p| MziRow {
            phi_deg: deg(p.phi),
            n0: p.counts[0],
            n1: p.counts[1],
            n2: p.counts[2],
            n3: p.counts[3],
        })
        .collect();
    let err = rms(points.iter().map(|p| (p.fraction(2), (p.phi / 2.0).sin().powi(2))));
    Ok(Report {
        experiment: "mzi",
        digest: config_digest(&("mzi", &section))?,
        seed: Some(section.seed),
        table: encode(&rows, f)?,
        summary: json!({ "rms_n2_vs_sin2_half_phi": err }),
        extra_outputs: vec![],
    })
}

fn delayed_choice(file: &ConfigFile, o: Overrides, f: Format, exec: Execution) -> Result<Report, CliError> {
    let (section, configs) = file.delayed_choice.clone().unwrap_or_default().resolve(o)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for cfg in &configs {
        let points = run_delayed_choice(cfg, exec)?;
        for p in &points {
            for (config, c) in [(Configuration::Open, &p.open), (Configuration::Closed, &p.closed)] {
                rows.push(DelayedChoiceRow {
                    phi_deg: deg(p.phi),
                    reflectivity: cfg.reflectivity,
                    config,
                    n0: c.n[0],
                    n1: c.n[1],
                    n0_path0: c.by_path[0][0],
                    n0_path1: c.by_path[0][1],
                });
            }
        }
        let comp = complementarity(cfg, &points)?;
        summary.push(json!({
            "R": cfg.reflectivity,
            "visibility": comp.visibility,
            "distinguishability": comp.distinguishability,
            "label_asymmetry": comp.label_asymmetry,
        }));
    }
    Ok(Report {
        experiment: "delayed-choice",
        digest: config_digest(&("delayed_choice", &section))?,
        seed: Some(section.seed),
        table: encode(&rows, f)?,
        summary: Value::Array(summary),
        extra_outputs: vec![],
    })
}

fn neutron_mzi(section: NeutronMziSection, o: Overrides, f: Format, exec: Execution) -> Result<Report, CliError> {
    let (section, cfg) = section.resolve(o)?;
    let points = run_neutron_mzi(&cfg, exec)?;
    let rows: Vec<_> = points
        .iter()
        .map(|p| NeutronMziRow {
            chi_deg: deg(p.chi),
            n_o: p.o,
            n_h: p.h,
        })
        .collect();
    let mut pairs = Vec::new();
    for p in &points {
        let (ph, po) = oracle::neutron_mzi_probabilities(p.chi, cfg.reflectivity)?;
        if p.o + p.h > 0 && po + ph > 0.0 {
            pairs.push((p.o as f64 / (p.o + p.h) as f64, po / (po + ph)));
        }
    }
    Ok(Report {
        experiment: "neutron-mzi",
        digest: config_digest(&("neutron_mzi", &section))?,
        seed: Some(section.seed),
        table: encode(&rows, f)?,
        summary: json!({ "rms_o_fraction_vs_oracle": rms(pairs.into_iter()) }),
        extra_outputs: vec![],
    })
}

/// One row per setting pair and window, plus a per-window summary.
fn eprb_rows(
    s1: &[ebsim_core::data::StationEvent],
    s2: &[ebsim_core::data::StationEvent],
    angles_deg: [f64; 4],
    a: &AnalyzeSection,
) -> Result<(Vec<EprbRow>, Value), CliError> {
    a.validate()?;
    let (delta_g, low_confidence) = if a.estimate_delta_g {
        let d = delta_g_estimate(s1, s2, a.bin_width_ns, a.max_lag_ns)?;
        (d.value, d.low_confidence)
    } else {
        (a.delta_g_ns, false)
    };
    let mut rows = Vec::new();
    let mut windows = Vec::new();
    for &w in &a.windows_ns {
        let table = coincidence_count(s1, s2, w, delta_g)?;
        let corr = [[0u8, 0], [0, 1], [1, 0], [1, 1]].map(|[i, j]| correlations(table.cell(i, j)).ok());
        let s = match corr {
            [Some(a), Some(b), Some(c), Some(d)] => chsh_s(a.e, b.e, c.e, d.e).ok(),
            _ => None,
        };
        for (k, c) in corr.iter().enumerate() {
            let (i, j) = (k / 2, k % 2);
            let [cpp, cpm, cmp, cmm] = table.cell(i as u8, j as u8);
            rows.push(EprbRow {
                window_ns: w,
                a1: angles_deg[i],
                a2: angles_deg[2 + j],
                cpp,
                cpm,
                cmp,
                cmm,
                e1: c.map(|c| c.e1),
                e2: c.map(|c| c.e2),
                e: c.map(|c| c.e),
                s,
            });
        }
        windows.push(json!({ "W_ns": w, "S": s, "coincidences": table.total() }));
    }
    let summary = json!({
        "delta_g_ns": delta_g,
        "delta_g_low_confidence": low_confidence,
        "events_station1": s1.len(),
        "events_station2": s2.len(),
        "windows": windows,
    });
    Ok((rows, summary))
}

fn eprb(file: &ConfigFile, o: Overrides, f: Format, events_out: Option<&Path>) -> Result<Report, CliError> {
    let (section, cfg) = file.eprb.clone().unwrap_or_default().resolve(o)?;
    let EprbData { station1, station2 } = run_eprb(&cfg)?;
    let (rows, summary) = eprb_rows(&station1, &station2, section.angles_deg, &section.analysis)?;
    let mut extra_outputs = vec![];
    if let Some(path) = events_out {
        let saved = EprbEventFile {
            angles_deg: section.angles_deg,
            station1,
            station2,
        };
        let text = serde_json::to_vec(&saved).map_err(|e| CliError::io("event encoding", e))?;
        std::fs::write(path, text).map_err(|e| CliError::io(&path.display().to_string(), e))?;
        extra_outputs.push(path.to_path_buf());
    }
    Ok(Report {
        experiment: "eprb",
        digest: config_digest(&("eprb", &section))?,
        seed: Some(section.seed),
        table: encode(&rows, f)?,
        summary,
        extra_outputs,
    })
}

fn analyze(file: &ConfigFile, input: &Path, f: Format) -> Result<Report, CliError> {
    let section = file.analyze.clone().unwrap_or_default();
    let text = std::fs::read(input).map_err(|e| CliError::io(&input.display().to_string(), e))?;
    let events: EprbEventFile = serde_json::from_slice(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
    for ev in events.station1.iter().chain(&events.station2) {
        if !matches!(ev.x, -1 | 1) || ev.setting > 1 || !(ev.t >= 0.0) {
            return Err(CliError::Config(format!("{}: invalid event {ev:?}", input.display())));
        }
    }
    let (rows, summary) = eprb_rows(&events.station1, &events.station2, events.angles_deg, &section)?;
    Ok(Report {
        experiment: "analyze",
        digest: config_digest(&("analyze", &section, Sha(&text)))?,
        seed: None,
        table: encode(&rows, f)?,
        summary,
        extra_outputs: vec![],
    })
}

/// Input file contents enter the digest by hash.
struct Sha<'a>(&'a [u8]);

impl Serialize for Sha<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use sha2::Digest;
        s.serialize_str(&hex::encode(sha2::Sha256::digest(self.0)))
    }
}

fn neutron_bell(section: NeutronBellSection, o: Overrides, f: Format, exec: Execution) -> Result<Report, CliError> {
    let (section, cfg) = section.resolve(o)?;
    let grid = run_neutron_bell(&cfg, exec)?;
    let rows: Vec<_> = grid
        .points
        .iter()
        .map(|p| NeutronBellRow {
            alpha_deg: deg(p.alpha),
            chi_deg: deg(p.chi),
            n1: p.counts[0],
            n2: p.counts[1],
            n3: p.counts[2],
            n4: p.counts[3],
            e: p.correlation().ok(),
        })
        .collect();
    Ok(Report {
        experiment: "neutron-bell",
        digest: config_digest(&("neutron_bell", &section))?,
        seed: Some(section.seed),
        table: encode(&rows, f)?,
        summary: json!({ "S_max": grid.s_max().ok() }),
        extra_outputs: vec![],
    })
}

fn oracle_table(file: &ConfigFile, which: OracleKind, step_deg: f64, f: Format) -> Result<Report, CliError> {
    if !(step_deg > 0.0 && step_deg <= 360.0) {
        return Err(CliError::Config(format!("step {step_deg} deg outside (0, 360]")));
    }
    let angles = full_period(step_deg);
    let (table, params) = match which {
        OracleKind::Malus => {
            let rows: Vec<_> = angles
                .iter()
                .map(|&a| {
                    let (sin2, cos2) = oracle::malus_intensity(a, 0.0);
                    OracleMalusRow { angle_deg: deg(a), sin2, cos2 }
                })
                .collect();
            (encode(&rows, f)?, json!(null))
        }
        OracleKind::Mzi => {
            let rows: Vec<_> = angles
                .iter()
                .map(|&phi| OracleMziRow {
                    phi_deg: deg(phi),
                    sin2_half_phi: (phi / 2.0).sin().powi(2),
                    cos2_half_phi: (phi / 2.0).cos().powi(2),
                })
                .collect();
            (encode(&rows, f)?, json!(null))
        }
        OracleKind::TwoBeam => {
            let s = file.two_beam.clone().unwrap_or_default();
            let rows: Vec<_> = TwoBeamResult::angles_deg()
                .into_iter()
                .map(|theta_deg| {
                    let t = theta_deg.to_radians();
                    OracleTwoBeamRow {
                        theta_deg,
                        intensity: oracle::two_beam_intensity(t, s.slit_width, s.slit_separation),
                        envelope: oracle::single_slit_intensity(t, s.slit_width),
                    }
                })
                .collect();
            (encode(&rows, f)?, json!([s.slit_width, s.slit_separation]))
        }
        OracleKind::NeutronMzi => {
            let r = file.neutron_mzi.clone().unwrap_or_default().reflectivity;
            let rows = angles
                .iter()
                .map(|&chi| {
                    let (p_h, p_o) = oracle::neutron_mzi_probabilities(chi, r)?;
                    Ok(OracleNeutronMziRow { chi_deg: deg(chi), p_o, p_h })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            (encode(&rows, f)?, json!(r))
        }
        OracleKind::NeutronBell => {
            let r = file.neutron_bell.clone().unwrap_or_default().reflectivity;
            let mut rows = Vec::new();
            for &alpha in &angles {
                for &chi in &angles {
                    rows.push(OracleNeutronBellRow {
                        alpha_deg: deg(alpha),
                        chi_deg: deg(chi),
                        p: oracle::neutron_bell_probability(alpha, chi, r)?,
                        e: oracle::neutron_bell_e(alpha, chi),
                    });
                }
            }
            (encode(&rows, f)?, json!(r))
        }
        OracleKind::Singlet => {
            let rows: Vec<_> = angles
                .iter()
                .map(|&d| OracleSingletRow {
                    delta_deg: deg(d),
                    e_photon: oracle::singlet_correlation(d, 0.0).2,
                    e_spin: oracle::spin_singlet_correlation(d, 0.0),
                })
                .collect();
            (encode(&rows, f)?, json!(null))
        }
    };
    Ok(Report {
        experiment: "oracle",
        digest: config_digest(&("oracle", format!("{which:?}"), step_deg, params))?,
        seed: None,
        table,
        summary: json!(null),
        extra_outputs: vec![],
    })
}
