//! The four subcommands.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use ncosc_core::infotheory::{closed_forms, info_from_state, momentum_field, nc_uncertainty_bounds, BoundCheck, InfoReport, CSV_HEADER};
use ncosc_core::validation::{verify_suite, OracleOptions, OracleTable};
use ncosc_core::wavefunctions::sample_position;
use ncosc_core::{DynamicsSettings, Evolution, QuantumState, SampledField};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{DomainChoice, RunConfig};

/// Margin past `t` kept in the classical solution window.
const WINDOW_PAD: f64 = 0.1;

fn ground_at(cfg: &RunConfig, theta: f64, eta: f64) -> anyhow::Result<QuantumState> {
    let osc = cfg.oscillator()?;
    let space = cfg.space(theta, eta)?;
    let evolution = Evolution::from_rest(&osc, &space, cfg.t + WINDOW_PAD)?;
    Ok(QuantumState::ground(evolution).with_phase_perturbation(cfg.perturb_phase))
}

/// Closed-form (and optionally quadrature) reports over the θ-major grid.
pub fn sweep_reports(cfg: &RunConfig) -> anyhow::Result<Vec<InfoReport>> {
    let osc = cfg.oscillator()?;
    let grid = cfg.grid()?;
    let points: Vec<(f64, f64)> = cfg
        .theta
        .values()
        .into_iter()
        .flat_map(|th| cfg.eta.values().into_iter().map(move |et| (th, et)))
        .collect();
    let per_point: Vec<Vec<InfoReport>> = points
        .par_iter()
        .map(|&(th, et)| -> anyhow::Result<Vec<InfoReport>> {
            let space = cfg.space(th, et)?;
            let mut rows = vec![closed_forms(&osc, &space)];
            if cfg.quadrature {
                let state = ground_at(cfg, th, et)?;
                rows.push(info_from_state(&state, cfg.t, &grid)?);
            }
            Ok(rows)
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

pub fn write_sweep_csv<W: Write>(reports: &[InfoReport], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in reports {
        writeln!(w, "{}", r.to_csv_row())?;
    }
    w.flush()
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

pub fn cmd_sweep(cfg: &RunConfig) -> anyhow::Result<()> {
    let reports = sweep_reports(cfg)?;
    match &cfg.out {
        Some(path) => write_sweep_csv(&reports, create(path)?)?,
        None => write_sweep_csv(&reports, std::io::stdout().lock())?,
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct InfoOutput {
    pub closed_form: InfoReport,
    pub closed_form_bounds: BoundCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<InfoReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_bounds: Option<BoundCheck>,
    pub bbm_bound: f64,
}

pub fn info_output(cfg: &RunConfig) -> anyhow::Result<InfoOutput> {
    let (theta, eta) = cfg.point()?;
    let space = cfg.space(theta, eta)?;
    let closed = closed_forms(&cfg.oscillator()?, &space);
    let quadrature = if cfg.quadrature {
        Some(info_from_state(&ground_at(cfg, theta, eta)?, cfg.t, &cfg.grid()?)?)
    } else {
        None
    };
    Ok(InfoOutput {
        closed_form_bounds: nc_uncertainty_bounds(&closed, &space),
        quadrature_bounds: quadrature.as_ref().map(|q| nc_uncertainty_bounds(q, &space)),
        bbm_bound: closed.bbm_bound(),
        closed_form: closed,
        quadrature,
    })
}

pub fn cmd_info(cfg: &RunConfig) -> anyhow::Result<()> {
    let json = serde_json::to_string_pretty(&info_output(cfg)?)?;
    match &cfg.out {
        Some(path) => writeln!(create(path)?, "{json}")?,
        None => writeln!(std::io::stdout().lock(), "{json}")?,
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct FieldMeta {
    pub csv: PathBuf,
    pub binary: PathBuf,
    pub points: Vec<usize>,
    pub norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct StateMeta {
    pub t: f64,
    pub theta: f64,
    pub eta: f64,
    pub hbar: f64,
    pub dim: usize,
    pub quantum_numbers: Vec<u32>,
    pub position_center: Vec<f64>,
    pub momentum_center: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<FieldMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub momentum: Option<FieldMeta>,
}

fn export(field: &SampledField, prefix: &Path, tag: &str) -> anyhow::Result<FieldMeta> {
    let csv = suffixed(prefix, &format!("{tag}.csv"));
    let binary = suffixed(prefix, &format!("{tag}.bin"));
    field.write_csv(create(&csv)?)?;
    let mut w = create(&binary)?;
    field.write_binary(&mut w)?;
    w.flush()?;
    Ok(FieldMeta {
        csv,
        binary,
        points: field.shape(),
        norm: field.norm_sq(),
        truncation: field.truncation,
    })
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

/// Writes `{prefix}.position.{csv,bin}`, `{prefix}.momentum.{csv,bin}` and
/// `{prefix}.meta.json`; returns the metadata.
pub fn export_state(cfg: &RunConfig, prefix: &Path) -> anyhow::Result<StateMeta> {
    let (theta, eta) = cfg.point()?;
    let osc = cfg.oscillator()?;
    let space = cfg.space(theta, eta)?;
    let evolution = Evolution::solve(&osc, &space, &DynamicsSettings::until(cfg.t + WINDOW_PAD))?;
    let state = QuantumState::new(evolution, cfg.quantum_numbers()?)?.with_phase_perturbation(cfg.perturb_phase);
    let snap = state.at(cfg.t)?;
    let grid = cfg.grid()?;
    let dim = snap.dim();

    let position = match cfg.domain {
        DomainChoice::Momentum => None,
        _ => Some(export(&sample_position(&snap, &snap.position_grid(&grid)?)?, prefix, "position")?),
    };
    let momentum = match cfg.domain {
        DomainChoice::Position => None,
        _ => Some(export(&momentum_field(&snap, &grid)?, prefix, "momentum")?),
    };
    let meta = StateMeta {
        t: cfg.t,
        theta,
        eta,
        hbar: cfg.hbar,
        dim,
        quantum_numbers: state.quantum_numbers.clone(),
        position_center: (0..dim).map(|a| snap.position_center(a)).collect(),
        momentum_center: (0..dim).map(|a| snap.momentum_center(a)).collect(),
        position,
        momentum,
    };
    let mut w = create(&suffixed(prefix, "meta.json"))?;
    serde_json::to_writer_pretty(&mut w, &meta)?;
    writeln!(w)?;
    Ok(meta)
}

pub fn cmd_state(cfg: &RunConfig) -> anyhow::Result<()> {
    let prefix = cfg.out.clone().unwrap_or_else(|| PathBuf::from("state"));
    let meta = export_state(cfg, &prefix)?;
    writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

pub fn verify_table(cfg: &RunConfig) -> anyhow::Result<OracleTable> {
    let (theta, eta) = cfg.point()?;
    let space = cfg.space(theta, eta)?;
    let dim = cfg.dimension()?;
    let mut opts = OracleOptions::new(cfg.t, dim);
    opts.grid = cfg.grid()?;
    opts.perturb_phase = cfg.perturb_phase;
    Ok(verify_suite(&cfg.oscillator()?, &space, &opts)?)
}

/// Runs the oracle suite; `Ok(false)` when any check failed.
pub fn cmd_verify(cfg: &RunConfig) -> anyhow::Result<bool> {
    let table = verify_table(cfg)?;
    write!(std::io::stdout().lock(), "{}", table.summary())?;
    if let Some(path) = &cfg.out {
        let mut w = create(path)?;
        table.write_csv(&mut w)?;
        w.flush()?;
    }
    Ok(table.passed())
}
