//! Runs a [`RunConfig`] and serializes the result.
//!
//! Cells are evaluated on a dedicated rayon pool sized by `run.workers` and
//! collected back in grid order, so the rows never depend on the worker
//! count. Only the timestamp line (always the second line of the output)
//! differs between two runs of the same configuration.

use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::band::{bias_sweep, bz_sweep, symmetric_k_grid, BandError, BiasRow, KSweepRow, RowStatus};
use crate::config::{Experiment, OutputFormat, RunConfig};
use crate::ergodic::{is_resonant, pumping_value, PumpingMethod};
use crate::geometry::{GeometricAngles, Level, SpinSpecies};
use crate::resonance::phi_of_frequency;

pub const TOOL_NAME: &str = "zmap-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{experiment} cell {cell}: {message}")]
    Numerical {
        experiment: Experiment,
        cell: usize,
        message: String,
    },
    #[error("{experiment}: {source}")]
    Band {
        experiment: Experiment,
        #[source]
        source: BandError,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMapRow {
    pub theta: f64,
    pub phi: f64,
    pub method: PumpingMethod,
    pub channel: Level,
    pub p_g: f64,
    pub resonant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOscRow {
    pub species: SpinSpecies,
    pub theta: f64,
    pub f_hz: f64,
    pub phi_raw: f64,
    pub p_g: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rows {
    SpinMap(Vec<SpinMapRow>),
    SpinOsc(Vec<SpinOscRow>),
    BandSweep(Vec<KSweepRow>),
    BiasSweep(Vec<BiasRow>),
}

impl Rows {
    pub fn len(&self) -> usize {
        match self {
            Rows::SpinMap(r) => r.len(),
            Rows::SpinOsc(r) => r.len(),
            Rows::BandSweep(r) => r.len(),
            Rows::BiasSweep(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            Rows::SpinMap(_) => &["theta", "phi", "method", "channel", "p_G", "resonant_flag"],
            Rows::SpinOsc(_) => &["species", "theta", "f_hz", "phi_raw", "p_G"],
            Rows::BandSweep(_) => &["k", "theta", "phi", "residual", "p_G", "gap_min_ev", "status"],
            Rows::BiasSweep(_) => &["eps0", "P_total", "skipped_k_count"],
        }
    }

    /// Rows as CSV fields, numbers in shortest round-trip form.
    fn fields(&self) -> Vec<Vec<String>> {
        match self {
            Rows::SpinMap(rows) => rows
                .iter()
                .map(|r| {
                    vec![
                        r.theta.to_string(),
                        r.phi.to_string(),
                        r.method.to_string(),
                        r.channel.to_string(),
                        r.p_g.to_string(),
                        u8::from(r.resonant).to_string(),
                    ]
                })
                .collect(),
            Rows::SpinOsc(rows) => rows
                .iter()
                .map(|r| {
                    vec![
                        r.species.label().to_string(),
                        r.theta.to_string(),
                        r.f_hz.to_string(),
                        r.phi_raw.to_string(),
                        r.p_g.to_string(),
                    ]
                })
                .collect(),
            Rows::BandSweep(rows) => rows
                .iter()
                .map(|r| {
                    vec![
                        r.k.to_string(),
                        r.theta.to_string(),
                        r.phi.to_string(),
                        r.residual.to_string(),
                        r.p_g.to_string(),
                        r.gap_min.to_string(),
                        r.status.to_string(),
                    ]
                })
                .collect(),
            Rows::BiasSweep(rows) => rows
                .iter()
                .map(|r| vec![r.eps0.to_string(), r.p_total.to_string(), r.skipped_k.to_string()])
                .collect(),
        }
    }

    fn json(&self) -> Vec<Value> {
        // serde_json writes NaN as null
        match self {
            Rows::SpinMap(rows) => rows
                .iter()
                .map(|r| {
                    json!({
                        "theta": r.theta, "phi": r.phi, "method": r.method.to_string(),
                        "channel": r.channel.to_string(), "p_G": r.p_g, "resonant_flag": r.resonant,
                    })
                })
                .collect(),
            Rows::SpinOsc(rows) => rows
                .iter()
                .map(|r| {
                    json!({
                        "species": r.species.label(), "theta": r.theta, "f_hz": r.f_hz,
                        "phi_raw": r.phi_raw, "p_G": r.p_g,
                    })
                })
                .collect(),
            Rows::BandSweep(rows) => rows
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k, "theta": r.theta, "phi": r.phi, "residual": r.residual,
                        "p_G": r.p_g, "gap_min_ev": r.gap_min, "status": r.status.to_string(),
                    })
                })
                .collect(),
            Rows::BiasSweep(rows) => rows
                .iter()
                .map(|r| json!({"eps0": r.eps0, "P_total": r.p_total, "skipped_k_count": r.skipped_k}))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepArtifact {
    pub version: &'static str,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub config: Vec<(&'static str, String)>,
    pub rows: Rows,
    /// Rows emitted with a non-ok status.
    pub skipped: usize,
}

impl SweepArtifact {
    pub fn write<W: Write>(&self, out: &mut W, format: OutputFormat) -> io::Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Jsonl => self.write_jsonl(out),
        }
    }

    fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "# {TOOL_NAME} {}", self.version)?;
        writeln!(out, "# generated_unix_s = {}", self.timestamp)?;
        for (key, value) in &self.config {
            writeln!(out, "# {key} = {value}")?;
        }
        writeln!(out, "# rows = {}", self.rows.len())?;
        writeln!(out, "# skipped = {}", self.skipped)?;
        writeln!(out, "{}", self.rows.columns().join(","))?;
        for fields in self.rows.fields() {
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    fn write_jsonl<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let config: Map<String, Value> = self
            .config
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
            .collect();
        writeln!(out, "{}", json!({"tool": TOOL_NAME, "version": self.version}))?;
        writeln!(out, "{}", json!({ "generated_unix_s": self.timestamp }))?;
        writeln!(
            out,
            "{}",
            json!({"config": config, "columns": self.rows.columns(), "rows": self.rows.len(), "skipped": self.skipped})
        )?;
        for row in self.rows.json() {
            writeln!(out, "{row}")?;
        }
        Ok(())
    }
}

/// Evaluates the configured experiment on a pool of `cfg.workers` threads.
pub fn run(cfg: &RunConfig) -> Result<SweepArtifact, RunError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
    log::info!("running {} on {} worker(s)", cfg.experiment, cfg.workers);
    let rows = pool.install(|| compute(cfg))?;
    let skipped = match &rows {
        Rows::BandSweep(r) => r.iter().filter(|r| r.status != RowStatus::Ok).count(),
        _ => 0,
    };
    log::info!("{} rows, {} skipped", rows.len(), skipped);
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SweepArtifact {
        version: VERSION,
        timestamp,
        config: cfg.entries(),
        rows,
        skipped,
    })
}

fn compute(cfg: &RunConfig) -> Result<Rows, RunError> {
    let experiment = cfg.experiment;
    let numerical = |cell: usize, e: &dyn std::fmt::Display| RunError::Numerical {
        experiment,
        cell,
        message: e.to_string(),
    };
    match experiment {
        Experiment::SpinMap => {
            let (thetas, phis) = (cfg.map.thetas(), cfg.map.phis());
            let mut cells = Vec::new();
            for &species in cfg.spin.species.species() {
                for method in cfg.spin.method.methods(cfg.spin.n_cycles) {
                    for &theta in &thetas {
                        for &phi in &phis {
                            cells.push((species, method, theta, phi));
                        }
                    }
                }
            }
            let rows = cells
                .par_iter()
                .enumerate()
                .map(|(cell, &(species, method, theta, phi))| {
                    let channel = cfg.spin.channel_for(species);
                    let angles = GeometricAngles::new(theta, phi).map_err(|e| numerical(cell, &e))?;
                    let p_g = pumping_value(species, channel, angles, method).map_err(|e| numerical(cell, &e))?;
                    Ok(SpinMapRow {
                        theta,
                        phi,
                        method,
                        channel,
                        p_g,
                        resonant: is_resonant(species, angles),
                    })
                })
                .collect::<Result<_, RunError>>()?;
            Ok(Rows::SpinMap(rows))
        }
        Experiment::SpinOsc => {
            let proposal = cfg.resonance();
            let mut cells = Vec::new();
            for &species in cfg.spin.species.species() {
                for &theta in &proposal.theta_list {
                    for &f in &proposal.f_grid {
                        cells.push((species, theta, f));
                    }
                }
            }
            let rows = cells
                .par_iter()
                .enumerate()
                .map(|(cell, &(species, theta, f_hz))| {
                    let phase = phi_of_frequency(f_hz, &proposal).map_err(|e| numerical(cell, &e))?;
                    let angles = GeometricAngles::new(theta, phase.wrapped).map_err(|e| numerical(cell, &e))?;
                    let p_g = pumping_value(species, cfg.spin.channel_for(species), angles, PumpingMethod::ClosedForm)
                        .map_err(|e| numerical(cell, &e))?;
                    Ok(SpinOscRow {
                        species,
                        theta,
                        f_hz,
                        phi_raw: phase.raw,
                        p_g,
                    })
                })
                .collect::<Result<_, RunError>>()?;
            Ok(Rows::SpinOsc(rows))
        }
        Experiment::BandSweep => bz_sweep(&cfg.band, &cfg.trotter, &symmetric_k_grid(cfg.k_count), cfg.band_cycles)
            .map(Rows::BandSweep)
            .map_err(|source| RunError::Band { experiment, source }),
        Experiment::BiasSweep => bias_sweep(
            &cfg.band,
            &cfg.trotter,
            &cfg.bias.values(),
            &symmetric_k_grid(cfg.k_count),
            cfg.band_cycles,
        )
        .map(Rows::BiasSweep)
        .map_err(|source| RunError::Band { experiment, source }),
    }
}
