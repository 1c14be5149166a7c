//! Run configuration: flat `key = value` files with `#` comments.
//!
//! Keys are grouped by dotted prefixes (`band.c_H = 0.5`). Every key is
//! optional; absent keys take the defaults listed by [`RunConfig::entries`],
//! which is also what gets echoed into output headers.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::band::{BandModel, TrotterConfig, DEFAULT_K_POINTS, DEFAULT_STEPS_PER_CYCLE};
use crate::ergodic::{Cycles, PumpingMethod, DEFAULT_CYCLES};
use crate::geometry::{Level, SpinSpecies};
use crate::resonance::{log_spaced, ResonanceProposal};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Validation(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    SpinMap,
    SpinOsc,
    BandSweep,
    BiasSweep,
}

impl Experiment {
    pub const ALL: [Experiment; 4] = [
        Experiment::SpinMap,
        Experiment::SpinOsc,
        Experiment::BandSweep,
        Experiment::BiasSweep,
    ];

    /// Subcommand spelling.
    pub fn command(self) -> &'static str {
        match self {
            Experiment::SpinMap => "spin-map",
            Experiment::SpinOsc => "spin-osc",
            Experiment::BandSweep => "band-sweep",
            Experiment::BiasSweep => "bias-sweep",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::SpinMap => "SpinMap",
            Experiment::SpinOsc => "SpinOsc",
            Experiment::BandSweep => "BandSweep",
            Experiment::BiasSweep => "BiasSweep",
        })
    }
}

impl FromStr for Experiment {
    type Err = String;

    /// Accepts both `SpinMap` and `spin-map` spellings.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| s == e.command() || s == e.to_string())
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Jsonl => "jsonl",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(format!("unknown output format `{other}` (expected csv or jsonl)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeciesSelection {
    Half,
    One,
    Both,
}

impl SpeciesSelection {
    pub fn species(self) -> &'static [SpinSpecies] {
        match self {
            SpeciesSelection::Half => &[SpinSpecies::Half],
            SpeciesSelection::One => &[SpinSpecies::One],
            SpeciesSelection::Both => &[SpinSpecies::Half, SpinSpecies::One],
        }
    }
}

impl fmt::Display for SpeciesSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpeciesSelection::Half => "half",
            SpeciesSelection::One => "one",
            SpeciesSelection::Both => "both",
        })
    }
}

impl FromStr for SpeciesSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(SpeciesSelection::Both),
            other => match other.parse::<SpinSpecies>().map_err(|e| e.to_string())? {
                SpinSpecies::Half => Ok(SpeciesSelection::Half),
                SpinSpecies::One => Ok(SpeciesSelection::One),
            },
        }
    }
}

/// Which long-time average the spin map reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSelection {
    ClosedForm,
    Iterated,
    DiagonalEnsemble,
    /// Closed form plus the finite average.
    Both,
}

impl MethodSelection {
    pub fn methods(self, n_cycles: usize) -> Vec<PumpingMethod> {
        match self {
            MethodSelection::ClosedForm => vec![PumpingMethod::ClosedForm],
            MethodSelection::Iterated => vec![PumpingMethod::IteratedN(n_cycles)],
            MethodSelection::DiagonalEnsemble => vec![PumpingMethod::DiagonalEnsemble],
            MethodSelection::Both => vec![PumpingMethod::ClosedForm, PumpingMethod::IteratedN(n_cycles)],
        }
    }
}

impl fmt::Display for MethodSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodSelection::ClosedForm => "closed_form",
            MethodSelection::Iterated => "iterated",
            MethodSelection::DiagonalEnsemble => "diagonal_ensemble",
            MethodSelection::Both => "both",
        })
    }
}

impl FromStr for MethodSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closed_form" => Ok(MethodSelection::ClosedForm),
            "iterated" => Ok(MethodSelection::Iterated),
            "diagonal_ensemble" => Ok(MethodSelection::DiagonalEnsemble),
            "both" => Ok(MethodSelection::Both),
            other => Err(format!(
                "unknown method `{other}` (expected closed_form, iterated, diagonal_ensemble or both)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSettings {
    pub species: SpeciesSelection,
    /// `None` selects the bottom level of each species.
    pub channel: Option<Level>,
    pub method: MethodSelection,
    pub n_cycles: usize,
}

impl SpinSettings {
    pub fn channel_for(&self, species: SpinSpecies) -> Level {
        self.channel.unwrap_or_else(|| species.bottom())
    }
}

/// Rectangular `(theta, phi)` grid. Theta includes both ends; phi samples the
/// half-open `(phi_min, phi_max]` uniformly, so the default covers
/// `(-pi, pi]` without repeating a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MapGrid {
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_count: usize,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_count: usize,
}

impl MapGrid {
    pub fn thetas(&self) -> Vec<f64> {
        linspace(self.theta_min, self.theta_max, self.theta_count)
    }

    pub fn phis(&self) -> Vec<f64> {
        let n = self.phi_count as f64;
        let span = self.phi_max - self.phi_min;
        (1..=self.phi_count)
            .map(|j| if j == self.phi_count { self.phi_max } else { self.phi_min + span * j as f64 / n })
            .collect()
    }
}

/// `count` points on `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    pub f_min: f64,
    pub f_max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasGrid {
    pub eps0_min: f64,
    pub eps0_max: f64,
    pub count: usize,
}

impl BiasGrid {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.eps0_min, self.eps0_max, self.count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub spin: SpinSettings,
    pub map: MapGrid,
    pub b_bar: f64,
    pub f0: f64,
    pub frequencies: FrequencyGrid,
    pub osc_thetas: Vec<f64>,
    pub band: BandModel,
    pub k_count: usize,
    pub band_cycles: Cycles,
    pub trotter: TrotterConfig,
    pub bias: BiasGrid,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub workers: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let resonance = ResonanceProposal::default();
        Self {
            experiment,
            spin: SpinSettings {
                species: SpeciesSelection::Half,
                channel: None,
                method: MethodSelection::Both,
                n_cycles: DEFAULT_CYCLES,
            },
            map: MapGrid {
                theta_min: 0.02,
                theta_max: std::f64::consts::PI,
                theta_count: 101,
                phi_min: -std::f64::consts::PI,
                phi_max: std::f64::consts::PI,
                phi_count: 101,
            },
            b_bar: resonance.b_bar,
            f0: resonance.f0,
            frequencies: FrequencyGrid {
                f_min: 2e6,
                f_max: 5e7,
                count: resonance.f_grid.len(),
            },
            osc_thetas: resonance.theta_list,
            band: BandModel::default(),
            k_count: DEFAULT_K_POINTS,
            band_cycles: Cycles::Infinite,
            trotter: TrotterConfig::default(),
            bias: BiasGrid {
                eps0_min: -1.4,
                eps0_max: -0.6,
                count: 81,
            },
            output_path: None,
            format: OutputFormat::Csv,
            workers: 1,
            seed: 0,
        }
    }

    /// Parses `text` on top of the defaults for `experiment`. A file-level
    /// `experiment` key must agree with it when both are given.
    pub fn parse(text: &str, experiment: Option<Experiment>) -> Result<Self, ConfigError> {
        let pairs = parse_pairs(text)?;
        let named = pairs
            .iter()
            .find(|p| p.key == "experiment")
            .map(|p| p.value.parse::<Experiment>().map_err(|m| p.error(m)))
            .transpose()?;
        let experiment = match (experiment, named) {
            (Some(a), Some(b)) if a != b => {
                return Err(invalid(format!("config names experiment {b} but {a} was requested")))
            }
            (Some(e), _) | (None, Some(e)) => e,
            (None, None) => return Err(invalid("no experiment given")),
        };
        let mut cfg = Self::defaults(experiment);
        let mut steps = DEFAULT_STEPS_PER_CYCLE;
        for pair in &pairs {
            cfg.apply(pair, &mut steps)?;
        }
        cfg.trotter = TrotterConfig::new(steps).map_err(|e| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let spin = &self.spin;
        if spin.n_cycles == 0 {
            return Err(invalid("spin.n_cycles must be at least 1"));
        }
        if let Some(level) = spin.channel {
            if let Some(s) = spin.species.species().iter().find(|s| s.index_of(level).is_none()) {
                return Err(invalid(format!("spin.channel {level} is not a level of spin {}", s.label())));
            }
        }
        let m = &self.map;
        if !(0.0..=std::f64::consts::PI).contains(&m.theta_min)
            || !(0.0..=std::f64::consts::PI).contains(&m.theta_max)
            || m.theta_min > m.theta_max
        {
            return Err(invalid(format!(
                "map theta range [{}, {}] must lie in [0, pi] and be ordered",
                m.theta_min, m.theta_max
            )));
        }
        if !(m.phi_min < m.phi_max) || !m.phi_min.is_finite() || !m.phi_max.is_finite() {
            return Err(invalid(format!("map phi range ({}, {}] must be finite and non-empty", m.phi_min, m.phi_max)));
        }
        if m.theta_count == 0 || m.phi_count == 0 {
            return Err(invalid("map grid counts must be positive"));
        }
        let f = &self.frequencies;
        if !(f.f_min > 0.0 && f.f_min <= f.f_max && f.f_max.is_finite()) || f.count == 0 {
            return Err(invalid(format!(
                "frequency grid [{}, {}] x {} must be positive, ordered and non-empty",
                f.f_min, f.f_max, f.count
            )));
        }
        if self.osc_thetas.is_empty() {
            return Err(invalid("resonance.thetas must not be empty"));
        }
        self.resonance().validate().map_err(|e| invalid(e.to_string()))?;
        self.band.validate().map_err(|e| invalid(e.to_string()))?;
        if self.k_count == 0 {
            return Err(invalid("band.k_count must be positive"));
        }
        if self.band_cycles == Cycles::Finite(0) {
            return Err(invalid("band.n_cycles must be at least 1 or inf"));
        }
        let b = &self.bias;
        if !(b.eps0_min <= b.eps0_max) || !b.eps0_min.is_finite() || !b.eps0_max.is_finite() || b.count == 0 {
            return Err(invalid(format!(
                "bias grid [{}, {}] x {} must be finite, ordered and non-empty",
                b.eps0_min, b.eps0_max, b.count
            )));
        }
        if self.workers == 0 {
            return Err(invalid("run.workers must be at least 1"));
        }
        Ok(())
    }

    pub fn resonance(&self) -> ResonanceProposal {
        let f = &self.frequencies;
        ResonanceProposal {
            b_bar: self.b_bar,
            f0: self.f0,
            f_grid: log_spaced(f.f_min, f.f_max, f.count),
            theta_list: self.osc_thetas.clone(),
        }
    }

    /// Every effective setting as `(key, value)`, in file syntax.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let list = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let channel = match self.spin.channel {
            Some(level) => level.to_string(),
            None => "bottom".to_string(),
        };
        vec![
            ("experiment", self.experiment.to_string()),
            ("spin.species", self.spin.species.to_string()),
            ("spin.channel", channel),
            ("spin.method", self.spin.method.to_string()),
            ("spin.n_cycles", self.spin.n_cycles.to_string()),
            ("map.theta_min", self.map.theta_min.to_string()),
            ("map.theta_max", self.map.theta_max.to_string()),
            ("map.theta_count", self.map.theta_count.to_string()),
            ("map.phi_min", self.map.phi_min.to_string()),
            ("map.phi_max", self.map.phi_max.to_string()),
            ("map.phi_count", self.map.phi_count.to_string()),
            ("resonance.b_bar", self.b_bar.to_string()),
            ("resonance.f0_hz", self.f0.to_string()),
            ("resonance.f_min_hz", self.frequencies.f_min.to_string()),
            ("resonance.f_max_hz", self.frequencies.f_max.to_string()),
            ("resonance.f_count", self.frequencies.count.to_string()),
            ("resonance.thetas", list(&self.osc_thetas)),
            ("band.c_H", self.band.c_h.to_string()),
            ("band.eps0", self.band.eps0.to_string()),
            ("band.A_ph", self.band.a_ph.to_string()),
            ("band.tau_ph", self.band.tau_ph.to_string()),
            ("band.k_count", self.k_count.to_string()),
            ("band.n_cycles", self.band_cycles.to_string()),
            ("trotter.steps", self.trotter.steps_per_cycle().to_string()),
            ("trotter.scheme", "midpoint".to_string()),
            ("bias.eps0_min", self.bias.eps0_min.to_string()),
            ("bias.eps0_max", self.bias.eps0_max.to_string()),
            ("bias.eps0_count", self.bias.count.to_string()),
            ("output.format", self.format.to_string()),
            ("run.workers", self.workers.to_string()),
            ("run.seed", self.seed.to_string()),
        ]
    }

    fn apply(&mut self, pair: &Pair, steps: &mut usize) -> Result<(), ConfigError> {
        let v = pair.value.as_str();
        match pair.key.as_str() {
            "experiment" => {}
            "spin.species" => self.spin.species = pair.parse(v)?,
            "spin.channel" if v == "bottom" => self.spin.channel = None,
            "spin.channel" => self.spin.channel = Some(pair.parse(v)?),
            "spin.method" => self.spin.method = pair.parse(v)?,
            "spin.n_cycles" => self.spin.n_cycles = pair.parse(v)?,
            "map.theta_min" => self.map.theta_min = pair.number()?,
            "map.theta_max" => self.map.theta_max = pair.number()?,
            "map.theta_count" => self.map.theta_count = pair.parse(v)?,
            "map.phi_min" => self.map.phi_min = pair.number()?,
            "map.phi_max" => self.map.phi_max = pair.number()?,
            "map.phi_count" => self.map.phi_count = pair.parse(v)?,
            "resonance.b_bar" => self.b_bar = pair.number()?,
            "resonance.f0_hz" => self.f0 = pair.number()?,
            "resonance.f_min_hz" => self.frequencies.f_min = pair.number()?,
            "resonance.f_max_hz" => self.frequencies.f_max = pair.number()?,
            "resonance.f_count" => self.frequencies.count = pair.parse(v)?,
            "resonance.thetas" => {
                self.osc_thetas = v
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|e| pair.error(format!("`{x}`: {e}"))))
                    .collect::<Result<_, _>>()?
            }
            "band.c_H" => self.band.c_h = pair.number()?,
            "band.eps0" => self.band.eps0 = pair.number()?,
            "band.A_ph" => self.band.a_ph = pair.number()?,
            "band.tau_ph" => self.band.tau_ph = pair.number()?,
            "band.k_count" => self.k_count = pair.parse(v)?,
            "band.n_cycles" => {
                self.band_cycles = match v {
                    "inf" => Cycles::Infinite,
                    n => Cycles::Finite(pair.parse(n)?),
                }
            }
            "trotter.steps" => *steps = pair.parse(v)?,
            "trotter.scheme" if v == "midpoint" => {}
            "trotter.scheme" => return Err(pair.error(format!("unsupported scheme `{v}`"))),
            "bias.eps0_min" => self.bias.eps0_min = pair.number()?,
            "bias.eps0_max" => self.bias.eps0_max = pair.number()?,
            "bias.eps0_count" => self.bias.count = pair.parse(v)?,
            "output.path" => self.output_path = Some(PathBuf::from(v)),
            "output.format" => self.format = pair.parse(v)?,
            "run.workers" => self.workers = pair.parse(v)?,
            "run.seed" => self.seed = pair.parse(v)?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: pair.line,
                    key: pair.key.clone(),
                })
            }
        }
        Ok(())
    }
}

pub fn load_config(path: &Path, experiment: Option<Experiment>) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    RunConfig::parse(&text, experiment)
}

struct Pair {
    line: usize,
    key: String,
    value: String,
}

impl Pair {
    fn error(&self, message: impl fmt::Display) -> ConfigError {
        ConfigError::Parse {
            line: self.line,
            message: format!("{}: {message}", self.key),
        }
    }

    fn parse<T: FromStr>(&self, v: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        v.parse().map_err(|e| self.error(format!("`{v}`: {e}")))
    }

    fn number(&self) -> Result<f64, ConfigError> {
        let x: f64 = self.parse(&self.value)?;
        if !x.is_finite() {
            return Err(self.error("value must be finite"));
        }
        Ok(x)
    }
}

fn parse_pairs(text: &str) -> Result<Vec<Pair>, ConfigError> {
    let mut pairs: Vec<Pair> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            message: format!("expected `key = value`, got `{body}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Parse {
                line,
                message: format!("empty key or value in `{body}`"),
            });
        }
        if let Some(prev) = pairs.iter().find(|p| p.key == key) {
            return Err(ConfigError::Parse {
                line,
                message: format!("{key}: duplicate key (first set on line {})", prev.line),
            });
        }
        pairs.push(Pair {
            line,
            key: key.to_string(),
            value: value.trim_matches('"').to_string(),
        });
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn minimal_spin_map_defaults() {
        let cfg = RunConfig::parse("experiment = SpinMap\n", None).unwrap();
        assert_eq!(cfg.experiment, Experiment::SpinMap);
        assert_eq!(cfg.spin.species, SpeciesSelection::Half);
        assert_eq!(cfg.spin.method, MethodSelection::Both);
        let thetas = cfg.map.thetas();
        let phis = cfg.map.phis();
        assert_eq!((thetas.len(), phis.len()), (101, 101));
        assert_eq!(thetas[0], 0.02);
        assert_eq!(thetas[100], PI);
        assert!(phis[0] > -PI && phis[100] == PI);
        assert_eq!(
            cfg.spin.method.methods(cfg.spin.n_cycles),
            vec![PumpingMethod::ClosedForm, PumpingMethod::IteratedN(100)]
        );
    }

    #[test]
    fn negative_amplitude_rejected() {
        let err = RunConfig::parse("band.A_ph = -0.1", Some(Experiment::BandSweep)).unwrap_err();
        match err {
            ConfigError::Validation(msg) => assert!(msg.contains("A_ph"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_named() {
        let err = RunConfig::parse("experiment = BandSweep\nepsilon0_typo = 3\n", None).unwrap_err();
        assert!(matches!(&err, ConfigError::UnknownKey { line: 2, key } if key == "epsilon0_typo"));
        assert!(err.to_string().contains("epsilon0_typo"));
    }

    #[test]
    fn comments_and_overrides() {
        let text = "# band run\nband.c_H = 0.7   # eV\nband.n_cycles = inf\ntrotter.steps = 5000\nband.k_count=11\n";
        let cfg = RunConfig::parse(text, Some(Experiment::BandSweep)).unwrap();
        assert_eq!(cfg.band.c_h, 0.7);
        assert_eq!(cfg.trotter.steps_per_cycle(), 5000);
        assert_eq!(cfg.k_count, 11);
        let cfg = RunConfig::parse("band.n_cycles = 40", Some(Experiment::BandSweep)).unwrap();
        assert_eq!(cfg.band_cycles, Cycles::Finite(40));
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(
            RunConfig::parse("experiment = SpinMap\nmap.theta_count = ten", None),
            Err(ConfigError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            RunConfig::parse("just words", Some(Experiment::SpinMap)),
            Err(ConfigError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            RunConfig::parse("spin.n_cycles = 3\nspin.n_cycles = 4", Some(Experiment::SpinMap)),
            Err(ConfigError::Parse { line: 2, .. })
        ));
        assert!(matches!(RunConfig::parse("", None), Err(ConfigError::Validation(_))));
        assert!(matches!(
            RunConfig::parse("experiment = SpinOsc", Some(Experiment::SpinMap)),
            Err(ConfigError::Validation(_))
        ));
    }

    #[test]
    fn invariants_rechecked() {
        let bad = [
            "map.theta_max = 4",
            "trotter.steps = 10",
            "spin.species = half\nspin.channel = 0",
            "resonance.b_bar = 0",
            "band.tau_ph = -1e-12",
            "bias.eps0_min = 0\nbias.eps0_max = -1",
            "run.workers = 0",
            "band.n_cycles = 0",
        ];
        for text in bad {
            assert!(
                matches!(RunConfig::parse(text, Some(Experiment::SpinMap)), Err(ConfigError::Validation(_))),
                "{text}"
            );
        }
        assert!(RunConfig::parse("spin.species = both\nspin.channel = -1", Some(Experiment::SpinMap)).is_err());
        let cfg = RunConfig::parse("spin.species = one\nspin.channel = 0", Some(Experiment::SpinMap)).unwrap();
        assert_eq!(cfg.spin.channel_for(SpinSpecies::One), Level::ZERO);
    }

    #[test]
    fn echo_covers_every_key() {
        let cfg = RunConfig::defaults(Experiment::BiasSweep);
        let text: String = cfg
            .entries()
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        let back = RunConfig::parse(&text, None).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn experiment_spellings() {
        for e in Experiment::ALL {
            assert_eq!(e.command().parse::<Experiment>().unwrap(), e);
            assert_eq!(e.to_string().parse::<Experiment>().unwrap(), e);
        }
    }
}
