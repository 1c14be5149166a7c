//! Long-time pumping averages.
//!
//! Three routes to the same quantity, the time-averaged population of a
//! level under repeated application of a cycle operator starting from the
//! top level:
//!
//! * [`iterated_average`]: the finite-`n` Cesàro mean, by repeated state updates;
//! * [`diagonal_ensemble`]: the exact `n -> inf` limit from the spectral
//!   projectors, with degenerate eigenphases merged;
//! * [`pg_closed_form_spin1`] / [`pg_closed_form_spin_half`]: closed forms valid
//!   away from exact degeneracies.
//!
//! The closed forms and the spectral route disagree only on the measure-zero
//! set where eigenphases coincide (for spin 1, exactly at `theta = pi`).

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{cycle_operator, rotation_angle, GeometricAngles, GeometryError, Level, SpinSpecies};
use crate::smallmat::{unitary_eigensystem, MatError, UnitaryOperator, C64, DEFAULT_MERGE_TOL};

/// Default cycle count of the finite average.
pub const DEFAULT_CYCLES: usize = 100;

/// Rotation angles closer than this to `pi * p / q` (`q <= RESONANCE_MAX_DENOMINATOR`)
/// are flagged as resonant.
pub const RESONANCE_WINDOW: f64 = 0.05;
pub const RESONANCE_MAX_DENOMINATOR: u32 = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PumpingError {
    #[error("level {level} does not belong to a {dim}-dimensional operator")]
    DimensionMismatch { level: Level, dim: usize },
    #[error("cycle count must be at least 1")]
    ZeroCycles,
    #[error("empty grid")]
    EmptyGrid,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// Number of cycles behind an average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cycles {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Cycles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cycles::Finite(n) => write!(f, "{n}"),
            Cycles::Infinite => write!(f, "inf"),
        }
    }
}

/// Time-averaged populations over the levels of a species.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationDistribution {
    pub species: SpinSpecies,
    /// One entry per level, in `species.levels()` order.
    pub probabilities: Vec<f64>,
    pub n_cycles: Cycles,
}

impl PopulationDistribution {
    pub fn get(&self, level: Level) -> Option<f64> {
        self.species.index_of(level).map(|i| self.probabilities[i])
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

fn resolve(u: &UnitaryOperator, level: Level) -> Result<(SpinSpecies, usize), PumpingError> {
    let mismatch = || PumpingError::DimensionMismatch { level, dim: u.dim() };
    let species = SpinSpecies::from_dim(u.dim()).ok_or_else(mismatch)?;
    let index = species.index_of(level).ok_or_else(mismatch)?;
    Ok((species, index))
}

/// `p_l = (1/n) sum_{j=1..n} |<l| U^j |initial>|^2`, by repeated application to the state.
pub fn iterated_average(
    u: &UnitaryOperator,
    initial: Level,
    n: usize,
) -> Result<PopulationDistribution, PumpingError> {
    if n == 0 {
        return Err(PumpingError::ZeroCycles);
    }
    let (species, start) = resolve(u, initial)?;
    let dim = u.dim();
    let mut state = [C64::new(0.0, 0.0); 3];
    state[start] = C64::new(1.0, 0.0);
    let mut acc = [0.0_f64; 3];
    for _ in 0..n {
        state = u.matrix().apply(&state);
        for (a, z) in acc.iter_mut().zip(&state).take(dim) {
            *a += z.norm_sqr();
        }
    }
    let scale = 1.0 / n as f64;
    Ok(PopulationDistribution {
        species,
        probabilities: acc[..dim].iter().map(|a| a * scale).collect(),
        n_cycles: Cycles::Finite(n),
    })
}

/// Exact infinite-time average `p_l = sum_k |<l| P_k |initial>|^2` over the
/// spectral projectors of `u` (eigenphases within [`DEFAULT_MERGE_TOL`] merged).
pub fn diagonal_ensemble(u: &UnitaryOperator, initial: Level) -> Result<PopulationDistribution, PumpingError> {
    diagonal_ensemble_with_tol(u, initial, DEFAULT_MERGE_TOL)
}

pub fn diagonal_ensemble_with_tol(
    u: &UnitaryOperator,
    initial: Level,
    merge_tol: f64,
) -> Result<PopulationDistribution, PumpingError> {
    let (species, start) = resolve(u, initial)?;
    let eig = unitary_eigensystem(u, merge_tol)?;
    let probabilities = (0..u.dim())
        .map(|row| eig.projectors().iter().map(|p| p.get(row, start).norm_sqr()).sum())
        .collect();
    Ok(PopulationDistribution {
        species,
        probabilities,
        n_cycles: Cycles::Infinite,
    })
}

/// Closed-form long-time populations for spin 1, as `(p_-1, p_0, p_+1)`.
pub fn pg_closed_form_spin1(angles: GeometricAngles) -> (f64, f64, f64) {
    if angles.theta() == 0.0 {
        return (0.0, 0.0, 1.0);
    }
    let (s, c) = (0.5 * angles.theta()).sin_cos();
    let s2 = s * s;
    // 1 - cos^2(theta/2) cos^2(phi/2), written without cancellation
    let denom = s2 + c * c * (0.5 * angles.phi()).sin().powi(2);
    let x = s2 / denom;
    let p_minus = 0.375 * x * x;
    let p_zero = x - 0.75 * x * x;
    (p_minus, p_zero, 1.0 - p_minus - p_zero)
}

/// Closed-form long-time flip probability for spin 1/2:
/// `(1/2) sin^2(theta/2) / (1 - cos^2(theta/2) cos^2(phi))`.
pub fn pg_closed_form_spin_half(angles: GeometricAngles) -> f64 {
    if angles.theta() == 0.0 {
        return 0.0;
    }
    let (s, c) = (0.5 * angles.theta()).sin_cos();
    let s2 = s * s;
    0.5 * s2 / (s2 + c * c * angles.phi().sin().powi(2))
}

/// Closed-form population of `channel` for `species`.
pub fn closed_form(species: SpinSpecies, channel: Level, angles: GeometricAngles) -> Result<f64, PumpingError> {
    let index = species.index_of(channel).ok_or(PumpingError::DimensionMismatch {
        level: channel,
        dim: species.dim(),
    })?;
    Ok(match species {
        SpinSpecies::Half => {
            let flip = pg_closed_form_spin_half(angles);
            [1.0 - flip, flip][index]
        }
        SpinSpecies::One => {
            let (m, z, p) = pg_closed_form_spin1(angles);
            [p, z, m][index]
        }
    })
}

/// Whether the rotation angle behind the cycle operator sits within
/// [`RESONANCE_WINDOW`] of a rational multiple `pi * p / q`, `q <= 8`.
/// Such points include every exact eigenphase degeneracy.
pub fn is_resonant(species: SpinSpecies, angles: GeometricAngles) -> bool {
    let alpha = rotation_angle(species, angles);
    (1..=RESONANCE_MAX_DENOMINATOR).any(|q| {
        let unit = std::f64::consts::PI / f64::from(q);
        let nearest = (alpha / unit).round();
        (alpha - nearest * unit).abs() < RESONANCE_WINDOW
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PumpingMethod {
    IteratedN(usize),
    DiagonalEnsemble,
    ClosedForm,
}

impl fmt::Display for PumpingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PumpingMethod::IteratedN(n) => write!(f, "iterated_{n}"),
            PumpingMethod::DiagonalEnsemble => f.write_str("diagonal_ensemble"),
            PumpingMethod::ClosedForm => f.write_str("closed_form"),
        }
    }
}

/// Long-time population of `channel` at one point, starting from the top level.
pub fn pumping_value(
    species: SpinSpecies,
    channel: Level,
    angles: GeometricAngles,
    method: PumpingMethod,
) -> Result<f64, PumpingError> {
    let lookup = |d: PopulationDistribution| {
        d.get(channel).ok_or(PumpingError::DimensionMismatch {
            level: channel,
            dim: species.dim(),
        })
    };
    match method {
        PumpingMethod::ClosedForm => closed_form(species, channel, angles),
        PumpingMethod::DiagonalEnsemble => {
            lookup(diagonal_ensemble(&cycle_operator(species, angles), species.top())?)
        }
        PumpingMethod::IteratedN(n) => lookup(iterated_average(&cycle_operator(species, angles), species.top(), n)?),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PumpingGridResult {
    pub species: SpinSpecies,
    pub channel: Level,
    pub method: PumpingMethod,
    pub theta_grid: Vec<f64>,
    pub phi_grid: Vec<f64>,
    /// `values[i][j]` at `(theta_grid[i], phi_grid[j])`.
    pub values: Vec<Vec<f64>>,
    pub resonant: Vec<Vec<bool>>,
}

/// Evaluates `method` on every `(theta, phi)` cell. Cells are independent and
/// may run on the current rayon pool; the result does not depend on the pool size.
pub fn pumping_grid(
    species: SpinSpecies,
    channel: Level,
    theta_grid: &[f64],
    phi_grid: &[f64],
    method: PumpingMethod,
) -> Result<PumpingGridResult, PumpingError> {
    if theta_grid.is_empty() || phi_grid.is_empty() {
        return Err(PumpingError::EmptyGrid);
    }
    species.index_of(channel).ok_or(PumpingError::DimensionMismatch {
        level: channel,
        dim: species.dim(),
    })?;
    let rows: Vec<(Vec<f64>, Vec<bool>)> = theta_grid
        .par_iter()
        .map(|&theta| {
            let mut values = Vec::with_capacity(phi_grid.len());
            let mut flags = Vec::with_capacity(phi_grid.len());
            for &phi in phi_grid {
                let angles = GeometricAngles::new(theta, phi)?;
                values.push(pumping_value(species, channel, angles, method)?);
                flags.push(is_resonant(species, angles));
            }
            Ok((values, flags))
        })
        .collect::<Result<_, PumpingError>>()?;
    let (values, resonant) = rows.into_iter().unzip();
    Ok(PumpingGridResult {
        species,
        channel,
        method,
        theta_grid: theta_grid.to_vec(),
        phi_grid: phi_grid.to_vec(),
        values,
        resonant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingScan {
    pub mean: f64,
    /// `max - min` of the closed form along the phase grid.
    pub spread: f64,
}

impl DephasingScan {
    pub fn relative_spread(&self) -> f64 {
        self.spread / self.mean
    }
}

/// Closed-form population of `channel` along `phi_grid` at fixed `theta`.
pub fn dephasing_scan(
    species: SpinSpecies,
    channel: Level,
    theta: f64,
    phi_grid: &[f64],
) -> Result<DephasingScan, PumpingError> {
    if phi_grid.is_empty() {
        return Err(PumpingError::EmptyGrid);
    }
    let values = phi_grid
        .iter()
        .map(|&phi| closed_form(species, channel, GeometricAngles::new(theta, phi)?))
        .collect::<Result<Vec<_>, _>>()?;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(DephasingScan {
        mean: values.iter().sum::<f64>() / values.len() as f64,
        spread: max - min,
    })
}
