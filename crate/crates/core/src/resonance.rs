//! Magnetic-resonance mapping from loop frequency to the sphere phase.
//!
//! With a mean Zeeman energy `mu_B B`, a loop of period `1/f` accumulates the
//! phase `phi = c (1/f - 1/f0)` with `c = mu_B B / hbar`, taking `phi = 0` at
//! the reference frequency `f0`. Feeding that phase into the closed-form
//! pumping probabilities gives oscillation curves against `f`.

use serde::Serialize;

use crate::analysis::local_maxima;
use crate::ergodic::{closed_form, PumpingError};
use crate::geometry::{GeometricAngles, GeometryError, Level, SpinSpecies};
use crate::smallmat::wrap_phase;
use crate::units::{HBAR_J_S, H_J_S, MU_B_J_PER_T};

/// `h f / Delta` below this counts as well separated from Rabi pumping.
pub const VALIDITY_RATIO_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResonanceError {
    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("mean field must be positive, got {0}")]
    NonPositiveField(f64),
    #[error("empty frequency grid")]
    EmptyGrid,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Pumping(#[from] PumpingError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceProposal {
    /// Mean field, tesla.
    pub b_bar: f64,
    /// Reference frequency where `phi = 0`, Hz.
    pub f0: f64,
    /// Loop frequencies, Hz.
    pub f_grid: Vec<f64>,
    /// Vertex angles to scan, radians.
    pub theta_list: Vec<f64>,
}

impl Default for ResonanceProposal {
    #[allow(clippy::approx_constant)]
    fn default() -> Self {
        Self {
            b_bar: 0.01,
            f0: 1e7,
            f_grid: log_spaced(2e6, 5e7, 2000),
            theta_list: vec![1.0, 2.0, 3.0, 3.14],
        }
    }
}

impl ResonanceProposal {
    pub fn validate(&self) -> Result<(), ResonanceError> {
        if !(self.b_bar > 0.0) {
            return Err(ResonanceError::NonPositiveField(self.b_bar));
        }
        if let Some(&f) = std::iter::once(&self.f0)
            .chain(&self.f_grid)
            .find(|f| !(**f > 0.0) || !f.is_finite())
        {
            return Err(ResonanceError::NonPositiveFrequency(f));
        }
        for &theta in &self.theta_list {
            GeometricAngles::new(theta, 0.0)?;
        }
        Ok(())
    }

    /// `c = mu_B B / hbar`, rad/s.
    pub fn phase_coefficient(&self) -> f64 {
        MU_B_J_PER_T * self.b_bar / HBAR_J_S
    }
}

/// `count` points log-spaced on `[lo, hi]`, endpoints included.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseOfFrequency {
    /// `c (1/f - 1/f0)`, unwrapped.
    pub raw: f64,
    /// `raw` wrapped into `(-pi, pi]`.
    pub wrapped: f64,
}

pub fn phi_of_frequency(f: f64, proposal: &ResonanceProposal) -> Result<PhaseOfFrequency, ResonanceError> {
    if !(f > 0.0) {
        return Err(ResonanceError::NonPositiveFrequency(f));
    }
    let raw = proposal.phase_coefficient() * (1.0 / f - 1.0 / proposal.f0);
    Ok(PhaseOfFrequency {
        raw,
        wrapped: wrap_phase(raw),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationPoint {
    pub f: f64,
    pub phi_raw: f64,
    pub p_g: f64,
}

/// Closed-form pumping of `channel` along the frequency grid at fixed `theta`.
/// Both species see the same phase `phi(f)`.
pub fn oscillation_curve(
    species: SpinSpecies,
    theta: f64,
    proposal: &ResonanceProposal,
    channel: Level,
) -> Result<Vec<OscillationPoint>, ResonanceError> {
    if proposal.f_grid.is_empty() {
        return Err(ResonanceError::EmptyGrid);
    }
    proposal
        .f_grid
        .iter()
        .map(|&f| {
            let phase = phi_of_frequency(f, proposal)?;
            let angles = GeometricAngles::new(theta, phase.wrapped)?;
            Ok(OscillationPoint {
                f,
                phi_raw: phase.raw,
                p_g: closed_form(species, channel, angles)?,
            })
        })
        .collect()
}

/// Mean distance in `phi_raw` between consecutive local maxima of `p_g`.
pub fn mean_peak_spacing(curve: &[OscillationPoint]) -> Option<f64> {
    let values: Vec<f64> = curve.iter().map(|p| p.p_g).collect();
    let peaks = local_maxima(&values);
    if peaks.len() < 2 {
        return None;
    }
    let first = curve[peaks[0]].phi_raw;
    let last = curve[*peaks.last().expect("non-empty")].phi_raw;
    Some((last - first).abs() / (peaks.len() - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Validity {
    /// `h f_max / (2 mu_B B)`.
    pub ratio: f64,
    pub ok: bool,
}

/// Compares the drive quantum `h f` at the top of the grid with the Zeeman
/// splitting `2 mu_B B`.
pub fn validity_check(proposal: &ResonanceProposal) -> Validity {
    let splitting = 2.0 * MU_B_J_PER_T * proposal.b_bar;
    let f_max = proposal.f_grid.iter().copied().fold(0.0, f64::max);
    let ratio = H_J_S * f_max / splitting;
    Validity {
        ratio,
        ok: ratio < VALIDITY_RATIO_LIMIT,
    }
}
