//! Driven two-band crystal model.
//!
//! `H(k, t) = c_H [[-e(t) - cos k, -i sin k], [i sin k, e(t) + cos k]]` with a
//! sinusoidal phonon modulation `e(t) = e0 + A sin(2 pi t / tau)`. The
//! one-period propagator is built by a midpoint Trotter product, rotated into
//! the band basis of the undriven Hamiltonian, and handed to the pumping
//! averages and the angle extraction.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ergodic::{diagonal_ensemble, iterated_average, Cycles, PumpingError};
use crate::geometry::{extract_angles, GeometricAngles, Level};
use crate::smallmat::{su2_exp, unitarity_defect, MatError, SquareMatrix, UnitaryOperator, C64, NUMERIC_UNITARITY_TOL};
use crate::units::HBAR_EV_S;

pub const DEFAULT_STEPS_PER_CYCLE: usize = 200_000;
pub const MIN_STEPS_PER_CYCLE: usize = 100;
pub const DEFAULT_K_POINTS: usize = 201;

/// Below this `|h| / c_H` the static Hamiltonian counts as gapless.
const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BandError {
    #[error("invalid band parameter: {0}")]
    InvalidSpec(String),
    #[error("trotter steps per cycle must be at least {MIN_STEPS_PER_CYCLE}, got {0}")]
    TooFewSteps(usize),
    #[error("gap closed at the start of the cycle at k = {k} (e0 = {eps0}) and the drive never reopens it")]
    GapClosedAtStart { k: f64, eps0: f64 },
    #[error("trotter product lost unitarity: defect {0:e}")]
    UnitarityLost(f64),
    #[error("empty grid")]
    EmptyGrid,
    #[error(transparent)]
    Pumping(#[from] PumpingError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// Model parameters without the crystal momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandModel {
    /// Energy scale in eV.
    pub c_h: f64,
    /// Static site-energy offset (dimensionless).
    pub eps0: f64,
    /// Phonon amplitude (dimensionless).
    pub a_ph: f64,
    /// Phonon period in seconds.
    pub tau_ph: f64,
}

impl Default for BandModel {
    fn default() -> Self {
        Self {
            c_h: 0.5,
            eps0: -1.0,
            a_ph: 0.3,
            tau_ph: 1e-12,
        }
    }
}

impl BandModel {
    pub fn validate(&self) -> Result<(), BandError> {
        let finite = [self.c_h, self.eps0, self.a_ph, self.tau_ph].iter().all(|x| x.is_finite());
        if !finite {
            return Err(BandError::InvalidSpec("non-finite parameter".into()));
        }
        if self.c_h <= 0.0 {
            return Err(BandError::InvalidSpec(format!("c_H must be positive, got {}", self.c_h)));
        }
        if self.a_ph < 0.0 {
            return Err(BandError::InvalidSpec(format!("A_ph must be non-negative, got {}", self.a_ph)));
        }
        if self.tau_ph <= 0.0 {
            return Err(BandError::InvalidSpec(format!("tau_ph must be positive, got {}", self.tau_ph)));
        }
        Ok(())
    }

    pub fn at(&self, k: f64) -> BandCycleSpec {
        BandCycleSpec { model: *self, k }
    }

    pub fn with_eps0(&self, eps0: f64) -> Self {
        Self { eps0, ..*self }
    }
}

/// A model at one crystal momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandCycleSpec {
    pub model: BandModel,
    pub k: f64,
}

impl Default for BandCycleSpec {
    fn default() -> Self {
        BandModel::default().at(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrotterScheme {
    /// Hamiltonian frozen at the midpoint of each step.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrotterConfig {
    steps_per_cycle: usize,
    scheme: TrotterScheme,
}

impl TrotterConfig {
    pub fn new(steps_per_cycle: usize) -> Result<Self, BandError> {
        if steps_per_cycle < MIN_STEPS_PER_CYCLE {
            return Err(BandError::TooFewSteps(steps_per_cycle));
        }
        Ok(Self {
            steps_per_cycle,
            scheme: TrotterScheme::Midpoint,
        })
    }

    pub fn steps_per_cycle(&self) -> usize {
        self.steps_per_cycle
    }

    pub fn scheme(&self) -> TrotterScheme {
        self.scheme
    }
}

impl Default for TrotterConfig {
    fn default() -> Self {
        Self {
            steps_per_cycle: DEFAULT_STEPS_PER_CYCLE,
            scheme: TrotterScheme::Midpoint,
        }
    }
}

/// `c_H [[-e - cos k, -i sin k], [i sin k, e + cos k]]`.
pub fn band_hamiltonian(k: f64, eps: f64, c_h: f64) -> SquareMatrix {
    let d = c_h * (eps + k.cos());
    let s = c_h * k.sin();
    SquareMatrix::mat2(C64::new(-d, 0.0), C64::new(0.0, -s), C64::new(0.0, s), C64::new(d, 0.0))
}

/// `e0 + A sin(2 pi t / tau)`.
pub fn phonon_epsilon(t: f64, model: &BandModel) -> f64 {
    model.eps0 + model.a_ph * (2.0 * PI * t / model.tau_ph).sin()
}

/// Instantaneous gap `2 c_H sqrt((e + cos k)^2 + sin^2 k)` in eV.
pub fn band_gap(k: f64, eps: f64, c_h: f64) -> f64 {
    2.0 * c_h * (eps + k.cos()).hypot(k.sin())
}

/// Smallest instantaneous gap over one drive period.
pub fn min_gap_over_cycle(spec: &BandCycleSpec) -> f64 {
    let m = &spec.model;
    let target = -spec.k.cos();
    let lo = m.eps0 - m.a_ph.abs();
    let hi = m.eps0 + m.a_ph.abs();
    let eps = target.clamp(lo, hi);
    band_gap(spec.k, eps, m.c_h)
}

/// One-period propagator in the orbital basis,
/// `U = prod_{j = N..1} exp(-i H(k, e(t_j + dt/2)) dt / hbar)`.
pub fn trotter_cycle_operator(spec: &BandCycleSpec, cfg: &TrotterConfig) -> Result<UnitaryOperator, BandError> {
    spec.model.validate()?;
    let m = &spec.model;
    let n = cfg.steps_per_cycle;
    let dt = m.tau_ph / n as f64;
    let scale = dt / HBAR_EV_S;
    let (sin_k, cos_k) = spec.k.sin_cos();
    // H = hy sigma_y + hz sigma_z
    let hy = m.c_h * sin_k;
    let mut u = SquareMatrix::identity(2)?;
    for j in 0..n {
        let t = (j as f64 + 0.5) * dt;
        let hz = -m.c_h * (phonon_epsilon(t, m) + cos_k);
        u = su2_exp(0.0, 0.0, hy, hz, scale) * u;
    }
    let defect = unitarity_defect(&u);
    if defect > NUMERIC_UNITARITY_TOL {
        return Err(BandError::UnitarityLost(defect));
    }
    Ok(UnitaryOperator::new(u)?)
}

/// Columns `(lower, upper)` diagonalising `hy sigma_y + hz sigma_z`.
fn eigenbasis_yz(hy: f64, hz: f64) -> SquareMatrix {
    let r = hy.hypot(hz);
    let b = C64::new(0.0, hy); // hx + i hy with hx = 0
    // pick the better-conditioned pair of formulas
    let (lower, upper) = if hz >= 0.0 {
        ([b.conj(), C64::new(-(hz + r), 0.0)], [C64::new(hz + r, 0.0), b])
    } else {
        ([C64::new(r - hz, 0.0), -b], [b.conj(), C64::new(r - hz, 0.0)])
    };
    let normalize = |v: [C64; 2]| {
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    };
    let (l, u) = (normalize(lower), normalize(upper));
    SquareMatrix::mat2(l[0], u[0], l[1], u[1])
}

/// Band basis of the static Hamiltonian `H(k, e0)`, columns ordered (lower, upper).
///
/// When `H(k, e0)` is exactly gapless the basis is continued from the first
/// gapped instant of the drive; if there is none the basis is undefined.
pub fn band_basis(spec: &BandCycleSpec, cfg: &TrotterConfig) -> Result<UnitaryOperator, BandError> {
    let m = &spec.model;
    let (sin_k, cos_k) = spec.k.sin_cos();
    let hy = m.c_h * sin_k;
    let gapped = |eps: f64| {
        let hz = -m.c_h * (eps + cos_k);
        (hy.hypot(hz) > DEGENERACY_TOL * m.c_h).then_some(hz)
    };
    let hz = match gapped(m.eps0) {
        Some(hz) => hz,
        None => {
            let dt = m.tau_ph / cfg.steps_per_cycle as f64;
            (0..cfg.steps_per_cycle)
                .find_map(|j| gapped(phonon_epsilon((j as f64 + 0.5) * dt, m)))
                .ok_or(BandError::GapClosedAtStart { k: spec.k, eps0: m.eps0 })?
        }
    };
    Ok(UnitaryOperator::new(eigenbasis_yz(hy, hz))?)
}

/// Outcome of driving one `k` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPumping {
    /// Inter-band population transferred out of the lower band.
    pub p_g: f64,
    pub angles: GeometricAngles,
    pub residual: f64,
    /// Cycle operator in the band basis.
    pub operator: UnitaryOperator,
}

/// Cycle operator in the band basis plus its pumping probability and sphere coordinates.
pub fn band_pumping(spec: &BandCycleSpec, cfg: &TrotterConfig, cycles: Cycles) -> Result<BandPumping, BandError> {
    let basis = band_basis(spec, cfg)?;
    let orbital = trotter_cycle_operator(spec, cfg)?;
    let u = orbital.conjugate_by(&basis)?;
    let dist = match cycles {
        Cycles::Finite(n) => iterated_average(&u, Level::PLUS_HALF, n)?,
        Cycles::Infinite => diagonal_ensemble(&u, Level::PLUS_HALF)?,
    };
    let p_g = dist.probabilities[1].clamp(0.0, 1.0);
    let ext = extract_angles(&u);
    Ok(BandPumping {
        p_g,
        angles: ext.angles,
        residual: ext.residual,
        operator: u,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowStatus {
    Ok,
    GapClosedAtStart,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::GapClosedAtStart => "gap_closed_at_start",
        })
    }
}

/// One `k` point of a Brillouin-zone sweep. Skipped rows carry NaN values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSweepRow {
    pub k: f64,
    pub theta: f64,
    pub phi: f64,
    pub residual: f64,
    pub p_g: f64,
    /// Minimum instantaneous gap over the cycle, eV.
    pub gap_min: f64,
    pub status: RowStatus,
}

/// `count` points evenly spaced on `[-pi, pi]`, both ends included, so the
/// grid is mirror-symmetric and contains `0` (odd counts) and `pi`.
pub fn symmetric_k_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let step = 2.0 * PI / (count - 1) as f64;
            (0..count)
                .map(|j| {
                    // mirror pairs computed from the same magnitude
                    let m = j as f64 - (count - 1) as f64 / 2.0;
                    if m == 0.0 {
                        0.0
                    } else if j == 0 || j == count - 1 {
                        m.signum() * PI
                    } else {
                        m * step
                    }
                })
                .collect()
        }
    }
}

/// Drives every `k` in `k_grid`; rows come back in grid order.
pub fn bz_sweep(
    model: &BandModel,
    cfg: &TrotterConfig,
    k_grid: &[f64],
    cycles: Cycles,
) -> Result<Vec<KSweepRow>, BandError> {
    if k_grid.is_empty() {
        return Err(BandError::EmptyGrid);
    }
    model.validate()?;
    k_grid
        .par_iter()
        .map(|&k| {
            let spec = model.at(k);
            let gap_min = min_gap_over_cycle(&spec);
            match band_pumping(&spec, cfg, cycles) {
                Ok(bp) => Ok(KSweepRow {
                    k,
                    theta: bp.angles.theta(),
                    phi: bp.angles.phi(),
                    residual: bp.residual,
                    p_g: bp.p_g,
                    gap_min,
                    status: RowStatus::Ok,
                }),
                Err(BandError::GapClosedAtStart { .. }) => Ok(KSweepRow {
                    k,
                    theta: f64::NAN,
                    phi: f64::NAN,
                    residual: f64::NAN,
                    p_g: f64::NAN,
                    gap_min,
                    status: RowStatus::GapClosedAtStart,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasRow {
    pub eps0: f64,
    /// Mean of `p_G` over the gapped `k` points.
    pub p_total: f64,
    pub skipped_k: usize,
}

/// Total pumping as a function of the static offset `e0`.
pub fn bias_sweep(
    model: &BandModel,
    cfg: &TrotterConfig,
    eps0_grid: &[f64],
    k_grid: &[f64],
    cycles: Cycles,
) -> Result<Vec<BiasRow>, BandError> {
    if eps0_grid.is_empty() || k_grid.is_empty() {
        return Err(BandError::EmptyGrid);
    }
    let cells: Vec<(usize, f64)> = (0..eps0_grid.len())
        .flat_map(|i| k_grid.iter().map(move |&k| (i, k)))
        .collect();
    let results: Vec<Option<f64>> = cells
        .par_iter()
        .map(|&(i, k)| match band_pumping(&model.with_eps0(eps0_grid[i]).at(k), cfg, cycles) {
            Ok(bp) => Ok(Some(bp.p_g)),
            Err(BandError::GapClosedAtStart { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_, BandError>>()?;
    Ok(eps0_grid
        .iter()
        .enumerate()
        .map(|(i, &eps0)| {
            let chunk = &results[i * k_grid.len()..(i + 1) * k_grid.len()];
            let kept: Vec<f64> = chunk.iter().flatten().copied().collect();
            let p_total = if kept.is_empty() {
                f64::NAN
            } else {
                kept.iter().sum::<f64>() / kept.len() as f64
            };
            BiasRow {
                eps0,
                p_total,
                skipped_k: chunk.len() - kept.len(),
            }
        })
        .collect())
}

/// Points on the open interval `(0, pi)` spaced so the cycle phase moves by
/// at most about `max_step` radians between neighbours. The band energy obeys
/// `|dE/dk| <= c_H`, which bounds the phase drift per unit `k` by `tau c_H / hbar`.
pub fn phase_resolving_k_grid(model: &BandModel, max_step: f64) -> Vec<f64> {
    let rate = model.tau_ph * model.c_h / HBAR_EV_S;
    let intervals = (PI * rate / max_step).ceil().max(2.0) as usize;
    (1..intervals).map(|j| PI * j as f64 / intervals as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakRefinement {
    pub k: f64,
    pub p_g: f64,
    pub evaluations: usize,
}

/// Highest `p_G` on `[lo, hi]`: a uniform scan of `samples` points followed by
/// a golden-section search between the neighbours of the best sample.
pub fn refine_peak(
    model: &BandModel,
    cfg: &TrotterConfig,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Result<PeakRefinement, BandError> {
    if !(lo < hi) || samples < 3 {
        return Err(BandError::EmptyGrid);
    }
    let eval = |k: f64| band_pumping(&model.at(k), cfg, Cycles::Infinite).map(|bp| bp.p_g);
    let ks: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let ps = ks.par_iter().map(|&k| eval(k)).collect::<Result<Vec<_>, _>>()?;
    let best = (0..samples)
        .max_by(|&a, &b| ps[a].total_cmp(&ps[b]))
        .expect("samples >= 3");
    let mut evaluations = samples;
    let (mut a, mut b) = (ks[best.saturating_sub(1)], ks[(best + 1).min(samples - 1)]);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut pc, mut pd) = (eval(c)?, eval(d)?);
    evaluations += 2;
    for _ in 0..40 {
        if pc > pd {
            b = d;
            d = c;
            pd = pc;
            c = b - ratio * (b - a);
            pc = eval(c)?;
        } else {
            a = c;
            c = d;
            pc = pd;
            d = a + ratio * (b - a);
            pd = eval(d)?;
        }
        evaluations += 1;
    }
    let (k, p_g) = [(ks[best], ps[best]), (c, pc), (d, pd)]
        .into_iter()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty");
    Ok(PeakRefinement { k, p_g, evaluations })
}
