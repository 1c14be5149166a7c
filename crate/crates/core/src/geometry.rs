//! Cycle operators on the geometric sphere and their inversion.
//!
//! A one-period evolution operator is labelled by a point `(theta, phi)`:
//! `theta` is the polar (vertex) angle and `phi` a quantum phase. The same
//! point produces a 2×2 operator for spin 1/2 and a 3×3 operator for spin 1.
//! Going the other way, any 2×2 unitary can be projected back onto the
//! sphere, with a residual measuring how far it is from the two-parameter form.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::smallmat::{wrap_phase, SquareMatrix, UnitaryOperator, C64};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("theta = {0} is outside [0, pi]")]
    ThetaOutOfRange(f64),
    #[error("non-finite angle")]
    NonFinite,
    #[error("unknown spin level {0:?}")]
    UnknownLevel(String),
    #[error("unknown spin species {0:?}")]
    UnknownSpecies(String),
}

/// A point `(theta, phi)` of the geometric sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricAngles {
    theta: f64,
    phi: f64,
}

impl GeometricAngles {
    /// `theta` must lie in `[0, pi]`; `phi` is wrapped into `(-pi, pi]`.
    pub fn new(theta: f64, phi: f64) -> Result<Self, GeometryError> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(GeometryError::ThetaOutOfRange(theta));
        }
        Ok(Self {
            theta,
            phi: wrap_phase(phi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// A magnetic sublevel, stored as `2 * s_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Level(i8);

impl Level {
    pub const PLUS_HALF: Level = Level(1);
    pub const MINUS_HALF: Level = Level(-1);
    pub const PLUS_ONE: Level = Level(2);
    pub const ZERO: Level = Level(0);
    pub const MINUS_ONE: Level = Level(-2);

    pub fn twice_sz(self) -> i8 {
        self.0
    }

    pub fn sz(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            v if v % 2 == 0 => write!(f, "{:+}", v / 2),
            v => write!(f, "{:+}/2", v),
        }
    }
}

impl FromStr for Level {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let level = match t {
            "+1/2" | "1/2" | "0.5" | "+0.5" => Level::PLUS_HALF,
            "-1/2" | "-0.5" => Level::MINUS_HALF,
            "+1" | "1" => Level::PLUS_ONE,
            "0" | "+0" | "-0" => Level::ZERO,
            "-1" => Level::MINUS_ONE,
            _ => return Err(GeometryError::UnknownLevel(t.to_string())),
        };
        Ok(level)
    }
}

/// Spin species with its fixed level ordering (descending `s_z`, matching
/// the row order of the cycle operators).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpinSpecies {
    Half,
    One,
}

impl SpinSpecies {
    pub fn dim(self) -> usize {
        match self {
            SpinSpecies::Half => 2,
            SpinSpecies::One => 3,
        }
    }

    pub fn levels(self) -> &'static [Level] {
        match self {
            SpinSpecies::Half => &[Level::PLUS_HALF, Level::MINUS_HALF],
            SpinSpecies::One => &[Level::PLUS_ONE, Level::ZERO, Level::MINUS_ONE],
        }
    }

    pub fn from_dim(dim: usize) -> Option<Self> {
        match dim {
            2 => Some(SpinSpecies::Half),
            3 => Some(SpinSpecies::One),
            _ => None,
        }
    }

    /// Row index of `level`, if it belongs to this species.
    pub fn index_of(self, level: Level) -> Option<usize> {
        self.levels().iter().position(|&l| l == level)
    }

    /// Highest level, the initial state of every pumping run.
    pub fn top(self) -> Level {
        self.levels()[0]
    }

    /// Lowest level (`s_z = -s`), the fully flipped channel.
    pub fn bottom(self) -> Level {
        *self.levels().last().expect("species has levels")
    }

    pub fn label(self) -> &'static str {
        match self {
            SpinSpecies::Half => "1/2",
            SpinSpecies::One => "1",
        }
    }
}

impl fmt::Display for SpinSpecies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SpinSpecies {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "half" | "1/2" | "0.5" | "spin-1/2" => Ok(SpinSpecies::Half),
            "one" | "1" | "spin-1" => Ok(SpinSpecies::One),
            other => Err(GeometryError::UnknownSpecies(other.to_string())),
        }
    }
}

/// The 2×2 cycle operator
/// `[[cos(t/2) e^{-i phi}, -sin(t/2) e^{i phi}], [sin(t/2) e^{-i phi}, cos(t/2) e^{i phi}]]`.
pub fn su2_cycle_operator(angles: GeometricAngles) -> UnitaryOperator {
    let (s, c) = (0.5 * angles.theta).sin_cos();
    let em = C64::from_polar(1.0, -angles.phi);
    let ep = em.conj();
    let m = SquareMatrix::mat2(em * c, -ep * s, em * s, ep * c);
    UnitaryOperator::from_exact(m)
}

/// The 3×3 spin-1 cycle operator: the Wigner `d^1(theta)` matrix with its
/// columns phased by `diag(e^{-i phi}, 1, e^{i phi})`.
pub fn su3_cycle_operator(angles: GeometricAngles) -> UnitaryOperator {
    let (st, ct) = angles.theta.sin_cos();
    let em = C64::from_polar(1.0, -angles.phi);
    let ep = em.conj();
    let r = FRAC_1_SQRT_2 * st;
    let one = C64::new(1.0, 0.0);
    let d = [
        [0.5 * (1.0 + ct), -r, 0.5 * (1.0 - ct)],
        [r, ct, -r],
        [0.5 * (1.0 - ct), r, 0.5 * (1.0 + ct)],
    ];
    let col_phase = [em, one, ep];
    let m = SquareMatrix::from_fn(3, |row, col| col_phase[col] * d[row][col]);
    UnitaryOperator::from_exact(m)
}

/// Cycle operator of `species` at `angles`.
pub fn cycle_operator(species: SpinSpecies, angles: GeometricAngles) -> UnitaryOperator {
    match species {
        SpinSpecies::Half => su2_cycle_operator(angles),
        SpinSpecies::One => su3_cycle_operator(angles),
    }
}

/// Projection of a 2×2 unitary onto the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionResult {
    pub angles: GeometricAngles,
    /// `|U - su2_cycle_operator(angles)|_F`.
    pub residual: f64,
}

/// Recovers `(theta, phi)` from a 2×2 unitary.
///
/// `theta` comes from the column magnitudes, `phi` from the phase of the
/// first column (`U11`, or `U21` when `U11` vanishes).
///
/// # Panics
///
/// If `u` is not 2×2.
pub fn extract_angles(u: &UnitaryOperator) -> ExtractionResult {
    assert_eq!(u.dim(), 2, "extract_angles needs a 2x2 operator");
    let m = u.matrix();
    let (u11, u21) = (m.get(0, 0), m.get(1, 0));
    let theta = (2.0 * u21.norm().atan2(u11.norm())).clamp(0.0, PI);
    let phi = if u11.norm() > 1e-12 { -u11.arg() } else { -u21.arg() };
    let angles = GeometricAngles::new(theta, phi).expect("theta clamped into range");
    let residual = (*m - *su2_cycle_operator(angles).matrix()).frobenius_norm();
    ExtractionResult { angles, residual }
}

/// Axis-angle form `u = a0 I - i avec.sigma` of an SU(2) element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle {
    pub axis: [f64; 3],
    /// Rotation angle in `[0, 2 pi)`.
    pub alpha: f64,
    pub a0: f64,
    pub avec: [f64; 3],
    /// Polar angle of the axis, in `[0, pi]`.
    pub polar: f64,
}

/// Axis-angle decomposition of a 2×2 unitary; any U(1) phase is divided out
/// first through `sqrt(det U)`.
///
/// # Panics
///
/// If `u` is not 2×2.
pub fn axis_angle_of(u: &UnitaryOperator) -> AxisAngle {
    assert_eq!(u.dim(), 2, "axis_angle_of needs a 2x2 operator");
    let det = u.matrix().det();
    let m = u.matrix().scale(C64::from_polar(1.0, -0.5 * det.arg()));
    let (u11, u12, u21, u22) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let a0 = 0.5 * (u11 + u22).re;
    let avec = [
        -0.5 * (u12 + u21).im,
        0.5 * (u21 - u12).re,
        0.5 * (u22 - u11).im,
    ];
    let norm = (avec[0] * avec[0] + avec[1] * avec[1] + avec[2] * avec[2]).sqrt();
    let alpha = 2.0 * a0.clamp(-1.0, 1.0).acos();
    let (axis, polar) = if norm > 1e-12 {
        (
            [avec[0] / norm, avec[1] / norm, avec[2] / norm],
            (avec[2] / norm).clamp(-1.0, 1.0).acos(),
        )
    } else {
        ([0.0, 0.0, 1.0], 0.0)
    };
    AxisAngle {
        axis,
        alpha: alpha.rem_euclid(2.0 * PI),
        a0,
        avec,
        polar,
    }
}

/// Rotation angle `alpha` of the SU(2) element behind the cycle operator of
/// `species`, from `cos(alpha/2) = cos(theta/2) cos(phi_eff)` with
/// `phi_eff = phi` for spin 1/2 and `phi / 2` for spin 1.
pub fn rotation_angle(species: SpinSpecies, angles: GeometricAngles) -> f64 {
    let phi_eff = match species {
        SpinSpecies::Half => angles.phi,
        SpinSpecies::One => 0.5 * angles.phi,
    };
    let cos_half = ((0.5 * angles.theta).cos() * phi_eff.cos()).clamp(-1.0, 1.0);
    2.0 * cos_half.acos()
}
