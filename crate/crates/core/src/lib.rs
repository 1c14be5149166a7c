//! Cycle operators on the `(theta, phi)` sphere and the long-time pumping
//! they produce.
//!
//! * [`smallmat`]: 2×2 / 3×3 complex matrices, Hermitian exponentials and
//!   unitary eigendecomposition.
//! * [`geometry`]: spin-1/2 and spin-1 cycle operators built from sphere
//!   angles, and the inverse projection.
//! * [`ergodic`]: finite Cesàro averages, the exact infinite-time average
//!   and the closed forms.
//! * [`band`]: a phonon-driven two-band model integrated over one period.
//! * [`resonance`]: the frequency-to-phase mapping of a magnetic-resonance
//!   loop and its validity estimate.
//! * [`config`] / [`runner`]: flat-file configuration and deterministic
//!   CSV / JSON-lines sweeps, used by the `zmap-lab` binary.
//!
//! ```
//! use zmap_lab::geometry::{su3_cycle_operator, GeometricAngles, Level};
//! use zmap_lab::ergodic::{diagonal_ensemble, pg_closed_form_spin1};
//!
//! let angles = GeometricAngles::new(2.0, 0.7).unwrap();
//! let exact = diagonal_ensemble(&su3_cycle_operator(angles), Level::PLUS_ONE).unwrap();
//! let (p_minus, _, _) = pg_closed_form_spin1(angles);
//! assert!((exact.get(Level::MINUS_ONE).unwrap() - p_minus).abs() < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod band;
pub mod config;
pub mod ergodic;
pub mod geometry;
pub mod resonance;
pub mod runner;
pub mod smallmat;
pub mod units;
