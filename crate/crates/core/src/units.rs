//! CODATA 2018 constants.

/// Reduced Planck constant, J s.
pub const HBAR_J_S: f64 = 1.054571817e-34;
/// Reduced Planck constant, eV s.
pub const HBAR_EV_S: f64 = 6.582119569e-16;
/// Planck constant, J s.
pub const H_J_S: f64 = 6.62607015e-34;
/// Bohr magneton, J / T.
pub const MU_B_J_PER_T: f64 = 9.2740100783e-24;

/// The constants as one value, for echoing into run metadata.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub hbar_ev: f64,
    pub h: f64,
    pub mu_b: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        hbar: HBAR_J_S,
        hbar_ev: HBAR_EV_S,
        h: H_J_S,
        mu_b: MU_B_J_PER_T,
    };
}
