//! Oscillation of the pumped population against loop frequency for both
//! species, and the adiabaticity estimate of the drive.

use std::f64::consts::FRAC_PI_2;

use zmap_lab::geometry::{Level, SpinSpecies};
use zmap_lab::resonance::{mean_peak_spacing, oscillation_curve, validity_check, ResonanceProposal};

fn main() {
    let proposal = ResonanceProposal::default();
    println!("phase coefficient c = {:.4e} rad/s", proposal.phase_coefficient());
    let half = oscillation_curve(SpinSpecies::Half, FRAC_PI_2, &proposal, Level::MINUS_HALF).unwrap();
    let one = oscillation_curve(SpinSpecies::One, FRAC_PI_2, &proposal, Level::MINUS_ONE).unwrap();
    let (sh, so) = (mean_peak_spacing(&half).unwrap(), mean_peak_spacing(&one).unwrap());
    println!("peak spacing in phi: spin 1/2 {sh:.4}, spin 1 {so:.4}, ratio {:.4}", sh / so);
    for (h, o) in half.iter().zip(&one).step_by(200) {
        println!("f={:>12.1} Hz  phi={:>9.3}  p_1/2={:.4}  p_1={:.4}", h.f, h.phi_raw, h.p_g, o.p_g);
    }
    let v = validity_check(&proposal);
    println!("h f_max / splitting = {:.4} (ok: {})", v.ratio, v.ok);
}
