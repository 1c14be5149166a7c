//! Inter-band pumping across the zone for the phonon-driven two-band model.
//!
//! `cargo run --release --example bz_sweep -- [steps_per_cycle]`

use zmap_lab::analysis::{local_maxima, phase_zero_crossings};
use zmap_lab::band::{bz_sweep, refine_peak, symmetric_k_grid, BandModel, TrotterConfig};
use zmap_lab::ergodic::Cycles;

fn main() {
    let steps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50_000);
    let model = BandModel::default();
    let cfg = TrotterConfig::new(steps).expect("steps");
    let ks = symmetric_k_grid(201);
    let rows = bz_sweep(&model, &cfg, &ks, Cycles::Infinite).expect("sweep");
    for r in rows.iter().skip(100).step_by(10) {
        println!(
            "k={:.4} theta={:.4} phi={:+.4} p_G={:.3e} gap_min={:.4} eV {}",
            r.k, r.theta, r.phi, r.p_g, r.gap_min, r.status
        );
    }
    let p: Vec<f64> = rows.iter().map(|r| r.p_g).collect();
    let phi: Vec<f64> = rows.iter().map(|r| r.phi).collect();
    println!("grid maxima at k = {:?}", local_maxima(&p).iter().map(|&i| ks[i]).collect::<Vec<_>>());
    println!("phi = 0 crossings on the grid: {}", phase_zero_crossings(&ks, &phi).len());

    // the grid spacing is coarser than the peak spacing near k = 0
    let peak = refine_peak(&model, &cfg, 0.0, 0.0628, 64).expect("refine");
    println!("refined peak near k = 0: p_G = {:.4} at k = {:.5}", peak.p_g, peak.k);
}
