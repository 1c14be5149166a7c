//! Total pumping against the static offset of the two-band model.
//!
//! `cargo run --release --example bias_oscillation -- [steps_per_cycle] [k_points]`

use zmap_lab::analysis::local_maxima;
use zmap_lab::band::{bias_sweep, symmetric_k_grid, BandModel, TrotterConfig};
use zmap_lab::config::linspace;
use zmap_lab::ergodic::Cycles;

fn main() {
    let mut args = std::env::args().skip(1);
    let steps = args.next().and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let k_points = args.next().and_then(|s| s.parse().ok()).unwrap_or(101);
    let eps = linspace(-1.4, -0.6, 41);
    let rows = bias_sweep(
        &BandModel::default(),
        &TrotterConfig::new(steps).expect("steps"),
        &eps,
        &symmetric_k_grid(k_points),
        Cycles::Infinite,
    )
    .expect("sweep");
    for r in &rows {
        let bar = "#".repeat((r.p_total * 4000.0).round() as usize);
        println!("e0={:+.3} P={:.5} skipped={} {bar}", r.eps0, r.p_total, r.skipped_k);
    }
    let totals: Vec<f64> = rows.iter().map(|r| r.p_total).collect();
    println!("{} local maxima", local_maxima(&totals).len());
}
