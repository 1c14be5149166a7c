//! Phase dependence of the spin-1 populations flattening towards the pole.

use std::f64::consts::PI;

use zmap_lab::ergodic::dephasing_scan;
use zmap_lab::geometry::{Level, SpinSpecies};

fn main() {
    let phis: Vec<f64> = (1..=360).map(|j| -PI + 2.0 * PI * j as f64 / 360.0).collect();
    for theta in [1.0, 1.8, 2.4, 2.9, 3.1, 3.135, PI] {
        let cols: Vec<String> = [Level::MINUS_ONE, Level::ZERO, Level::PLUS_ONE]
            .iter()
            .map(|&level| {
                let scan = dephasing_scan(SpinSpecies::One, level, theta, &phis).unwrap();
                format!("{level:>2}: mean {:.4} spread {:.2e}", scan.mean, scan.spread)
            })
            .collect();
        println!("theta={theta:.4}  {}", cols.join("  "));
    }
}
