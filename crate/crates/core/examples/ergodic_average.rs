//! Compares the finite Cesàro average, the infinite-time diagonal ensemble
//! and the closed form, including the jump at an exact degeneracy.

use std::f64::consts::PI;

use zmap_lab::ergodic::{diagonal_ensemble, is_resonant, iterated_average, pg_closed_form_spin1};
use zmap_lab::geometry::{su3_cycle_operator, GeometricAngles, Level, SpinSpecies};

fn main() {
    let points = [(2.0, 0.7), (2.9, 1.9), (PI - 1e-3, 1.234), (PI, 1.234), (PI, 0.0)];
    println!("{:>8} {:>8} {:>10} {:>10} {:>10} {:>10} resonant", "theta", "phi", "n=100", "n=10000", "ensemble", "closed");
    for (theta, phi) in points {
        let angles = GeometricAngles::new(theta, phi).unwrap();
        let u = su3_cycle_operator(angles);
        let p = |n| iterated_average(&u, Level::PLUS_ONE, n).unwrap().get(Level::MINUS_ONE).unwrap();
        let exact = diagonal_ensemble(&u, Level::PLUS_ONE).unwrap().get(Level::MINUS_ONE).unwrap();
        println!(
            "{theta:>8.4} {phi:>8.4} {:>10.6} {:>10.6} {exact:>10.6} {:>10.6} {}",
            p(100),
            p(10_000),
            pg_closed_form_spin1(angles).0,
            is_resonant(SpinSpecies::One, angles)
        );
    }
}
