//! Builds both cycle operators at a few sphere points, checks unitarity,
//! recovers the angles and prints the eigenphases.

use zmap_lab::geometry::{extract_angles, rotation_angle, su2_cycle_operator, su3_cycle_operator, GeometricAngles, SpinSpecies};
use zmap_lab::smallmat::{unitary_eigensystem, DEFAULT_MERGE_TOL};

fn main() {
    for (theta, phi) in [(0.3, 0.0), (1.2, 0.8), (2.5, -2.0), (std::f64::consts::PI, 1.0)] {
        let angles = GeometricAngles::new(theta, phi).expect("valid angles");
        let half = su2_cycle_operator(angles);
        let one = su3_cycle_operator(angles);
        let back = extract_angles(&half);
        let phases = unitary_eigensystem(&one, DEFAULT_MERGE_TOL).expect("eigensystem");
        println!(
            "theta={theta:.3} phi={phi:+.3}  defects {:.1e}/{:.1e}  recovered ({:.6}, {:+.6})  alpha_1/2={:.4} alpha_1={:.4}",
            half.defect(),
            one.defect(),
            back.angles.theta(),
            back.angles.phi(),
            rotation_angle(SpinSpecies::Half, angles),
            rotation_angle(SpinSpecies::One, angles),
        );
        println!("    spin-1 eigenphases {:?} multiplicities {:?}", phases.phases(), phases.multiplicities());
    }
}
