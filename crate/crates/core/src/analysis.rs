//! Peak and crossing detection on sampled curves.

use std::f64::consts::PI;

/// Indices of strict interior local maxima. For a flat top only the first
/// sample is reported; NaN samples never qualify and never bound a peak.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    if values.len() < 3 {
        return Vec::new();
    }
    (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}

/// Interpolated abscissae where a wrapped phase passes through zero.
///
/// A sign change counts only when the step between the two samples is
/// shorter than `pi`; a jump across the `-pi / pi` branch cut is not a zero crossing.
pub fn phase_zero_crossings(xs: &[f64], phases: &[f64]) -> Vec<f64> {
    assert_eq!(xs.len(), phases.len());
    let mut out = Vec::new();
    for i in 0..phases.len().saturating_sub(1) {
        let (a, b) = (phases[i], phases[i + 1]);
        if !a.is_finite() || !b.is_finite() || (a - b).abs() >= PI {
            continue;
        }
        if a == 0.0 {
            if out.last() != Some(&xs[i]) {
                out.push(xs[i]);
            }
        } else if a * b < 0.0 {
            out.push(xs[i] + (xs[i + 1] - xs[i]) * a / (a - b));
        } else if b == 0.0 {
            out.push(xs[i + 1]);
        }
    }
    out
}
