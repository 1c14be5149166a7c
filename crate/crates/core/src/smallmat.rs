//! Dense complex linear algebra for 2×2 and 3×3 matrices.
//!
//! Everything here is sized for the cycle operators of spin-1/2 and spin-1
//! systems: matrices live inline in a fixed `[C64; 9]` buffer and never touch
//! the heap. The eigensolver is a shifted complex QR iteration, which for
//! normal inputs (unitary or Hermitian) converges to a diagonal Schur form
//! whose orthonormal Schur vectors are the eigenvectors.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;

/// Unitarity tolerance for operators built from closed-form expressions.
pub const ANALYTIC_UNITARITY_TOL: f64 = 1e-10;
/// Unitarity tolerance for operators produced by numerical integration.
pub const NUMERIC_UNITARITY_TOL: f64 = 1e-8;
/// Default circular distance below which eigenphases are merged.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;
/// Hermiticity tolerance accepted by [`herm_exp`].
pub const HERMITICITY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatError {
    #[error("unsupported dimension {0}: only 2 and 3 are supported")]
    BadDimension(usize),
    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("input is not Hermitian: |H - H^dag|_F = {defect:e}")]
    NonHermitianInput { defect: f64 },
    #[error("matrix is not unitary: |M^dag M - I|_F = {defect:e}")]
    NotUnitary { defect: f64 },
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("eigenproblem did not converge after {iterations} QR sweeps")]
    ConvergenceFailure { iterations: usize },
}

/// A dense 2×2 or 3×3 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    entries: [C64; 9],
}

impl SquareMatrix {
    fn check_dim(dim: usize) -> Result<(), MatError> {
        match dim {
            2 | 3 => Ok(()),
            d => Err(MatError::BadDimension(d)),
        }
    }

    pub fn zeros(dim: usize) -> Result<Self, MatError> {
        Self::check_dim(dim)?;
        Ok(Self {
            dim,
            entries: [ZERO; 9],
        })
    }

    pub fn identity(dim: usize) -> Result<Self, MatError> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        Ok(m)
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self, MatError> {
        Self::check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(MatError::BadLength {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatError::NonFinite);
        }
        let mut m = Self::zeros(dim)?;
        m.entries[..dim * dim].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_diag(diag: &[C64]) -> Result<Self, MatError> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        Ok(m)
    }

    pub(crate) fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        debug_assert!(dim == 2 || dim == 3);
        let mut entries = [ZERO; 9];
        for r in 0..dim {
            for c in 0..dim {
                entries[r * dim + c] = f(r, c);
            }
        }
        Self { dim, entries }
    }

    /// 2×2 matrix from its four entries, row-major.
    pub(crate) fn mat2(a: C64, b: C64, c: C64, d: C64) -> Self {
        let mut entries = [ZERO; 9];
        entries[..4].copy_from_slice(&[a, b, c, d]);
        Self { dim: 2, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(r, c) * factor)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn det(&self) -> C64 {
        let m = |r, c| self.get(r, c);
        match self.dim {
            2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
            _ => {
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest off-diagonal magnitude.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c {
                    worst = worst.max(self.get(r, c).norm());
                }
            }
        }
        worst
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// `M v` for a state stored in the first `dim` slots of `v`.
    #[inline]
    pub fn apply(&self, v: &[C64; 3]) -> [C64; 3] {
        let mut out = [ZERO; 3];
        for (r, slot) in out.iter_mut().enumerate().take(self.dim) {
            let mut acc = ZERO;
            for (c, vc) in v.iter().enumerate().take(self.dim) {
                acc += self.get(r, c) * vc;
            }
            *slot = acc;
        }
        out
    }

    pub fn column(&self, col: usize) -> [C64; 3] {
        let mut out = [ZERO; 3];
        for (r, slot) in out.iter_mut().enumerate().take(self.dim) {
            *slot = self.get(r, col);
        }
        out
    }

    fn check_same_dim(&self, other: &Self) -> Result<(), MatError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(MatError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, MatError> {
        self.check_same_dim(rhs)?;
        Ok(*self * *rhs)
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for SquareMatrix {
    type Output = SquareMatrix;

    /// Panics in debug builds on a dimension mismatch; use [`SquareMatrix::try_mul`]
    /// for a checked product.
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        if n == 2 {
            let (a, b, c, d) = (self.entries[0], self.entries[1], self.entries[2], self.entries[3]);
            let (e, f, g, h) = (rhs.entries[0], rhs.entries[1], rhs.entries[2], rhs.entries[3]);
            return Self::mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h);
        }
        Self::from_fn(n, |r, c| (0..n).map(|k| self.get(r, k) * rhs.get(k, c)).sum())
    }
}

impl Add for SquareMatrix {
    type Output = SquareMatrix;

    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |r, c| self.get(r, c) + rhs.get(r, c))
    }
}

impl Sub for SquareMatrix {
    type Output = SquareMatrix;

    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |r, c| self.get(r, c) - rhs.get(r, c))
    }
}

/// `|M^dag M - I|_F`.
pub fn unitarity_defect(m: &SquareMatrix) -> f64 {
    let gram = m.adjoint() * *m;
    let id = SquareMatrix::identity(m.dim()).expect("dimension already validated");
    (gram - id).frobenius_norm()
}

/// A 2×2 or 3×3 matrix known to be unitary, with its defect cached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryOperator {
    matrix: SquareMatrix,
    defect: f64,
}

impl UnitaryOperator {
    /// Accepts `matrix` if its defect is within [`NUMERIC_UNITARITY_TOL`].
    pub fn new(matrix: SquareMatrix) -> Result<Self, MatError> {
        Self::with_tolerance(matrix, NUMERIC_UNITARITY_TOL)
    }

    pub fn with_tolerance(matrix: SquareMatrix, tol: f64) -> Result<Self, MatError> {
        let defect = unitarity_defect(&matrix);
        if !(defect <= tol) {
            return Err(MatError::NotUnitary { defect });
        }
        Ok(Self { matrix, defect })
    }

    /// Wraps a matrix that is unitary by construction.
    pub(crate) fn from_exact(matrix: SquareMatrix) -> Self {
        let defect = unitarity_defect(&matrix);
        debug_assert!(defect <= NUMERIC_UNITARITY_TOL, "defect {defect:e}");
        Self { matrix, defect }
    }

    pub fn identity(dim: usize) -> Result<Self, MatError> {
        Ok(Self {
            matrix: SquareMatrix::identity(dim)?,
            defect: 0.0,
        })
    }

    #[inline]
    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn adjoint(&self) -> Self {
        Self::from_exact(self.matrix.adjoint())
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self, MatError> {
        Ok(Self::from_exact(self.matrix.try_mul(&rhs.matrix)?))
    }

    /// `V^dag U V` for a unitary change of basis `V`.
    pub fn conjugate_by(&self, basis: &Self) -> Result<Self, MatError> {
        let m = basis.matrix.adjoint().try_mul(&self.matrix)?.try_mul(&basis.matrix)?;
        Ok(Self::from_exact(m))
    }
}

/// `exp(-i * scale * H)` for Hermitian `H`.
///
/// Dimension 2 uses the Pauli decomposition `H = h0 I + h.sigma`; dimension 3
/// goes through the eigendecomposition of `H`.
pub fn herm_exp(h: &SquareMatrix, scale: f64) -> Result<UnitaryOperator, MatError> {
    let defect = h.hermiticity_defect();
    if !(defect <= HERMITICITY_TOL) {
        return Err(MatError::NonHermitianInput { defect });
    }
    let m = match h.dim() {
        2 => herm_exp2(h, scale),
        _ => {
            let (t, q) = schur(h)?;
            let phases = SquareMatrix::from_fn(3, |r, c| {
                if r == c {
                    C64::from_polar(1.0, -scale * t.get(r, r).re)
                } else {
                    ZERO
                }
            });
            q * phases * q.adjoint()
        }
    };
    Ok(UnitaryOperator::from_exact(m))
}

/// Closed-form 2×2 propagator, no validation. Hot path of the Trotter loop.
#[inline]
pub(crate) fn herm_exp2(h: &SquareMatrix, scale: f64) -> SquareMatrix {
    let h0 = 0.5 * (h.entries[0].re + h.entries[3].re);
    let hz = 0.5 * (h.entries[0].re - h.entries[3].re);
    let hx = 0.5 * (h.entries[1].re + h.entries[2].re);
    let hy = 0.5 * (h.entries[2].im - h.entries[1].im);
    su2_exp(h0, hx, hy, hz, scale)
}

/// `exp(-i s (h0 + hx sx + hy sy + hz sz))`.
#[inline]
pub(crate) fn su2_exp(h0: f64, hx: f64, hy: f64, hz: f64, s: f64) -> SquareMatrix {
    let norm = (hx * hx + hy * hy + hz * hz).sqrt();
    let (sin, cos) = (s * norm).sin_cos();
    // sin(s|h|)/|h|, finite as |h| -> 0
    let sinc = if norm > 0.0 { sin / norm } else { s };
    let global = C64::from_polar(1.0, -s * h0);
    let a = C64::new(cos, -sinc * hz);
    let b = C64::new(-sinc * hy, -sinc * hx);
    let c = C64::new(sinc * hy, -sinc * hx);
    let d = C64::new(cos, sinc * hz);
    SquareMatrix::mat2(global * a, global * b, global * c, global * d)
}

/// Givens rotation `[[c, s], [-conj(s), c]]` with real `c`, mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    let na = a.norm();
    if na == 0.0 {
        // swap, with phase chosen so that the rotated entry is real-positive
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    let phase = a / na;
    (na / r, phase * b.conj() / r)
}

/// Left-multiplies rows `i`, `i + 1` of `m` by the rotation.
fn rotate_rows(m: &mut SquareMatrix, i: usize, c: f64, s: C64) {
    for col in 0..m.dim {
        let x = m.get(i, col);
        let y = m.get(i + 1, col);
        m.set(i, col, x * c + s * y);
        m.set(i + 1, col, -s.conj() * x + y * c);
    }
}

/// Right-multiplies columns `i`, `i + 1` of `m` by the adjoint rotation.
fn rotate_cols_adjoint(m: &mut SquareMatrix, i: usize, c: f64, s: C64) {
    for row in 0..m.dim {
        let x = m.get(row, i);
        let y = m.get(row, i + 1);
        m.set(row, i, x * c + y * s.conj());
        m.set(row, i + 1, -x * s + y * c);
    }
}

const MAX_QR_SWEEPS: usize = 200;

/// Complex Schur decomposition `A = Q T Q^dag` with `T` upper triangular.
///
/// Hessenberg reduction by one Givens rotation, then explicitly shifted QR
/// sweeps with Wilkinson shifts and deflation at machine precision.
pub(crate) fn schur(a: &SquareMatrix) -> Result<(SquareMatrix, SquareMatrix), MatError> {
    let n = a.dim();
    let mut t = *a;
    let mut q = SquareMatrix::identity(n)?;

    if n == 3 && t.get(2, 0).norm() > 0.0 {
        let (c, s) = givens(t.get(1, 0), t.get(2, 0));
        rotate_rows(&mut t, 1, c, s);
        rotate_cols_adjoint(&mut t, 1, c, s);
        rotate_cols_adjoint(&mut q, 1, c, s);
        t.set(2, 0, ZERO);
    }

    let mut hi = n - 1;
    let mut since_deflation = 0usize;
    let mut sweeps = 0usize;
    while hi > 0 {
        // find the top of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = t.get(lo, lo - 1).norm();
            let scale = t.get(lo, lo).norm() + t.get(lo - 1, lo - 1).norm();
            if sub <= f64::EPSILON * scale || sub < f64::MIN_POSITIVE {
                t.set(lo, lo - 1, ZERO);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_QR_SWEEPS {
            return Err(MatError::ConvergenceFailure { iterations: sweeps });
        }
        since_deflation += 1;

        let shift = if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            t.get(hi, hi) + C64::new(0.75 * t.get(hi, hi - 1).norm(), 0.31 * t.get(hi, hi - 1).norm())
        } else {
            wilkinson_shift(
                t.get(hi - 1, hi - 1),
                t.get(hi - 1, hi),
                t.get(hi, hi - 1),
                t.get(hi, hi),
            )
        };

        for i in lo..=hi {
            t.set(i, i, t.get(i, i) - shift);
        }
        let mut rotations = [(1.0, ZERO); 2];
        for j in lo..hi {
            let (c, s) = givens(t.get(j, j), t.get(j + 1, j));
            rotate_rows(&mut t, j, c, s);
            t.set(j + 1, j, ZERO);
            rotations[j - lo] = (c, s);
        }
        for j in lo..hi {
            let (c, s) = rotations[j - lo];
            rotate_cols_adjoint(&mut t, j, c, s);
            rotate_cols_adjoint(&mut q, j, c, s);
        }
        for i in lo..=hi {
            t.set(i, i, t.get(i, i) + shift);
        }
    }
    Ok((t, q))
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let disc = (half_diff * half_diff + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Spectral form of a unitary: distinct eigenphases with their projectors.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    phases: Vec<f64>,
    projectors: Vec<SquareMatrix>,
    multiplicities: Vec<usize>,
}

impl EigenSystem {
    /// Eigenphases in (-pi, pi], ascending.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn projectors(&self) -> &[SquareMatrix] {
        &self.projectors
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// `sum_k exp(i lambda_k) P_k`.
    pub fn reconstruct(&self) -> SquareMatrix {
        let dim = self.projectors[0].dim();
        self.phases
            .iter()
            .zip(&self.projectors)
            .fold(SquareMatrix::zeros(dim).expect("valid dim"), |acc, (&ph, p)| {
                acc + p.scale(C64::from_polar(1.0, ph))
            })
    }
}

/// Maps an angle into (-pi, pi].
pub fn wrap_phase(angle: f64) -> f64 {
    let mut x = angle.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    if x <= -PI {
        x += 2.0 * PI;
    }
    x
}

/// Distance between two angles on the circle, in [0, pi].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Eigenphases and spectral projectors of `u`, merging eigenphases closer than
/// `merge_tol` on the circle into one projector of summed rank.
pub fn unitary_eigensystem(u: &UnitaryOperator, merge_tol: f64) -> Result<EigenSystem, MatError> {
    let n = u.dim();
    let (t, q) = schur(u.matrix())?;
    let raw: Vec<f64> = (0..n).map(|i| wrap_phase(t.get(i, i).arg())).collect();

    // connected components of the "closer than merge_tol" relation
    let mut group: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if circular_distance(raw[i], raw[j]) < merge_tol {
                let (gi, gj) = (group[i], group[j]);
                for g in group.iter_mut() {
                    if *g == gj {
                        *g = gi;
                    }
                }
            }
        }
    }

    let mut clusters: Vec<(f64, SquareMatrix, usize)> = Vec::with_capacity(n);
    let mut labels: Vec<usize> = group.clone();
    labels.sort_unstable();
    labels.dedup();
    for label in labels {
        let members: Vec<usize> = (0..n).filter(|&i| group[i] == label).collect();
        let mean: C64 = members.iter().map(|&i| C64::from_polar(1.0, raw[i])).sum();
        let phase = wrap_phase(mean.arg());
        let mut proj = SquareMatrix::zeros(n)?;
        for &i in &members {
            let v = q.column(i);
            proj = proj + SquareMatrix::from_fn(n, |r, c| v[r] * v[c].conj());
        }
        clusters.push((phase, proj, members.len()));
    }
    clusters.sort_by(|a, b| a.0.total_cmp(&b.0));

    Ok(EigenSystem {
        phases: clusters.iter().map(|c| c.0).collect(),
        projectors: clusters.iter().map(|c| c.1).collect(),
        multiplicities: clusters.iter().map(|c| c.2).collect(),
    })
}

/// Haar-distributed random unitary: Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryOperator, MatError> {
    SquareMatrix::check_dim(dim)?;
    let mut cols: Vec<[C64; 3]> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = [ZERO; 3];
        for slot in v.iter_mut().take(dim) {
            *slot = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        for _ in 0..2 {
            for u in &cols {
                let overlap: C64 = (0..dim).map(|i| u[i].conj() * v[i]).sum();
                for i in 0..dim {
                    v[i] -= overlap * u[i];
                }
            }
        }
        let norm = (0..dim).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for slot in v.iter_mut().take(dim) {
            *slot /= norm;
        }
        cols.push(v);
    }
    let m = SquareMatrix::from_fn(dim, |r, c| cols[c][r]);
    UnitaryOperator::with_tolerance(m, ANALYTIC_UNITARITY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &SquareMatrix, b: &SquareMatrix, tol: f64) -> bool {
        (*a - *b).frobenius_norm() <= tol
    }

    #[test]
    fn rejects_unsupported_dimensions() {
        assert_eq!(SquareMatrix::zeros(4), Err(MatError::BadDimension(4)));
        assert!(matches!(
            SquareMatrix::from_rows(2, &[ONE; 3]),
            Err(MatError::BadLength { expected: 4, got: 3 })
        ));
        assert_eq!(
            SquareMatrix::from_rows(2, &[ONE, ONE, c(f64::NAN, 0.0), ONE]),
            Err(MatError::NonFinite)
        );
    }

    #[test]
    fn defect_of_identity_and_diag() {
        assert_eq!(unitarity_defect(&SquareMatrix::identity(2).unwrap()), 0.0);
        let m = SquareMatrix::from_diag(&[c(2.0, 0.0), ZERO]).unwrap();
        assert!((unitarity_defect(&m) - 10f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn herm_exp_examples() {
        let sx = SquareMatrix::mat2(ZERO, ONE, ONE, ZERO);
        let u = herm_exp(&sx, PI / 2.0).unwrap();
        let expect = SquareMatrix::mat2(ZERO, c(0.0, -1.0), c(0.0, -1.0), ZERO);
        assert!(close(u.matrix(), &expect, 1e-15));

        for dim in [2, 3] {
            let u = herm_exp(&SquareMatrix::zeros(dim).unwrap(), 3.7).unwrap();
            assert!(close(u.matrix(), &SquareMatrix::identity(dim).unwrap(), 0.0));
        }

        let sz = SquareMatrix::from_diag(&[ONE, -ONE]).unwrap();
        let u = herm_exp(&sz, 0.25).unwrap();
        let expect = SquareMatrix::from_diag(&[C64::from_polar(1.0, -0.25), C64::from_polar(1.0, 0.25)]).unwrap();
        assert!(close(u.matrix(), &expect, 1e-15));
    }

    #[test]
    fn herm_exp_rejects_non_hermitian() {
        let m = SquareMatrix::mat2(ZERO, ONE, ZERO, ZERO);
        assert!(matches!(herm_exp(&m, 1.0), Err(MatError::NonHermitianInput { .. })));
    }

    #[test]
    fn herm_exp_dim3_matches_series() {
        // Hermitian 3x3, compare against a scaled-and-squared Taylor series
        let h = SquareMatrix::from_rows(
            3,
            &[
                c(0.3, 0.0), c(0.2, -0.1), c(-0.4, 0.5),
                c(0.2, 0.1), c(-1.1, 0.0), c(0.0, 0.7),
                c(-0.4, -0.5), c(0.0, -0.7), c(0.6, 0.0),
            ],
        )
        .unwrap();
        let s = 1.3;
        let u = herm_exp(&h, s).unwrap();
        let a = h.scale(c(0.0, -s / 1024.0));
        let mut term = SquareMatrix::identity(3).unwrap();
        let mut sum = term;
        for k in 1..30 {
            term = (term * a).scale(c(1.0 / k as f64, 0.0));
            sum = sum + term;
        }
        for _ in 0..10 {
            sum = sum * sum;
        }
        assert!(close(u.matrix(), &sum, 1e-12), "{:?} vs {:?}", u.matrix(), sum);
        assert!(u.defect() < 1e-13);
    }

    #[test]
    fn eigensystem_diagonal() {
        let u = UnitaryOperator::new(
            SquareMatrix::from_diag(&[C64::from_polar(1.0, PI / 3.0), C64::from_polar(1.0, -PI / 3.0)]).unwrap(),
        )
        .unwrap();
        let es = unitary_eigensystem(&u, DEFAULT_MERGE_TOL).unwrap();
        assert_eq!(es.len(), 2);
        assert!((es.phases()[0] + PI / 3.0).abs() < 1e-15);
        assert!((es.phases()[1] - PI / 3.0).abs() < 1e-15);
        assert!(close(&es.projectors()[0], &SquareMatrix::from_diag(&[ZERO, ONE]).unwrap(), 1e-15));
        assert!(close(&es.projectors()[1], &SquareMatrix::from_diag(&[ONE, ZERO]).unwrap(), 1e-15));
    }

    #[test]
    fn eigensystem_merges_full_degeneracy() {
        let u = UnitaryOperator::identity(3).unwrap();
        let es = unitary_eigensystem(&u, DEFAULT_MERGE_TOL).unwrap();
        assert_eq!(es.phases(), &[0.0]);
        assert_eq!(es.multiplicities(), &[3]);
        assert!(close(&es.projectors()[0], &SquareMatrix::identity(3).unwrap(), 1e-15));
    }

    #[test]
    fn eigensystem_merges_across_branch_cut() {
        // e^{i(pi - d)} and e^{i(-pi + d)} are 2d apart on the circle
        let d = 1e-11;
        let u = UnitaryOperator::new(
            SquareMatrix::from_diag(&[C64::from_polar(1.0, PI - d), C64::from_polar(1.0, -PI + d), ONE]).unwrap(),
        )
        .unwrap();
        let es = unitary_eigensystem(&u, DEFAULT_MERGE_TOL).unwrap();
        assert_eq!(es.multiplicities(), &[1, 2]);
        assert!((es.phases()[1] - PI).abs() < 1e-9);
        let es = unitary_eigensystem(&u, 1e-12).unwrap();
        assert_eq!(es.len(), 3);
    }

    #[test]
    fn eigensystem_reconstructs_random_unitaries() {
        let mut rng = StdRng::seed_from_u64(7);
        for dim in [2, 3] {
            for _ in 0..200 {
                let u = random_unitary(dim, &mut rng).unwrap();
                let es = unitary_eigensystem(&u, DEFAULT_MERGE_TOL).unwrap();
                assert!(close(&es.reconstruct(), u.matrix(), 1e-12));
            }
        }
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert!((circular_distance(PI - 0.1, -PI + 0.1) - 0.2).abs() < 1e-12);
    }
}
