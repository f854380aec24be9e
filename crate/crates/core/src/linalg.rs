//! Dense complex linear-algebra carriers and small helpers.
//!
//! Everything in the model lives in dimension <= 8, so all storage is dense
//! and owned. States are `CVector`, operators are `CMatrix`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Build a vector from complex entries.
pub fn cvec(entries: &[Complex64]) -> CVector {
    CVector::from_column_slice(entries)
}

/// Build a vector from real entries.
pub fn rvec(entries: &[f64]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&x| cr(x)))
}

/// Build a square matrix from row-major complex entries.
pub fn cmat(dim: usize, entries: &[Complex64]) -> CMatrix {
    CMatrix::from_row_slice(dim, dim, entries)
}

/// ⟨a|b⟩ with the physics convention (conjugate-linear in the first slot).
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.dotc(b)
}

pub fn norm(v: &CVector) -> f64 {
    v.norm()
}

/// ⟨psi|M|psi⟩.
pub fn expectation(m: &CMatrix, psi: &CVector) -> Complex64 {
    psi.dotc(&(m * psi))
}

/// |a⟩⟨b|.
pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn all_finite_vec(v: &CVector) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn all_finite_mat(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Maximum entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

pub fn trace_re(m: &CMatrix) -> f64 {
    m.trace().re
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// The input is symmetrized first so callers may pass matrices that are
/// Hermitian only up to roundoff.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, Vec<CVector>)> {
    if !all_finite_mat(m) {
        return Err(Error::NonFinite("hermitian_eigen input".into()));
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = idx
        .iter()
        .map(|&k| CVector::from(eig.eigenvectors.column(k).into_owned()))
        .collect();
    Ok((vals, vecs))
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn sigma_x() -> CMatrix {
    cmat(2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
}

pub fn sigma_y() -> CMatrix {
    cmat(2, &[cr(0.0), -I, I, cr(0.0)])
}

pub fn sigma_z() -> CMatrix {
    cmat(2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
}

/// Rotate `v` by the global phase that makes ⟨anchor|v⟩ real and positive.
///
/// Used to keep finite-difference stencil points on the same smooth gauge
/// branch as the center point.
pub fn align_phase(v: &CVector, anchor: &CVector) -> CVector {
    let ov = inner(anchor, v);
    if ov.norm() < 1e-14 {
        return v.clone();
    }
    let phase = ov / ov.norm();
    v.map(|z| z * phase.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hermitian_eigen_sorts_descending() {
        let m = cmat(2, &[cr(1.0), I, -I, cr(3.0)]);
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        assert!(vals[0] >= vals[1]);
        // residual of the eigen-equation
        for (v, val) in vecs.iter().zip(&vals) {
            let r = &m * v - v.scale(*val);
            assert!(r.norm() < 1e-12);
        }
        assert_abs_diff_eq!(vals[0] + vals[1], 4.0, epsilon = 1e-12);
    }

    #[test]
    fn pauli_algebra() {
        let xy = sigma_x() * sigma_y();
        let expect = sigma_z().map(|z| z * I);
        assert!(frobenius_distance(&xy, &expect) < 1e-15);
    }

    #[test]
    fn align_phase_makes_overlap_real() {
        let a = cvec(&[cr(1.0), cr(0.0)]);
        let v = cvec(&[c(0.0, 0.7), c(0.3, 0.1)]);
        let w = align_phase(&v, &a);
        let ov = inner(&a, &w);
        assert!(ov.im.abs() < 1e-14 && ov.re > 0.0);
    }
}
