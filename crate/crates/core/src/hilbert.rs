//! Projective-Hilbert-space bookkeeping: the norm/phase split of a raw
//! state, the inner-product factor, and spectral data for mixed states.
//!
//! A raw state decomposes as |Ψ⟩ = e^{α+iβ}|ψ⟩ with ‖ψ‖ = 1. The gauge for
//! β is fixed by making the first component of ψ whose magnitude exceeds
//! `GAUGE_COMPONENT_TOL` real and positive, so the decomposition is
//! deterministic.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Magnitude threshold for picking the gauge-fixing component.
pub const GAUGE_COMPONENT_TOL: f64 = 1e-8;

/// Default relative threshold for truncating the numerical rank of a
/// density matrix.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// The (α, β, |ψ⟩) split of a raw state.
#[derive(Clone, Debug)]
pub struct ProjectiveDecomposition {
    /// Log-amplitude, α = ln ‖Ψ‖.
    pub alpha: f64,
    /// Global phase in (−π, π].
    pub beta: f64,
    /// Unit-norm, gauge-fixed representative.
    pub psi: CVector,
}

impl ProjectiveDecomposition {
    /// e^{α+iβ}|ψ⟩, which reproduces the source vector.
    pub fn reconstruct(&self) -> CVector {
        let factor = Complex64::from_polar(self.alpha.exp(), self.beta);
        self.psi.map(|z| z * factor)
    }
}

/// Split |Ψ⟩ = e^{α+iβ}|ψ⟩.
pub fn decompose(psi_raw: &CVector) -> Result<ProjectiveDecomposition> {
    if !linalg::all_finite_vec(psi_raw) {
        return Err(Error::NonFinite("decompose input".into()));
    }
    let nrm = psi_raw.norm();
    if nrm <= 0.0 || !nrm.is_finite() {
        return Err(Error::DegenerateState("zero-norm state".into()));
    }
    let unit = psi_raw.unscale(nrm);
    let pivot = unit
        .iter()
        .find(|z| z.norm() > GAUGE_COMPONENT_TOL)
        .copied()
        .unwrap_or_else(|| unit[unit.iter().map(|z| z.norm()).enumerate().fold((0, 0.0), |acc, (i, n)| if n > acc.1 { (i, n) } else { acc }).0]);
    let mut beta = pivot.arg();
    // map -pi to +pi so beta lies in (-pi, pi]
    if beta <= -std::f64::consts::PI {
        beta = std::f64::consts::PI;
    }
    let phase = Complex64::from_polar(1.0, -beta);
    Ok(ProjectiveDecomposition {
        alpha: nrm.ln(),
        beta,
        psi: unit.map(|z| z * phase),
    })
}

/// P_θ = ⟨ψ₀|U†U|ψ₀⟩, the squared norm of the evolved state.
pub fn inner_product_factor(psi0: &CVector, u: &CMatrix) -> Result<f64> {
    let n = psi0.norm();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::Precondition(format!(
            "inner_product_factor requires a unit state, got norm {n}"
        )));
    }
    if u.nrows() != psi0.len() {
        return Err(Error::ShapeMismatch {
            expected: psi0.len(),
            got: u.nrows(),
        });
    }
    let evolved = u * psi0;
    Ok(evolved.norm_squared())
}

/// Instantaneous rates (α̇, β̇) of the norm and phase of a projective state.
///
/// α̇ = −(i/2)⟨ψ|(H−H†)|ψ⟩ and β̇ = −(1/2)⟨ψ|(H+H†)|ψ⟩ + i⟨ψ|ψ̇⟩. Only α̇
/// feeds any Fisher-information quantity; β̇ is exposed for completeness.
pub fn alpha_beta_rates(psi: &CVector, h: &CMatrix, dpsi_dt: &CVector) -> Result<(f64, f64)> {
    if h.nrows() != psi.len() {
        return Err(Error::ShapeMismatch {
            expected: psi.len(),
            got: h.nrows(),
        });
    }
    let n = psi.norm();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::Precondition(format!(
            "alpha_beta_rates requires a unit state, got norm {n}"
        )));
    }
    let hd = h.adjoint();
    let anti = h - &hd;
    let sym = h + &hd;
    let alpha_dot = (linalg::expectation(&anti, psi) * Complex64::new(0.0, -0.5)).re;
    let beta_dot =
        -0.5 * linalg::expectation(&sym, psi).re + (Complex64::new(0.0, 1.0) * psi.dotc(dpsi_dt)).re;
    Ok((alpha_dot, beta_dot))
}

/// Spectral data of a (possibly unnormalized) density matrix: normalized
/// probabilities plus the global norm factor e^{2α} = tr ρ.
#[derive(Clone, Debug)]
pub struct MixedState {
    /// Normalized probabilities, Σ p_k = 1, sorted descending.
    pub probs: Vec<f64>,
    /// Orthonormal eigenvectors matching `probs`.
    pub basis: Vec<CVector>,
    /// ½ ln tr ρ.
    pub alpha: f64,
    pub ambient_dim: usize,
}

impl MixedState {
    pub fn rank(&self) -> usize {
        self.probs.len()
    }

    /// e^{2α} Σ p_k |k⟩⟨k|.
    pub fn reassemble(&self) -> CMatrix {
        let scale = (2.0 * self.alpha).exp();
        let mut rho = CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for (p, k) in self.probs.iter().zip(&self.basis) {
            rho += linalg::outer(k, k).scale(p * scale);
        }
        rho
    }

    /// Rank-1 state from a unit vector (α = 0).
    pub fn pure(psi: &CVector) -> Self {
        Self {
            probs: vec![1.0],
            basis: vec![psi.clone()],
            alpha: 0.0,
            ambient_dim: psi.len(),
        }
    }
}

/// Eigendecompose a Hermitian PSD matrix into a `MixedState`, truncating
/// relative eigenvalues at `rank_tol`.
pub fn spectral_decompose(rho: &CMatrix, rank_tol: f64) -> Result<MixedState> {
    let defect = linalg::hermiticity_defect(rho);
    if defect > 1e-10 {
        return Err(Error::Precondition(format!(
            "density matrix not Hermitian (defect {defect:.3e})"
        )));
    }
    let (vals, vecs) = linalg::hermitian_eigen(rho)?;
    let trace: f64 = vals.iter().sum();
    if trace <= 0.0 {
        return Err(Error::NotAState("non-positive trace".into()));
    }
    if let Some(&min) = vals.iter().min_by(|a, b| a.partial_cmp(b).unwrap()) {
        if min < -1e-8 * trace.max(1.0) {
            return Err(Error::NotAState(format!("negative eigenvalue {min:.3e}")));
        }
    }
    let mut probs = Vec::new();
    let mut basis = Vec::new();
    for (val, vec) in vals.iter().zip(vecs) {
        let p = val / trace;
        if p > rank_tol {
            probs.push(p);
            basis.push(vec);
        }
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    Ok(MixedState {
        probs,
        basis,
        alpha: 0.5 * trace.ln(),
        ambient_dim: rho.nrows(),
    })
}
