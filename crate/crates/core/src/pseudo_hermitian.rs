//! Single-qubit pseudo-Hermitian sensor and its Naimark dilation.
//!
//! The working parameter is the dimensionless x = λ/(εω); all closed forms
//! differentiate with respect to x, converting λ-derivatives with the chain
//! rule factor εω.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::StateFamily;
use crate::linalg::{self, cr, CMatrix, CVector};
use crate::qfi;
use crate::sweep::{linspace, relative_residual, SweepRecord};

/// How the biorthogonal scale n varies with the parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NMode {
    /// Fixed n, ∂n = 0 (the plotted n = 1/2, √2/2, 1 curves).
    Constant(f64),
    /// n(x) = 1/√(1+δ_λ²), keeping ‖R‖ = 1.
    Normalized,
}

impl NMode {
    pub fn label(&self) -> String {
        match self {
            NMode::Constant(n) => format!("n={n}"),
            NMode::Normalized => "normalized".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PseudoQubitParams {
    pub epsilon: f64,
    pub omega: f64,
    pub lam: f64,
    pub n_mode: NMode,
}

impl PseudoQubitParams {
    pub fn new(epsilon: f64, omega: f64, lam: f64, n_mode: NMode) -> Result<Self> {
        if !(epsilon > 0.0) || !(omega > 0.0) || !lam.is_finite() {
            return Err(Error::Precondition(format!(
                "pseudo-Hermitian parameters need epsilon>0, omega>0, finite lambda; got \
                 epsilon={epsilon}, omega={omega}, lambda={lam}"
            )));
        }
        Ok(Self {
            epsilon,
            omega,
            lam,
            n_mode,
        })
    }

    /// Same system at λ = x·εω.
    pub fn at_x(&self, x: f64) -> Self {
        Self {
            lam: x * self.epsilon * self.omega,
            ..*self
        }
    }

    pub fn x(&self) -> f64 {
        self.lam / (self.epsilon * self.omega)
    }

    pub fn b(&self) -> f64 {
        4.0 * self.omega * self.epsilon * (1.0 + self.epsilon) / (1.0 + 2.0 * self.epsilon)
    }

    pub fn c(&self) -> f64 {
        2.0 * self.omega * (self.epsilon * (1.0 + self.epsilon)).sqrt()
            / (1.0 + 2.0 * self.epsilon)
    }

    pub fn eps_lambda(&self) -> f64 {
        let bl = self.b() + self.lam;
        (bl * bl + self.c() * self.c()).sqrt()
    }

    pub fn delta_lambda(&self) -> f64 {
        (self.lam + 2.0 * self.epsilon * self.omega) / self.eps_lambda()
    }

    /// g = ∂_x δ_λ = εω/ε_λ − εω δ_λ(b+λ)/ε_λ².
    pub fn g(&self) -> f64 {
        let ew = self.epsilon * self.omega;
        let el = self.eps_lambda();
        ew / el - ew * self.delta_lambda() * (self.b() + self.lam) / (el * el)
    }

    /// (n, ∂_x n) for the active mode.
    pub fn n_and_dn(&self) -> (f64, f64) {
        match self.n_mode {
            NMode::Constant(n) => (n, 0.0),
            NMode::Normalized => {
                let d = self.delta_lambda();
                let w = 1.0 + d * d;
                (1.0 / w.sqrt(), -d * self.g() / w.powf(1.5))
            }
        }
    }
}

const DELTA_TOL: f64 = 1e-12;

/// Ĥ_s = ε_λ [[0, δ_λ⁻¹], [δ_λ, 0]].
pub fn reduced_hamiltonian(p: &PseudoQubitParams) -> Result<CMatrix> {
    let d = p.delta_lambda();
    if d.abs() < DELTA_TOL {
        return Err(Error::SingularDelta);
    }
    let el = p.eps_lambda();
    Ok(linalg::cmat(
        2,
        &[cr(0.0), cr(el / d), cr(el * d), cr(0.0)],
    ))
}

/// Ĥ_tot = b Î⊗σ_x − c σ_y⊗σ_y + λ Î⊗σ_x on the ancilla ⊗ system space.
pub fn dilated_hamiltonian(p: &PseudoQubitParams) -> CMatrix {
    let id = linalg::identity(2);
    let sx = linalg::sigma_x();
    let sy = linalg::sigma_y();
    linalg::kron(&id, &sx).scale(p.b() + p.lam) - linalg::kron(&sy, &sy).scale(p.c())
}

/// Biorthonormal pair for the +ε_λ eigenvalue:
/// |R⟩ = n(1, δ_λ)ᵀ and |L⟩ = (1/2n)(1, δ_λ⁻¹)ᵀ, with ⟨L|R⟩ = 1.
pub fn right_left_eigenstates(
    p: &PseudoQubitParams,
    n: f64,
) -> Result<(CVector, CVector)> {
    let d = p.delta_lambda();
    if n.abs() < DELTA_TOL || d.abs() < DELTA_TOL {
        return Err(Error::DegenerateState(format!(
            "right/left eigenstates need n≠0 and delta≠0, got n={n}, delta={d}"
        )));
    }
    let right = linalg::rvec(&[n, n * d]);
    let left = linalg::rvec(&[1.0 / (2.0 * n), 1.0 / (2.0 * n * d)]);
    Ok((right, left))
}

/// Closed-form QFI of |R_n(x)⟩:
/// F_x(n) = 4n²g²(4δ²+1)/(δ²+1) + 32 n g δ ∂n + 16(1+δ²)(∂n)²,
/// which for the normalized mode collapses to 4g²/(1+δ²)².
pub fn qfi_fx(p: &PseudoQubitParams, x: f64) -> f64 {
    let q = p.at_x(x);
    let d = q.delta_lambda();
    let g = q.g();
    let (n, dn) = q.n_and_dn();
    let w = 1.0 + d * d;
    4.0 * n * n * g * g * (4.0 * d * d + 1.0) / w
        + 32.0 * n * g * d * dn
        + 16.0 * w * dn * dn
}

/// QFI of the dilated eigenstate ψ₂(x): F_x^d = 2c²(εω)²/ε_λ⁴.
///
/// The (εω)² is the chain-rule factor taking the λ-derivative to the
/// dimensionless x used everywhere else; at εω = 1 this is the bare 2c²/ε_λ⁴.
pub fn qfi_fxd(p: &PseudoQubitParams, x: f64) -> f64 {
    let q = p.at_x(x);
    let el = q.eps_lambda();
    let ew = q.epsilon * q.omega;
    2.0 * q.c() * q.c() * ew * ew / el.powi(4)
}

/// x ↦ |R_n(x)⟩ = n(x)·(1, δ_λ(x))ᵀ, the raw input to the generic
/// non-Hermitian pipeline.
pub fn right_state_family(p: &PseudoQubitParams) -> StateFamily {
    let base = *p;
    StateFamily::new(move |x: f64| {
        let q = base.at_x(x);
        let (n, _) = q.n_and_dn();
        linalg::rvec(&[n, n * q.delta_lambda()])
    })
}

/// x ↦ ψ₂(x) = (0, 1, c/ε_λ, (b+λ)/ε_λ)ᵀ/√2, the dilated eigenstate family.
pub fn psi2_family(p: &PseudoQubitParams) -> StateFamily {
    let base = *p;
    StateFamily::new(move |x: f64| {
        let q = base.at_x(x);
        let el = q.eps_lambda();
        linalg::rvec(&[0.0, 1.0, q.c() / el, (q.b() + q.lam) / el])
            .scale(std::f64::consts::FRAC_1_SQRT_2)
    })
}

/// Recovers a positive Hermitian S with S H = H† S (so H is S-pseudo-
/// Hermitian), scaled such that S − I is positive definite, and returns
/// η = √(S − I). The defining relation (η²+I)H = H†(η²+I) then holds.
pub fn recover_metric(h: &CMatrix) -> Result<CMatrix> {
    let n = h.nrows();
    // Real parameterization of Hermitian S: diagonal entries, then
    // (re, im) of each strictly-upper entry.
    let n_params = n + n * (n - 1);
    let from_params = |p: &DVector<f64>| -> CMatrix {
        let mut s = CMatrix::zeros(n, n);
        for i in 0..n {
            s[(i, i)] = cr(p[i]);
        }
        let mut k = n;
        for i in 0..n {
            for j in (i + 1)..n {
                let z = Complex64::new(p[k], p[k + 1]);
                s[(i, j)] = z;
                s[(j, i)] = z.conj();
                k += 2;
            }
        }
        s
    };
    // Rows of the constraint S H − H† S = 0, real and imaginary parts split.
    let mut rows = Vec::with_capacity(2 * n * n);
    for col in 0..n_params {
        let mut unit = DVector::zeros(n_params);
        unit[col] = 1.0;
        let s = from_params(&unit);
        let resid = &s * h - h.adjoint() * &s;
        let mut flat = Vec::with_capacity(2 * n * n);
        for z in resid.iter() {
            flat.push(z.re);
            flat.push(z.im);
        }
        rows.push(flat);
    }
    let mut constraint = DMatrix::zeros(2 * n * n, n_params);
    for (col, flat) in rows.iter().enumerate() {
        for (row, v) in flat.iter().enumerate() {
            constraint[(row, col)] = *v;
        }
    }
    let svd = constraint.svd(true, true);
    let vt = svd.v_t.as_ref().expect("svd requested v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let null_cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= 1e-10 * smax.max(1.0))
        .collect();
    if null_cols.is_empty() {
        return Err(Error::Precondition(
            "matrix is not pseudo-Hermitian: no Hermitian intertwiner exists".into(),
        ));
    }
    // Among all solutions pick the one closest to the identity; that keeps
    // S positive definite whenever any positive solution exists nearby.
    let target = {
        let mut p = DVector::zeros(n_params);
        for i in 0..n {
            p[i] = 1.0;
        }
        p
    };
    let mut combo = DVector::zeros(n_params);
    for &ci in &null_cols {
        let basis = vt.row(ci).transpose();
        let weight = basis.dot(&target);
        combo += basis * weight;
    }
    let mut s = from_params(&combo);
    let (vals, _) = linalg::hermitian_eigen(&s)?;
    let min = vals.last().copied().unwrap_or(0.0);
    let max = vals.first().copied().unwrap_or(0.0);
    if min < 0.0 && max <= 0.0 {
        s = s.map(|z| -z);
    } else if min <= 1e-12 * max.abs().max(1.0) {
        return Err(Error::Precondition(
            "pseudo-Hermitian intertwiner is not sign-definite".into(),
        ));
    }
    let (vals, vecs) = linalg::hermitian_eigen(&s)?;
    let min = *vals.last().expect("nonempty spectrum");
    // Rescale so the smallest eigenvalue of S is 2; then S − I ≻ 0 and
    // η = √(S − I) is well defined.
    let scale = 2.0 / min;
    let mut eta = CMatrix::zeros(n, n);
    for (val, vec) in vals.iter().zip(&vecs) {
        eta += linalg::outer(vec, vec).scale((scale * val - 1.0).sqrt());
    }
    Ok(eta)
}

/// ‖(η²+I)H_s − H_s†(η²+I)‖ for the recovered metric.
pub fn pseudo_hermiticity_defect(p: &PseudoQubitParams) -> Result<f64> {
    let h = reduced_hamiltonian(p)?;
    let eta = recover_metric(&h)?;
    let s = &eta * &eta + linalg::identity(2);
    Ok(linalg::frobenius_distance(&(&s * &h), &(h.adjoint() * &s)))
}

/// Default Fig. 1 abscissa: x ∈ [0, 2], 401 points.
///
/// On x < 0 the normalized-mode QFI overtakes F_x^d near the point where
/// δ_λ crosses zero (for ε = 1, ω = 1 the curves cross at x ≈ −0.279 and
/// F_x peaks at 3·F_x^d by x = −2), so the dilated-dominance property that
/// the comparison is about only holds to the right of the crossing. The
/// default grid stays inside that region; sweeps over other ranges are
/// available through the range arguments.
pub fn fig1_grid() -> Vec<f64> {
    linspace(0.0, 2.0, 401)
}

const FIG1_CONSTANT_N: [f64; 3] = [0.5, std::f64::consts::FRAC_1_SQRT_2, 1.0];

/// The Fig. 1 comparison: for each ε, the three constant-n curves, the
/// normalized-mode curve, and the dilated-system curve, each with its
/// generic-pipeline cross-check.
pub fn fig1_sweep(
    epsilons: &[f64],
    omega: f64,
    x_grid: &[f64],
) -> Result<Vec<SweepRecord>> {
    if x_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut rows = Vec::new();
    for &eps in epsilons {
        let mut curves: Vec<(String, PseudoQubitParams, bool)> = Vec::new();
        for n in FIG1_CONSTANT_N {
            let p = PseudoQubitParams::new(eps, omega, 0.0, NMode::Constant(n))?;
            curves.push((p.n_mode.label(), p, false));
        }
        let pn = PseudoQubitParams::new(eps, omega, 0.0, NMode::Normalized)?;
        curves.push(("normalized".into(), pn, false));
        curves.push(("dilated".into(), pn, true));
        for (label, p, dilated) in &curves {
            let family = if *dilated {
                psi2_family(p)
            } else {
                right_state_family(p)
            };
            for &x in x_grid {
                let h = 1e-5 * x.abs().max(1.0);
                let (closed, generic) = if *dilated {
                    (qfi_fxd(p, x), qfi::qfi_pure_hermitian(&family, x, h)?.value)
                } else {
                    (qfi_fx(p, x), qfi::qfi_pure_nonhermitian(&family, x, h)?.value)
                };
                let mut rec = SweepRecord::empty("pseudo", x);
                rec.n_label = Some(label.clone());
                rec.epsilon = Some(eps);
                rec.omega = Some(omega);
                rec.f_generic = Some(generic);
                rec.f_closed_form = Some(closed);
                rec.residual = Some(relative_residual(closed, generic));
                rows.push(rec);
            }
        }
    }
    Ok(rows)
}
