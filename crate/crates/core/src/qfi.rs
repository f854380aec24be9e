//! Quantum Fisher information: Hermitian baselines, the non-Hermitian
//! pure- and mixed-state formulas, generator forms, and the uncertainty
//! inequality behind the Cramér–Rao bound.
//!
//! For a raw state |Ψ_θ⟩ = e^{α+iβ}|ψ_θ⟩ the QFI splits into a norm-factor
//! contribution 16e^{2α}(∂_θα)² and a projective contribution
//! 4e^{2α}[⟨∂ψ|∂ψ⟩ − |⟨∂ψ|ψ⟩|²]; every routine here reports both parts.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{DensityFamily, OperatorFamily, StateFamily};
use crate::hilbert::{self, MixedState, DEFAULT_RANK_TOL};
use crate::linalg::{self, CMatrix, CVector};
use crate::oracle;

/// Which pipeline produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfiMethod {
    PureNonHermitian,
    PureHermitian,
    Generator,
    MixedNonHermitian,
    MixedGenerator,
    Oracle,
}

/// QFI value with its norm-factor / projective-state breakdown.
#[derive(Clone, Copy, Debug)]
pub struct QfiReport {
    pub value: f64,
    /// The 16e^{2α}(∂_θα)² contribution (plus ∂p·∂α cross terms for mixed
    /// states).
    pub alpha_term: f64,
    pub projective_term: f64,
    pub method: QfiMethod,
}

impl QfiReport {
    fn new(alpha_term: f64, projective_term: f64, method: QfiMethod) -> Self {
        Self {
            value: alpha_term + projective_term,
            alpha_term,
            projective_term,
            method,
        }
    }
}

/// A parameter generator 𝓗 together with the evolution family it
/// generates, U_θ = exp(iθ𝓗), applied to the initial state `psi0`.
#[derive(Clone)]
pub struct GeneratorContext {
    pub psi0: CVector,
    pub generator: CMatrix,
    pub evolution: OperatorFamily,
}

impl GeneratorContext {
    pub fn new(psi0: CVector, generator: CMatrix, evolution: OperatorFamily) -> Self {
        Self {
            psi0,
            generator,
            evolution,
        }
    }

    /// Context for Schrödinger evolution U_θ = e^{−iHθ}, i.e. 𝓗 = −H.
    pub fn from_hamiltonian(psi0: CVector, h: CMatrix) -> Self {
        let gen = h.map(|z| -z);
        let h_evolve = h.clone();
        let evolution = OperatorFamily::new(move |theta: f64| {
            let a = h_evolve.map(|z| z * Complex64::new(0.0, -theta));
            oracle::expm(&a).expect("finite Hamiltonian exponentiates")
        });
        Self::new(psi0, gen, evolution)
    }

    /// Verifies ∂_θU = i𝓗U at `theta` by finite differences.
    fn check_consistency(&self, theta: f64) -> Result<()> {
        let h = 1e-6 * theta.abs().max(1.0);
        let du = (self.evolution.eval(theta + h) - self.evolution.eval(theta - h))
            .unscale(2.0 * h);
        let expect = (&self.generator * self.evolution.eval(theta)).map(|z| z * Complex64::i());
        let scale = expect.norm().max(1.0);
        let err = (du - expect).norm() / scale;
        if err > 1e-4 {
            return Err(Error::InconsistentContext(format!(
                "evolution family disagrees with generator at theta={theta}: rel err {err:.3e}"
            )));
        }
        Ok(())
    }
}

fn require_unit(psi: &CVector, what: &str) -> Result<()> {
    let n = psi.norm();
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::Precondition(format!(
            "{what} must be unit-norm, got {n}"
        )));
    }
    Ok(())
}

/// Raw-family derivative: analytic when present, otherwise central
/// differences with one Richardson level.
fn raw_derivative(family: &StateFamily, theta: f64, h: f64) -> Result<CVector> {
    if let Some(d) = family.analytic_derivative(theta) {
        return Ok(d);
    }
    let stencil = |step: f64| -> CVector {
        (family.eval(theta + step) - family.eval(theta - step)).unscale(2.0 * step)
    };
    let coarse = stencil(h);
    let fine = stencil(h / 2.0);
    Ok((fine.scale(4.0) - coarse).unscale(3.0))
}

/// QFI for a normalized pure-state family in a Hermitian system:
/// F = 4(⟨∂_θψ|∂_θψ⟩ − |⟨ψ|∂_θψ⟩|²).
pub fn qfi_pure_hermitian(family: &StateFamily, theta: f64, h: f64) -> Result<QfiReport> {
    let psi = family.eval(theta);
    require_unit(&psi, "qfi_pure_hermitian state")?;
    let dpsi = raw_derivative(family, theta, h)?;
    let fs = dpsi.norm_squared() - linalg::inner(&psi, &dpsi).norm_sqr();
    Ok(QfiReport::new(0.0, 4.0 * fs, QfiMethod::PureHermitian))
}

/// Generator form for Hermitian 𝓗: F = 4(⟨𝓗²⟩₀ − ⟨𝓗⟩₀²), independent of θ.
pub fn qfi_generator_hermitian(ctx: &GeneratorContext) -> Result<QfiReport> {
    let defect = linalg::hermiticity_defect(&ctx.generator);
    let scale = ctx.generator.norm().max(1.0);
    if defect > 1e-12 * scale {
        return Err(Error::NonHermitianGenerator { deviation: defect });
    }
    require_unit(&ctx.psi0, "qfi_generator_hermitian initial state")?;
    let g = &ctx.generator;
    let g2 = linalg::expectation(&(g * g), &ctx.psi0).re;
    let g1 = linalg::expectation(g, &ctx.psi0).re;
    Ok(QfiReport::new(0.0, 4.0 * (g2 - g1 * g1), QfiMethod::Generator))
}

/// QFI for a raw (possibly unnormalized) pure-state family:
/// F = 16e^{2α}(∂_θα)² + 4e^{2α}[⟨∂_θψ|∂_θψ⟩ − |⟨∂_θψ|ψ⟩|²].
///
/// Evaluated in the scale- and gauge-invariant form on the raw family:
/// ∂_θα = Re⟨Ψ|∂Ψ⟩/P and the projective bracket equals
/// ⟨∂Ψ|∂Ψ⟩/P − |⟨Ψ|∂Ψ⟩|²/P² with P = ⟨Ψ|Ψ⟩.
pub fn qfi_pure_nonhermitian(family: &StateFamily, theta: f64, h: f64) -> Result<QfiReport> {
    let psi = family.eval(theta);
    let p = psi.norm_squared();
    if p <= 1e-280 {
        return Err(Error::DegenerateState(format!(
            "vanishing norm at theta={theta}"
        )));
    }
    for t in [theta - h, theta + h, theta - h / 2.0, theta + h / 2.0] {
        if family.eval(t).norm_squared() <= 1e-280 {
            return Err(Error::DegenerateState(format!(
                "vanishing norm inside stencil at theta={t}"
            )));
        }
    }
    let dpsi = raw_derivative(family, theta, h)?;
    let overlap = linalg::inner(&psi, &dpsi);
    let dalpha = overlap.re / p;
    let fs = dpsi.norm_squared() / p - overlap.norm_sqr() / (p * p);
    Ok(QfiReport::new(
        16.0 * p * dalpha * dalpha,
        4.0 * p * fs,
        QfiMethod::PureNonHermitian,
    ))
}

/// Generator form for a (possibly non-Hermitian) 𝓗:
/// F = 16e^{2α}(∂_θα)² + 4e^{2α}(⟨𝓗†𝓗⟩_θ − ⟨𝓗†⟩_θ⟨𝓗⟩_θ)
/// with expectations under the normalized evolved state and e^{2α} = P_θ.
pub fn qfi_generator_nonhermitian(ctx: &GeneratorContext, theta: f64) -> Result<QfiReport> {
    require_unit(&ctx.psi0, "qfi_generator_nonhermitian initial state")?;
    ctx.check_consistency(theta)?;
    let evolved = ctx.evolution.eval(theta) * &ctx.psi0;
    let p = evolved.norm_squared();
    if p <= 1e-280 {
        return Err(Error::DegenerateState(format!(
            "vanishing norm at theta={theta}"
        )));
    }
    let h = 1e-5 * theta.abs().max(1.0);
    let log_p = |t: f64| -> f64 { (ctx.evolution.eval(t) * &ctx.psi0).norm_squared().ln() };
    let stencil = |step: f64| (log_p(theta + step) - log_p(theta - step)) / (4.0 * step);
    let dalpha = (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0;

    let psi_norm = evolved.unscale(p.sqrt());
    let g = &ctx.generator;
    let gdg = g.adjoint() * g;
    let var = linalg::expectation(&gdg, &psi_norm).re
        - linalg::expectation(g, &psi_norm).norm_sqr();
    Ok(QfiReport::new(
        16.0 * p * dalpha * dalpha,
        4.0 * p * var,
        QfiMethod::Generator,
    ))
}

/// Stencil decompositions paired and phase-aligned to the center point.
struct AlignedStencil {
    center: MixedState,
    plus: MixedState,
    minus: MixedState,
}

fn align_to_center(center: &MixedState, other: &MixedState) -> Result<MixedState> {
    if other.rank() != center.rank() {
        return Err(Error::DegenerateSpectrum(format!(
            "rank changed across stencil: {} vs {}",
            center.rank(),
            other.rank()
        )));
    }
    let m = center.rank();
    let mut used = vec![false; m];
    let mut probs = vec![0.0; m];
    let mut basis = vec![CVector::zeros(center.ambient_dim); m];
    for (k, ck) in center.basis.iter().enumerate() {
        let mut best = (0usize, 0.0f64);
        for (l, ol) in other.basis.iter().enumerate() {
            if used[l] {
                continue;
            }
            let ov = linalg::inner(ck, ol).norm();
            if ov > best.1 {
                best = (l, ov);
            }
        }
        if best.1 < 0.8 {
            return Err(Error::DegenerateSpectrum(format!(
                "eigenvector pairing failed across stencil (best overlap {:.3})",
                best.1
            )));
        }
        used[best.0] = true;
        probs[k] = other.probs[best.0];
        basis[k] = linalg::align_phase(&other.basis[best.0], ck);
    }
    Ok(MixedState {
        probs,
        basis,
        alpha: other.alpha,
        ambient_dim: other.ambient_dim,
    })
}

fn aligned_stencil(rho_family: &DensityFamily, theta: f64, h: f64) -> Result<AlignedStencil> {
    let center = hilbert::spectral_decompose(&rho_family.eval(theta), DEFAULT_RANK_TOL)?;
    let plus_raw = hilbert::spectral_decompose(&rho_family.eval(theta + h), DEFAULT_RANK_TOL)?;
    let minus_raw = hilbert::spectral_decompose(&rho_family.eval(theta - h), DEFAULT_RANK_TOL)?;
    let plus = align_to_center(&center, &plus_raw)?;
    let minus = align_to_center(&center, &minus_raw)?;
    Ok(AlignedStencil {
        center,
        plus,
        minus,
    })
}

/// Shared assembly of the mixed-state QFI sums from spectral data and its
/// parameter derivatives.
///
/// F = Σ e^{2α}(∂p_k)²/p_k
///   + Σ 4p_k e^{2α}(⟨∂k|∂k⟩ − |⟨∂k|k⟩|²)
///   − Σ_{k≠l} 8e^{2α} p_k p_l/(p_k+p_l) |⟨∂k|l⟩|²
///   + Σ [16 p_k e^{2α}(∂_θα)² + 8 e^{2α} ∂p_k ∂_θα]
fn assemble_mixed(
    probs: &[f64],
    basis: &[CVector],
    dprobs: &[f64],
    dbasis: &[CVector],
    e2a: f64,
    dalpha: f64,
    method: QfiMethod,
) -> QfiReport {
    let m = probs.len();
    let mut classical = 0.0;
    let mut purelike = 0.0;
    let mut coherence = 0.0;
    let mut alpha_term = 0.0;
    for k in 0..m {
        classical += e2a * dprobs[k] * dprobs[k] / probs[k];
        let dk = &dbasis[k];
        purelike += 4.0 * probs[k] * e2a
            * (dk.norm_squared() - linalg::inner(dk, &basis[k]).norm_sqr());
        for l in 0..m {
            if l == k || probs[k] + probs[l] < 1e-12 {
                continue;
            }
            let ov = linalg::inner(dk, &basis[l]).norm_sqr();
            coherence -= 8.0 * e2a * probs[k] * probs[l] / (probs[k] + probs[l]) * ov;
        }
        alpha_term += 16.0 * probs[k] * e2a * dalpha * dalpha
            + 8.0 * e2a * dprobs[k] * dalpha;
    }
    QfiReport::new(alpha_term, classical + purelike + coherence, method)
}

/// Mixed-state QFI of a density-matrix family, all derivatives by central
/// differences with eigenvector gauge alignment across the stencil.
pub fn qfi_mixed_nonhermitian(
    rho_family: &DensityFamily,
    theta: f64,
    h: f64,
) -> Result<QfiReport> {
    let st = aligned_stencil(rho_family, theta, h)?;
    let m = st.center.rank();
    let mut dprobs = Vec::with_capacity(m);
    let mut dbasis = Vec::with_capacity(m);
    for k in 0..m {
        dprobs.push((st.plus.probs[k] - st.minus.probs[k]) / (2.0 * h));
        dbasis.push((&st.plus.basis[k] - &st.minus.basis[k]).unscale(2.0 * h));
    }
    let dalpha = (st.plus.alpha - st.minus.alpha) / (2.0 * h);
    let e2a = (2.0 * st.center.alpha).exp();
    Ok(assemble_mixed(
        &st.center.probs,
        &st.center.basis,
        &dprobs,
        &dbasis,
        e2a,
        dalpha,
        QfiMethod::MixedNonHermitian,
    ))
}

/// Mixed-state generator form: evolves the eigenvectors of ρ₀ with U_θ,
/// normalizes them, and evaluates the generator expectations
///
/// F = Σ 4p_k e^{2α}(⟨k_θ|𝓗†𝓗|k_θ⟩ − |⟨k_θ|𝓗|k_θ⟩|²)
///   − Σ_{k≠l} 8e^{2α} p_k p_l/(p_k+p_l) |⟨k_θ|𝓗†|l_θ⟩|²
///   + Σ 16 p_k e^{2α}(∂_θα)²
///
/// with e^{2α} the evolved trace. Exact when the evolved eigenvectors
/// remain an eigenbasis (unitary evolution, or rank one).
pub fn qfi_mixed_generator(
    rho0: &MixedState,
    ctx: &GeneratorContext,
    theta: f64,
) -> Result<QfiReport> {
    ctx.check_consistency(theta)?;
    let trace_at = |t: f64| -> f64 {
        let u = ctx.evolution.eval(t);
        let e2a0 = (2.0 * rho0.alpha).exp();
        rho0.probs
            .iter()
            .zip(&rho0.basis)
            .map(|(p, k0)| p * (&u * k0).norm_squared())
            .sum::<f64>()
            * e2a0
    };
    let e2a = trace_at(theta);
    if e2a <= 0.0 {
        return Err(Error::DegenerateState("evolved trace vanished".into()));
    }
    let h = 1e-5 * theta.abs().max(1.0);
    let stencil = |step: f64| (trace_at(theta + step).ln() - trace_at(theta - step).ln()) / (4.0 * step);
    let dalpha = (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0;

    let u = ctx.evolution.eval(theta);
    let evolved: Vec<CVector> = rho0
        .basis
        .iter()
        .map(|k0| {
            let v = &u * k0;
            let n = v.norm();
            v.unscale(n)
        })
        .collect();

    let g = &ctx.generator;
    let gd = g.adjoint();
    let gdg = &gd * g;
    let m = rho0.rank();
    let mut purelike = 0.0;
    let mut coherence = 0.0;
    let mut alpha_term = 0.0;
    for k in 0..m {
        let pk = rho0.probs[k];
        let kk = &evolved[k];
        purelike += 4.0 * pk * e2a
            * (linalg::expectation(&gdg, kk).re - linalg::expectation(g, kk).norm_sqr());
        for l in 0..m {
            if l == k || pk + rho0.probs[l] < 1e-12 {
                continue;
            }
            let elem = kk.dotc(&(&gd * &evolved[l])).norm_sqr();
            coherence -= 8.0 * e2a * pk * rho0.probs[l] / (pk + rho0.probs[l]) * elem;
        }
        alpha_term += 16.0 * pk * e2a * dalpha * dalpha;
    }
    Ok(QfiReport::new(
        alpha_term,
        purelike + coherence,
        QfiMethod::MixedGenerator,
    ))
}

/// LHS − RHS of the Robertson–Schrödinger inequality for (possibly
/// non-Hermitian) operators A, B on a unit state; nonnegative up to
/// roundoff.
pub fn robertson_schrodinger_slack(a: &CMatrix, b: &CMatrix, psi: &CVector) -> Result<f64> {
    require_unit(psi, "robertson_schrodinger_slack state")?;
    if a.nrows() != psi.len() || b.nrows() != psi.len() {
        return Err(Error::ShapeMismatch {
            expected: psi.len(),
            got: a.nrows().max(b.nrows()),
        });
    }
    let ea = linalg::expectation(a, psi);
    let eb = linalg::expectation(b, psi);
    let apsi = a * psi;
    let bpsi = b * psi;
    let da2 = apsi.norm_squared() - ea.norm_sqr();
    let db2 = bpsi.norm_squared() - eb.norm_sqr();
    let adb = apsi.dotc(&bpsi); // ⟨A†B⟩
    let centered = adb - ea.conj() * eb;
    Ok(da2 * db2 - centered.re * centered.re - centered.im * centered.im)
}

/// Quantum Cramér–Rao bound δθ² ≥ 1/F.
pub fn cramer_rao_bound(report: &QfiReport) -> Result<f64> {
    if report.value <= 0.0 {
        return Err(Error::UnboundedVariance(report.value));
    }
    Ok(1.0 / report.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cr, cvec, rvec};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn rotation_family() -> StateFamily {
        StateFamily::new(|t: f64| rvec(&[t.cos(), t.sin()]))
    }

    #[test]
    fn pure_hermitian_rotation_gives_four() {
        let r = qfi_pure_hermitian(&rotation_family(), 0.3, 1e-5).unwrap();
        assert_abs_diff_eq!(r.value, 4.0, epsilon = 1e-8);
        assert_eq!(r.alpha_term, 0.0);
    }

    #[test]
    fn pure_hermitian_constant_gives_zero() {
        let fam = StateFamily::new(|_| rvec(&[0.6, 0.8]));
        let r = qfi_pure_hermitian(&fam, 0.1, 1e-5).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pure_hermitian_phase_family_gives_one() {
        // e^{−iθσ_z/2}(1,1)/√2: generator σ_z/2 has variance 1/4 on |+⟩
        let fam = StateFamily::new(|t: f64| {
            cvec(&[
                Complex64::from_polar(FRAC_1_SQRT_2, -t / 2.0),
                Complex64::from_polar(FRAC_1_SQRT_2, t / 2.0),
            ])
        });
        let r = qfi_pure_hermitian(&fam, 0.4, 1e-5).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn pure_hermitian_rejects_unnormalized() {
        let fam = StateFamily::new(|_| rvec(&[2.0, 0.0]));
        assert!(matches!(
            qfi_pure_hermitian(&fam, 0.0, 1e-5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn generator_hermitian_eigenstate_zero_variance() {
        let ctx = GeneratorContext::from_hamiltonian(rvec(&[1.0, 0.0]), linalg::sigma_z());
        // from_hamiltonian negates; variance is sign-invariant
        let r = qfi_generator_hermitian(&ctx).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn generator_hermitian_max_variance() {
        let plus = rvec(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let ctx = GeneratorContext::from_hamiltonian(plus, linalg::sigma_z());
        let r = qfi_generator_hermitian(&ctx).unwrap();
        assert_abs_diff_eq!(r.value, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn generator_hermitian_sigma_x_on_circular() {
        let psi = cvec(&[cr(FRAC_1_SQRT_2), c(0.0, FRAC_1_SQRT_2)]);
        let ctx = GeneratorContext::from_hamiltonian(psi, linalg::sigma_x());
        let r = qfi_generator_hermitian(&ctx).unwrap();
        assert_abs_diff_eq!(r.value, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn generator_hermitian_redirects_non_hermitian() {
        let g = linalg::cmat(2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        let ctx = GeneratorContext::new(
            rvec(&[1.0, 0.0]),
            g,
            OperatorFamily::new(|_| linalg::identity(2)),
        );
        assert!(matches!(
            qfi_generator_hermitian(&ctx),
            Err(Error::NonHermitianGenerator { .. })
        ));
    }

    #[test]
    fn pure_nonhermitian_reduces_to_hermitian() {
        let fam = rotation_family();
        let nh = qfi_pure_nonhermitian(&fam, 0.7, 1e-5).unwrap();
        let h = qfi_pure_hermitian(&fam, 0.7, 1e-5).unwrap();
        assert_abs_diff_eq!(nh.value, h.value, epsilon = 1e-8);
        assert!(nh.alpha_term.abs() < 1e-9);
    }

    #[test]
    fn pure_nonhermitian_exponential_growth() {
        let fam = StateFamily::new(|t: f64| rvec(&[t.exp(), 0.0]));
        let theta = 0.3;
        let r = qfi_pure_nonhermitian(&fam, theta, 1e-5).unwrap();
        assert_abs_diff_eq!(
            r.value,
            16.0 * (2.0 * theta).exp(),
            epsilon = 1e-6 * 16.0 * (2.0 * theta).exp()
        );
        assert!(r.projective_term.abs() < 1e-8);
    }

    #[test]
    fn pure_nonhermitian_rejects_zero_norm() {
        let fam = StateFamily::new(|t: f64| rvec(&[t, 0.0]));
        assert!(matches!(
            qfi_pure_nonhermitian(&fam, 0.0, 1e-5),
            Err(Error::DegenerateState(_))
        ));
    }

    #[test]
    fn generator_nonhermitian_reduces_to_hermitian() {
        let plus = rvec(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let ctx = GeneratorContext::from_hamiltonian(plus, linalg::sigma_z());
        let nh = qfi_generator_nonhermitian(&ctx, 0.8).unwrap();
        let h = qfi_generator_hermitian(&ctx).unwrap();
        assert_abs_diff_eq!(nh.value, h.value, epsilon = 1e-8);
    }

    #[test]
    fn generator_nonhermitian_eigenstate_gives_zero() {
        let ctx = GeneratorContext::from_hamiltonian(rvec(&[1.0, 0.0]), linalg::sigma_z());
        let r = qfi_generator_nonhermitian(&ctx, 0.5).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn generator_nonhermitian_detects_inconsistent_family() {
        let ctx = GeneratorContext::new(
            rvec(&[1.0, 0.0]),
            linalg::sigma_z(),
            OperatorFamily::new(|_| linalg::identity(2)),
        );
        assert!(matches!(
            qfi_generator_nonhermitian(&ctx, 0.5),
            Err(Error::InconsistentContext(_))
        ));
    }

    #[test]
    fn mixed_rank_one_collapses_to_pure() {
        let fam = StateFamily::new(|t: f64| {
            cvec(&[cr((0.9 * t).cos()), cr((0.9 * t).sin())]).scale((0.3 * t).exp())
        });
        let rho_fam = DensityFamily::from_pure(fam.clone());
        let mixed = qfi_mixed_nonhermitian(&rho_fam, 0.4, 1e-5).unwrap();
        let pure = qfi_pure_nonhermitian(&fam, 0.4, 1e-5).unwrap();
        assert!((mixed.value - pure.value).abs() / pure.value.abs() < 1e-7);
    }

    #[test]
    fn mixed_constant_family_gives_zero() {
        let rho_fam = DensityFamily::new(|_| linalg::identity(2).scale(0.5));
        let r = qfi_mixed_nonhermitian(&rho_fam, 0.3, 1e-5).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn mixed_classical_coin() {
        let rho_fam = DensityFamily::new(|t: f64| {
            linalg::cmat(2, &[cr(t), cr(0.0), cr(0.0), cr(1.0 - t)])
        });
        let r = qfi_mixed_nonhermitian(&rho_fam, 0.3, 1e-5).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 / 0.21, epsilon = 1e-8);
    }

    #[test]
    fn mixed_generator_rank_one_hermitian() {
        let plus = rvec(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let ctx = GeneratorContext::from_hamiltonian(plus.clone(), linalg::sigma_z());
        let rho0 = MixedState::pure(&plus);
        let r = qfi_mixed_generator(&rho0, &ctx, 0.6).unwrap();
        assert_abs_diff_eq!(r.value, 4.0, epsilon = 1e-8);
    }

    #[test]
    fn mixed_generator_maximally_mixed_is_invariant() {
        let rho0 = hilbert::spectral_decompose(&linalg::identity(2).scale(0.5), 1e-10).unwrap();
        let ctx = GeneratorContext::from_hamiltonian(rvec(&[1.0, 0.0]), linalg::sigma_x());
        let r = qfi_mixed_generator(&rho0, &ctx, 0.4).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn slack_nonnegative_for_equal_operators() {
        let a = linalg::cmat(2, &[cr(0.1), c(0.3, 0.2), cr(0.7), c(-0.4, 0.1)]);
        let psi = rvec(&[0.6, 0.8]);
        let s = robertson_schrodinger_slack(&a, &a, &psi).unwrap();
        assert!(s >= -1e-10);
    }

    #[test]
    fn slack_zero_for_joint_eigenstate() {
        let a = linalg::sigma_z();
        let b = linalg::sigma_z().scale(2.0);
        let psi = rvec(&[1.0, 0.0]);
        let s = robertson_schrodinger_slack(&a, &b, &psi).unwrap();
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cramer_rao_reciprocal() {
        let r = QfiReport::new(0.0, 4.0, QfiMethod::PureHermitian);
        assert_abs_diff_eq!(cramer_rao_bound(&r).unwrap(), 0.25, epsilon = 1e-15);
        let r1 = QfiReport::new(0.0, 1.0, QfiMethod::PureHermitian);
        assert_abs_diff_eq!(cramer_rao_bound(&r1).unwrap(), 1.0, epsilon = 1e-15);
        let bad = QfiReport::new(0.0, 0.0, QfiMethod::PureHermitian);
        assert!(matches!(
            cramer_rao_bound(&bad),
            Err(Error::UnboundedVariance(_))
        ));
    }
}
