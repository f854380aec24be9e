//! PT-symmetric qubit: regime classification, closed-form evolution, QFI in
//! both regimes, the exceptional point, and the optimal-initial-state search.
//!
//! The authoritative QFI always comes from the generic non-Hermitian
//! pipeline (expm evolution + the 16e^{2α}(∂α)² + 4e^{2α}Var split). The
//! printed closed forms are evaluated verbatim and reported side by side;
//! see `PtQfi::difference`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, cr, CMatrix, CVector};
use crate::oracle;
use crate::qfi::{QfiMethod, QfiReport};
use crate::sweep::{linspace, relative_residual, SweepRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Unbroken,
    Broken,
    ExceptionalPoint,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Unbroken => "unbroken",
            Regime::Broken => "broken",
            Regime::ExceptionalPoint => "ep",
        }
    }
}

const REGIME_TOL: f64 = 1e-12;
const COS_X_TOL: f64 = 1e-8;
/// e^{4κθ} past this is no longer trustworthy in double precision.
const OVERFLOW_LIMIT: f64 = 1e300;

#[derive(Clone, Copy, Debug)]
pub struct PtParams {
    pub r: f64,
    pub s: f64,
    pub omega: f64,
}

impl PtParams {
    pub fn new(r: f64, s: f64, omega: f64) -> Result<Self> {
        if !(r >= 0.0) || !(s > 0.0) || !omega.is_finite() {
            return Err(Error::Precondition(format!(
                "PT parameters need r>=0, s>0, finite omega; got r={r}, s={s}, omega={omega}"
            )));
        }
        Ok(Self { r, s, omega })
    }

    /// s² − r²sin²ω: positive in the unbroken regime, negative when broken.
    pub fn discriminant(&self) -> f64 {
        self.s * self.s - self.r * self.r * self.omega.sin().powi(2)
    }

    pub fn regime(&self) -> Regime {
        let d = self.discriminant();
        if d.abs() <= REGIME_TOL {
            Regime::ExceptionalPoint
        } else if d > 0.0 {
            Regime::Unbroken
        } else {
            Regime::Broken
        }
    }

    /// H_s = [[re^{iω}, s], [s, re^{−iω}]].
    pub fn hamiltonian(&self) -> CMatrix {
        let z = Complex64::from_polar(self.r, self.omega);
        linalg::cmat(2, &[z, cr(self.s), cr(self.s), z.conj()])
    }

    fn require(&self, want: Regime, what: &str) -> Result<()> {
        let got = self.regime();
        if got != want {
            return Err(Error::RegimeError(format!(
                "{what} needs the {} regime, parameters are {} (s²−r²sin²ω = {:.3e})",
                want.label(),
                got.label(),
                self.discriminant()
            )));
        }
        Ok(())
    }
}

/// Superposition weight and relative phase of |ψ₀⟩ = N(|+⟩ + m e^{iφ}|−⟩).
#[derive(Clone, Copy, Debug)]
pub struct PtInitialState {
    pub m: f64,
    pub phi: f64,
}

impl PtInitialState {
    pub fn new(m: f64, phi: f64) -> Result<Self> {
        if !(m >= 0.0) || !phi.is_finite() {
            return Err(Error::Precondition(format!(
                "initial state needs m>=0 and finite phi; got m={m}, phi={phi}"
            )));
        }
        Ok(Self { m, phi })
    }
}

#[derive(Clone, Debug)]
pub struct UnbrokenEigensystem {
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub state_plus: CVector,
    pub state_minus: CVector,
    /// sin x = (r/s) sin ω, with cos x ≥ 0.
    pub x: f64,
}

#[derive(Clone, Debug)]
pub struct BrokenEigensystem {
    pub lam_plus: Complex64,
    pub lam_minus: Complex64,
    pub state_plus: CVector,
    pub state_minus: CVector,
    /// κ = √(r²sin²ω − s²); λ₊ carries +iκ (the growth mode).
    pub kappa: f64,
    /// Overlap ⟨λ₊|λ₋⟩ = s/(r sin ω).
    pub mu: f64,
}

pub fn eigensystem_unbroken(p: &PtParams) -> Result<UnbrokenEigensystem> {
    p.require(Regime::Unbroken, "eigensystem_unbroken")?;
    let x = ((p.r / p.s) * p.omega.sin()).asin();
    let root = p.discriminant().sqrt();
    let half = x / 2.0;
    let plus = linalg::cvec(&[
        Complex64::from_polar(1.0, half),
        Complex64::from_polar(1.0, -half),
    ])
    .scale(std::f64::consts::FRAC_1_SQRT_2);
    let minus = linalg::cvec(&[
        Complex64::i() * Complex64::from_polar(1.0, -half),
        -Complex64::i() * Complex64::from_polar(1.0, half),
    ])
    .scale(std::f64::consts::FRAC_1_SQRT_2);
    Ok(UnbrokenEigensystem {
        eps_plus: p.r * p.omega.cos() + root,
        eps_minus: p.r * p.omega.cos() - root,
        state_plus: plus,
        state_minus: minus,
        x,
    })
}

pub fn eigensystem_broken(p: &PtParams) -> Result<BrokenEigensystem> {
    p.require(Regime::Broken, "eigensystem_broken")?;
    let rs = p.r * p.omega.sin();
    if rs <= 0.0 {
        return Err(Error::RegimeError(format!(
            "eigensystem_broken needs r sin ω > 0, got {rs}"
        )));
    }
    let kappa = (-p.discriminant()).sqrt();
    let norm = (2.0 * rs).sqrt();
    let plus = linalg::cvec(&[
        Complex64::i() * cr((rs + kappa).sqrt()),
        cr((rs - kappa).sqrt()),
    ])
    .unscale(norm);
    let minus = linalg::cvec(&[
        Complex64::i() * cr((rs - kappa).sqrt()),
        cr((rs + kappa).sqrt()),
    ])
    .unscale(norm);
    let re = p.r * p.omega.cos();
    Ok(BrokenEigensystem {
        lam_plus: c(re, kappa),
        lam_minus: c(re, -kappa),
        state_plus: plus,
        state_minus: minus,
        kappa,
        mu: p.s / rs,
    })
}

/// |ψ₀⟩ = N(|+⟩ + m e^{iφ}|−⟩) in whichever eigenbasis the regime provides.
pub fn initial_state(p: &PtParams, init: &PtInitialState) -> Result<CVector> {
    let (plus, minus) = match p.regime() {
        Regime::Unbroken => {
            let e = eigensystem_unbroken(p)?;
            (e.state_plus, e.state_minus)
        }
        Regime::Broken => {
            let e = eigensystem_broken(p)?;
            (e.state_plus, e.state_minus)
        }
        Regime::ExceptionalPoint => {
            return Err(Error::RegimeError(
                "initial_state: the EP eigenbasis is incomplete; use the coalesced \
                 eigenstate directly"
                    .into(),
            ))
        }
    };
    let raw = &plus + &minus.map(|z| z * Complex64::from_polar(init.m, init.phi));
    let n = raw.norm();
    if n < 1e-14 {
        return Err(Error::DegenerateState(
            "initial superposition has vanishing norm".into(),
        ));
    }
    Ok(raw.unscale(n))
}

/// U_θ = (1/cos x)[[cos(θ′−x), −i sin θ′], [−i sin θ′, cos(θ′+x)]],
/// θ′ = sθ cos x (unbroken regime only).
pub fn evolution_closed_form(p: &PtParams, theta: f64) -> Result<CMatrix> {
    p.require(Regime::Unbroken, "evolution_closed_form")?;
    let x = ((p.r / p.s) * p.omega.sin()).asin();
    let cx = x.cos();
    if cx.abs() < COS_X_TOL {
        return Err(Error::NearExceptionalPoint(cx.abs()));
    }
    let tp = p.s * theta * cx;
    let mi = -Complex64::i();
    Ok(linalg::cmat(
        2,
        &[
            cr((tp - x).cos()),
            mi * (tp).sin(),
            mi * (tp).sin(),
            cr((tp + x).cos()),
        ],
    )
    .unscale(cx))
}

/// Eq. 40 closed form: P_θ = N²(1 + m² + 2m sin x cos φ̄), φ̄ = 2sθcos x + φ.
pub fn inner_product_factor_closed(
    p: &PtParams,
    init: &PtInitialState,
    theta: f64,
) -> Result<f64> {
    let e = eigensystem_unbroken(p)?;
    let sx = e.x.sin();
    let n2 = 1.0 / (1.0 + init.m * init.m + 2.0 * init.m * sx * init.phi.cos());
    let phibar = 2.0 * p.s * e.x.cos() * theta + init.phi;
    Ok(n2 * (1.0 + init.m * init.m + 2.0 * init.m * sx * phibar.cos()))
}

/// Generic-pipeline value next to the printed closed form.
#[derive(Clone, Copy, Debug)]
pub struct PtQfi {
    pub generic: QfiReport,
    /// Eq. 42 / Eq. 44, evaluated exactly as printed.
    pub printed: f64,
    /// printed − generic.value.
    pub difference: f64,
    /// QFI of the normalized (projected) evolved state: the Fig. 3 variant,
    /// dropping the α-term and the e^{2α} weight.
    pub projected: f64,
}

/// Five-point evolution cache so sweeps and grid searches reuse the matrix
/// exponentials across initial states.
pub(crate) struct Evaluator {
    h_s: CMatrix,
    u: CMatrix,
    stencil: [(f64, CMatrix); 4],
    theta: f64,
    h: f64,
}

impl Evaluator {
    pub(crate) fn new(p: &PtParams, theta: f64) -> Result<Self> {
        let h_s = p.hamiltonian();
        let h = 1e-5 * theta.abs().max(1.0);
        let at = |t: f64| -> Result<CMatrix> {
            oracle::expm(&h_s.map(|z| z * Complex64::new(0.0, -t)))
        };
        Ok(Self {
            u: at(theta)?,
            stencil: [
                (h, at(theta + h)?),
                (-h, at(theta - h)?),
                (h / 2.0, at(theta + h / 2.0)?),
                (-h / 2.0, at(theta - h / 2.0)?),
            ],
            h_s,
            theta,
            h,
        })
    }

    /// F = 16 P (∂_θα)² + 4 P (⟨H†H⟩ − |⟨H⟩|²) on the normalized evolved
    /// state, P = ‖U_θψ₀‖². Same quantity as `qfi_generator_nonhermitian`
    /// with 𝓗 = −H_s, but without re-exponentiating per call.
    pub(crate) fn qfi(&self, psi0: &CVector) -> Result<PtEval> {
        let evolved = &self.u * psi0;
        let p = evolved.norm_squared();
        if !p.is_finite() || p > OVERFLOW_LIMIT {
            return Err(Error::AmplitudeOverflow { theta: self.theta });
        }
        if p <= 1e-280 {
            return Err(Error::DegenerateState(format!(
                "vanishing norm at theta={}",
                self.theta
            )));
        }
        let mut logs = [0.0; 4];
        for (i, (_, u)) in self.stencil.iter().enumerate() {
            let q = (u * psi0).norm_squared();
            if !q.is_finite() || q > OVERFLOW_LIMIT {
                return Err(Error::AmplitudeOverflow { theta: self.theta });
            }
            if q <= 1e-280 {
                return Err(Error::DegenerateState(format!(
                    "vanishing norm inside stencil at theta={}",
                    self.theta
                )));
            }
            logs[i] = q.ln();
        }
        let coarse = (logs[0] - logs[1]) / (4.0 * self.h);
        let fine = (logs[2] - logs[3]) / (2.0 * self.h);
        let dalpha = (4.0 * fine - coarse) / 3.0;

        let psi = evolved.unscale(p.sqrt());
        let hpsi = &self.h_s * &psi;
        let eh = psi.dotc(&hpsi);
        let var = hpsi.norm_squared() - eh.norm_sqr();
        let report = QfiReport {
            value: 16.0 * p * dalpha * dalpha + 4.0 * p * var,
            alpha_term: 16.0 * p * dalpha * dalpha,
            projective_term: 4.0 * p * var,
            method: QfiMethod::Generator,
        };
        Ok(PtEval {
            report,
            projected: 4.0 * var,
        })
    }
}

pub(crate) struct PtEval {
    pub(crate) report: QfiReport,
    pub(crate) projected: f64,
}

/// Eq. 42 exactly as printed, reading its α as x:
/// 64N²m²sin²x cos²x sin²φ̄/(m²+2m sin x cos φ+1)
/// + 16N²m²(s²−r²sin²ω)²/(s+sm²+2mr sinω cos φ̄)².
pub fn printed_unbroken(p: &PtParams, init: &PtInitialState, theta: f64) -> Result<f64> {
    let e = eigensystem_unbroken(p)?;
    let (m, phi) = (init.m, init.phi);
    let sx = e.x.sin();
    let cx = e.x.cos();
    let n2 = 1.0 / (1.0 + m * m + 2.0 * m * sx * phi.cos());
    let phibar = 2.0 * p.s * cx * theta + phi;
    let term1 = 64.0 * n2 * m * m * sx * sx * cx * cx * phibar.sin().powi(2)
        / (m * m + 2.0 * m * sx * phi.cos() + 1.0);
    let d = p.discriminant();
    let denom = p.s + p.s * m * m + 2.0 * m * p.r * p.omega.sin() * phibar.cos();
    let term2 = 16.0 * n2 * m * m * d * d / (denom * denom);
    Ok(term1 + term2)
}

/// Eq. 44 exactly as printed:
/// 16N²κ²(e^{2κθ}−m²e^{−2κθ})²/(e^{2κθ}+m²e^{−2κθ}+2mμcosφ)
/// + 16m²μ²(r²sin²ω−s²)²e^{4κθ}/[s(e^{4κθ}+m²)+2msμe^{2κθ}cosφ]².
pub fn printed_broken(p: &PtParams, init: &PtInitialState, theta: f64) -> Result<f64> {
    let e = eigensystem_broken(p)?;
    let (m, phi) = (init.m, init.phi);
    let (k, mu) = (e.kappa, e.mu);
    let e4 = (4.0 * k * theta).exp();
    if !e4.is_finite() || e4 > OVERFLOW_LIMIT {
        return Err(Error::AmplitudeOverflow { theta });
    }
    let n2 = 1.0 / (1.0 + m * m + 2.0 * m * mu * phi.cos());
    let ep = (2.0 * k * theta).exp();
    let em = (-2.0 * k * theta).exp();
    let term1 = 16.0 * n2 * k * k * (ep - m * m * em).powi(2)
        / (ep + m * m * em + 2.0 * m * mu * phi.cos());
    let d = -p.discriminant(); // r²sin²ω − s²
    let denom = p.s * (e4 + m * m) + 2.0 * m * p.s * mu * ep * phi.cos();
    let term2 = 16.0 * m * m * mu * mu * d * d * e4 / (denom * denom);
    Ok(term1 + term2)
}

pub fn qfi_unbroken(p: &PtParams, init: &PtInitialState, theta: f64) -> Result<PtQfi> {
    p.require(Regime::Unbroken, "qfi_unbroken")?;
    let psi0 = initial_state(p, init)?;
    let eval = Evaluator::new(p, theta)?.qfi(&psi0)?;
    let printed = printed_unbroken(p, init, theta)?;
    Ok(PtQfi {
        generic: eval.report,
        printed,
        difference: printed - eval.report.value,
        projected: eval.projected,
    })
}

pub fn qfi_broken(p: &PtParams, init: &PtInitialState, theta: f64) -> Result<PtQfi> {
    p.require(Regime::Broken, "qfi_broken")?;
    let kappa = (-p.discriminant()).sqrt();
    if (4.0 * kappa * theta).exp() > OVERFLOW_LIMIT {
        return Err(Error::AmplitudeOverflow { theta });
    }
    let psi0 = initial_state(p, init)?;
    let eval = Evaluator::new(p, theta)?.qfi(&psi0)?;
    let printed = printed_broken(p, init, theta)?;
    Ok(PtQfi {
        generic: eval.report,
        printed,
        difference: printed - eval.report.value,
        projected: eval.projected,
    })
}

/// The (unnormalized direction of the) single eigenstate at the EP.
pub fn coalesced_eigenstate(p: &PtParams) -> Result<CVector> {
    p.require(Regime::ExceptionalPoint, "coalesced_eigenstate")?;
    // (H − rcosω·I) v = 0 row one: re^{iω}−rcosω = ir sinω, so
    // v ∝ (−s, i r sinω).
    let raw = linalg::cvec(&[cr(-p.s), Complex64::i() * cr(p.r * p.omega.sin())]);
    let n = raw.norm();
    if n < 1e-14 {
        return Err(Error::DegenerateState("EP eigenstate degenerate at r=s=0".into()));
    }
    Ok(raw.unscale(n))
}

/// Eq. 46: QFI vanishes identically for eigenstate initialization at the EP.
/// Any other initial state is rejected — the coalesced eigenbasis is
/// incomplete, so only the coalesced eigenstate is meaningful here.
pub fn qfi_at_ep(p: &PtParams, psi0: &CVector, _theta: f64) -> Result<f64> {
    p.require(Regime::ExceptionalPoint, "qfi_at_ep")?;
    let coalesced = coalesced_eigenstate(p)?;
    let n = psi0.norm();
    if n < 1e-14 {
        return Err(Error::DegenerateState("zero initial state".into()));
    }
    let overlap = linalg::inner(&coalesced, &psi0.unscale(n)).norm();
    if (overlap - 1.0).abs() > 1e-8 {
        return Err(Error::UnsupportedAtEp(format!(
            "initial state is not the coalesced eigenstate (overlap {overlap:.6})"
        )));
    }
    Ok(0.0)
}

/// Grid-search resolution for `optimal_initial_state`.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub m_max: f64,
    pub m_step: f64,
    pub phi_step: f64,
    pub refine_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            m_max: 3.0,
            m_step: 0.02,
            phi_step: 0.02,
            refine_tol: 1e-4,
        }
    }
}

/// What `optimal_initial_state` maximizes over (m, φ).
///
/// The (m, φ) = (1, π) optimum is a statement about preparing the probe:
/// it is the exact argmax of the initial-state figure of merit
/// 4 Var_{ψ₀}(H) — the projected QFI at θ = 0 — in both regimes. The full
/// QFI's argmax drifts once the norm-rate term kicks in (φ* wanders with θ
/// in the unbroken regime; m* slides below 1 in the broken one), so both
/// objectives are exposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Full QFI F(θ), norm-rate term included.
    Qfi,
    /// Projected QFI 4·Var of H on the normalized evolved state.
    Projected,
}

/// Maximizes the chosen objective over (m, φ): full grid scan, then
/// coordinate pattern refinement down to `refine_tol`.
pub fn optimal_initial_state(
    p: &PtParams,
    theta: f64,
    grid: &GridSpec,
    objective: Objective,
) -> Result<(f64, f64, f64)> {
    if grid.m_step <= 0.0 || grid.phi_step <= 0.0 || grid.m_max <= 0.0 {
        return Err(Error::EmptyGrid);
    }
    if p.regime() == Regime::ExceptionalPoint {
        return Err(Error::RegimeError(
            "optimal_initial_state: no superposition basis at the EP".into(),
        ));
    }
    let evaluator = Evaluator::new(p, theta)?;
    let eval = |m: f64, phi: f64| -> Result<f64> {
        let init = PtInitialState { m, phi };
        let psi0 = initial_state(p, &init)?;
        let e = evaluator.qfi(&psi0)?;
        Ok(match objective {
            Objective::Qfi => e.report.value,
            Objective::Projected => e.projected,
        })
    };

    let m_count = (grid.m_max / grid.m_step).round() as usize + 1;
    let phi_count = (std::f64::consts::TAU / grid.phi_step).ceil() as usize;
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..m_count {
        let m = (i as f64 * grid.m_step).min(grid.m_max);
        for j in 0..phi_count {
            let phi = j as f64 * grid.phi_step;
            let f = eval(m, phi)?;
            if f > best.2 {
                best = (m, phi, f);
            }
        }
    }

    let (mut m, mut phi, mut f) = best;
    let mut step = grid.m_step;
    while step > grid.refine_tol / 2.0 {
        let mut moved = false;
        for (dm, dphi) in [
            (step, 0.0),
            (-step, 0.0),
            (0.0, step),
            (0.0, -step),
        ] {
            let mc = (m + dm).max(0.0).min(grid.m_max);
            let pc = phi + dphi;
            let fc = eval(mc, pc)?;
            if fc > f {
                m = mc;
                phi = pc;
                f = fc;
                moved = true;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    phi = phi.rem_euclid(std::f64::consts::TAU);
    Ok((m, phi, f))
}

/// Default θ grid for the oscillatory (Figs. 2–3) sweeps.
pub fn fig23_grid() -> Vec<f64> {
    linspace(0.0, 15.0, 1501)
}

/// Default θ grid for the broken-regime (Fig. 4) sweeps.
pub fn fig4_grid() -> Vec<f64> {
    linspace(0.0, 6.0, 601)
}

/// The caption lists both π/2 and π/3 across two sentences; emit all five.
pub fn fig2_phi_values() -> Vec<f64> {
    use std::f64::consts::PI;
    vec![PI, 2.0 * PI / 3.0, PI / 2.0, PI / 3.0, 0.0]
}

/// One regime-appropriate sweep over θ for a fixed (m, φ) list.
pub fn pt_sweep(
    p: &PtParams,
    m: f64,
    phis: &[f64],
    thetas: &[f64],
) -> Result<Vec<SweepRecord>> {
    if thetas.is_empty() || phis.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let regime = p.regime();
    if regime == Regime::ExceptionalPoint {
        return Err(Error::RegimeError(
            "pt_sweep: pick an off-EP parameter set".into(),
        ));
    }
    let mut rows = Vec::with_capacity(phis.len() * thetas.len());
    for &phi in phis {
        let init = PtInitialState::new(m, phi)?;
        for &theta in thetas {
            let q = match regime {
                Regime::Unbroken => qfi_unbroken(p, &init, theta)?,
                Regime::Broken => qfi_broken(p, &init, theta)?,
                Regime::ExceptionalPoint => unreachable!(),
            };
            let mut rec = SweepRecord::empty("pt", theta);
            rec.regime = Some(regime.label());
            rec.m = Some(m);
            rec.phi = Some(phi);
            rec.r = Some(p.r);
            rec.s = Some(p.s);
            rec.omega = Some(p.omega);
            rec.f_generic = Some(q.generic.value);
            rec.f_closed_form = Some(q.printed);
            rec.f_projected = Some(q.projected);
            rec.residual = Some(relative_residual(q.printed, q.generic.value));
            rows.push(rec);
        }
    }
    Ok(rows)
}

/// Figs. 2–3: unbroken regime, s=1, r=0.4, ω=π/2, m=1, five φ values.
pub fn fig23_sweep() -> Result<Vec<SweepRecord>> {
    let p = PtParams::new(0.4, 1.0, std::f64::consts::FRAC_PI_2)?;
    pt_sweep(&p, 1.0, &fig2_phi_values(), &fig23_grid())
}

/// Fig. 4: broken regime, m=1, φ=π, the two caption parameter sets.
pub fn fig4_sweep() -> Result<Vec<SweepRecord>> {
    let omega = std::f64::consts::FRAC_PI_2;
    let mut rows = Vec::new();
    for (r, s) in [(0.6, 0.4), (1.0, 0.1)] {
        let p = PtParams::new(r, s, omega)?;
        rows.extend(pt_sweep(
            &p,
            1.0,
            &[std::f64::consts::PI],
            &fig4_grid(),
        )?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::StateFamily;
    use crate::qfi;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn unbroken() -> PtParams {
        PtParams::new(0.4, 1.0, FRAC_PI_2).unwrap()
    }

    fn broken() -> PtParams {
        PtParams::new(0.6, 0.4, FRAC_PI_2).unwrap()
    }

    #[test]
    fn regime_classification() {
        assert_eq!(unbroken().regime(), Regime::Unbroken);
        assert_eq!(broken().regime(), Regime::Broken);
        let ep = PtParams::new(0.5, 0.5, FRAC_PI_2).unwrap();
        assert_eq!(ep.regime(), Regime::ExceptionalPoint);
    }

    #[test]
    fn unbroken_eigensystem_checks_out() {
        let p = unbroken();
        let e = eigensystem_unbroken(&p).unwrap();
        assert_abs_diff_eq!(e.eps_plus, 0.84_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(e.eps_minus, -(0.84_f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(e.x.sin(), 0.4, epsilon = 1e-12);
        let h = p.hamiltonian();
        assert!((&h * &e.state_plus - e.state_plus.scale(e.eps_plus)).norm() < 1e-12);
        assert!((&h * &e.state_minus - e.state_minus.scale(e.eps_minus)).norm() < 1e-12);
        assert_abs_diff_eq!(e.state_plus.norm(), 1.0, epsilon = 1e-14);
        let overlap = linalg::inner(&e.state_plus, &e.state_minus);
        assert_abs_diff_eq!(overlap.re, e.x.sin(), epsilon = 1e-12);
        assert_abs_diff_eq!(overlap.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_limit_orthogonal() {
        let p = PtParams::new(0.0, 1.0, 0.3).unwrap();
        let e = eigensystem_unbroken(&p).unwrap();
        assert_abs_diff_eq!(e.x, 0.0, epsilon = 1e-14);
        let overlap = linalg::inner(&e.state_plus, &e.state_minus);
        assert!(overlap.norm() < 1e-14);
    }

    #[test]
    fn broken_eigensystem_checks_out() {
        let p = broken();
        let e = eigensystem_broken(&p).unwrap();
        assert_abs_diff_eq!(e.kappa, 0.2_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(e.mu, 2.0 / 3.0, epsilon = 1e-12);
        let h = p.hamiltonian();
        let rp = &h * &e.state_plus - e.state_plus.map(|z| z * e.lam_plus);
        let rm = &h * &e.state_minus - e.state_minus.map(|z| z * e.lam_minus);
        assert!(rp.norm() < 1e-12 && rm.norm() < 1e-12);
        assert_abs_diff_eq!(e.state_plus.norm(), 1.0, epsilon = 1e-14);
        let overlap = linalg::inner(&e.state_plus, &e.state_minus);
        assert_abs_diff_eq!(overlap.re, e.mu, epsilon = 1e-12);
        assert_abs_diff_eq!(overlap.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_evolution_matches_expm() {
        let p = unbroken();
        let x = ((p.r / p.s) * p.omega.sin()).asin();
        let period = 4.0 * PI / (p.s * x.cos());
        for i in 0..=40 {
            let theta = period * i as f64 / 40.0;
            let closed = evolution_closed_form(&p, theta).unwrap();
            let numeric =
                oracle::expm(&p.hamiltonian().map(|z| z * Complex64::new(0.0, -theta)))
                    .unwrap();
            assert!(
                linalg::frobenius_distance(&closed, &numeric) < 1e-10,
                "theta = {theta}"
            );
        }
        assert!(
            linalg::frobenius_distance(
                &evolution_closed_form(&p, 0.0).unwrap(),
                &linalg::identity(2)
            ) < 1e-14
        );
    }

    #[test]
    fn quarter_period_evolution_form() {
        let p = unbroken();
        let x = ((p.r / p.s) * p.omega.sin()).asin();
        let theta = FRAC_PI_2 / (p.s * x.cos());
        let u = evolution_closed_form(&p, theta).unwrap();
        let expect = linalg::cmat(
            2,
            &[cr(x.sin()), -Complex64::i(), -Complex64::i(), cr(-x.sin())],
        )
        .unscale(x.cos());
        assert!(linalg::frobenius_distance(&u, &expect) < 1e-12);
    }

    #[test]
    fn inner_product_factor_matches_direct() {
        let p = unbroken();
        let init = PtInitialState::new(0.7, 1.1).unwrap();
        let psi0 = initial_state(&p, &init).unwrap();
        for &theta in &[0.0, 0.4, 2.3, 7.9] {
            let u = oracle::expm(&p.hamiltonian().map(|z| z * Complex64::new(0.0, -theta)))
                .unwrap();
            let direct = (&u * &psi0).norm_squared();
            let closed = inner_product_factor_closed(&p, &init, theta).unwrap();
            assert_abs_diff_eq!(closed, direct, epsilon = 1e-10);
        }
    }

    #[test]
    fn unbroken_alpha_term_vanishes_at_origin_for_real_overlap() {
        // P(0) = 1 always; dα(0) ∝ sin φ vanishes only when the m e^{iφ}
        // cross-term is real.
        let p = unbroken();
        for phi in [0.0, PI] {
            let init = PtInitialState::new(0.8, phi).unwrap();
            let q = qfi_unbroken(&p, &init, 0.0).unwrap();
            assert!(q.generic.alpha_term.abs() < 1e-8, "phi={phi}: {q:?}");
        }
        let skew = PtInitialState::new(0.8, 0.9).unwrap();
        let psi0 = initial_state(&p, &skew).unwrap();
        assert_abs_diff_eq!(psi0.norm_squared(), 1.0, epsilon = 1e-12);
        let q = qfi_unbroken(&p, &skew, 0.0).unwrap();
        assert!(q.generic.alpha_term.abs() > 1e-3);
    }

    #[test]
    fn printed_unbroken_anchor_value() {
        let p = unbroken();
        let init = PtInitialState::new(1.0, PI).unwrap();
        let printed = printed_unbroken(&p, &init, 0.0).unwrap();
        // 16N²(s²−r²sin²ω)²/(2s−2r sinω)² with N² = 1/1.2
        assert_abs_diff_eq!(printed, 6.533333333333333, epsilon = 1e-12);
        // even at θ=0 the printed form sits below the pipeline by a factor
        // N² on its second term: 7.84·(1 − 5/6) = 7.84/6
        let q = qfi_unbroken(&p, &init, 0.0).unwrap();
        assert_abs_diff_eq!(q.generic.value, 7.84, epsilon = 1e-8);
        assert_abs_diff_eq!(q.difference, -7.84 / 6.0, epsilon = 1e-8);
    }

    #[test]
    fn evaluator_agrees_with_generator_pipeline() {
        let p = unbroken();
        let init = PtInitialState::new(0.6, 2.0).unwrap();
        let psi0 = initial_state(&p, &init).unwrap();
        for &theta in &[0.3, 1.7, 5.2] {
            let fast = Evaluator::new(&p, theta).unwrap().qfi(&psi0).unwrap();
            let ctx = qfi::GeneratorContext::from_hamiltonian(psi0.clone(), p.hamiltonian());
            let slow = qfi::qfi_generator_nonhermitian(&ctx, theta).unwrap();
            assert_abs_diff_eq!(fast.report.value, slow.value, epsilon = 1e-8);
        }
    }

    #[test]
    fn hermitian_limit_matches_generator_variance() {
        // r = 0: H = s σ_x, eigenbasis orthogonal, QFI = 4 Var(H) for all θ.
        let p = PtParams::new(0.0, 1.0, FRAC_PI_2).unwrap();
        let init = PtInitialState::new(0.5, 0.7).unwrap();
        let psi0 = initial_state(&p, &init).unwrap();
        let ctx = qfi::GeneratorContext::from_hamiltonian(psi0, p.hamiltonian());
        let base = qfi::qfi_generator_hermitian(&ctx).unwrap();
        let q = qfi_unbroken(&p, &init, 1.3).unwrap();
        assert_abs_diff_eq!(q.generic.value, base.value, epsilon = 1e-8);
        let m = init.m;
        let de = 2.0; // ε₊ − ε₋ = 2s
        let expect = 4.0 * m * m * de * de / (1.0 + m * m).powi(2);
        assert_abs_diff_eq!(q.generic.value, expect, epsilon = 1e-8);
    }

    #[test]
    fn printed_broken_anchor_value() {
        let p = broken();
        let init = PtInitialState::new(1.0, PI).unwrap();
        let printed = printed_broken(&p, &init, 0.0).unwrap();
        assert_abs_diff_eq!(printed, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn broken_overflow_guard() {
        let p = broken();
        let init = PtInitialState::new(1.0, PI).unwrap();
        let theta = 800.0 / (4.0 * 0.2_f64.sqrt());
        assert!(matches!(
            qfi_broken(&p, &init, theta),
            Err(Error::AmplitudeOverflow { .. })
        ));
    }

    #[test]
    fn broken_matches_oracle_pipeline() {
        let p = broken();
        let init = PtInitialState::new(1.0, PI).unwrap();
        let psi0 = initial_state(&p, &init).unwrap();
        let h_s = p.hamiltonian();
        let fam = StateFamily::new(move |t: f64| {
            oracle::expm(&h_s.map(|z| z * Complex64::new(0.0, -t))).unwrap() * &psi0
        });
        for &theta in &[0.2, 1.0, 3.5] {
            let q = qfi_broken(&p, &init, theta).unwrap();
            let h = 1e-5 * theta.abs().max(1.0);
            let direct = qfi::qfi_pure_nonhermitian(&fam, theta, h).unwrap();
            assert!(
                (q.generic.value - direct.value).abs()
                    / direct.value.abs().max(1.0)
                    < 1e-6
            );
        }
    }

    #[test]
    fn ep_qfi_zero_on_eigenstate_only() {
        let p = PtParams::new(0.5, 0.5, FRAC_PI_2).unwrap();
        let v = coalesced_eigenstate(&p).unwrap();
        assert_abs_diff_eq!(qfi_at_ep(&p, &v, 1.0).unwrap(), 0.0, epsilon = 0.0);
        // H v = rcosω v, i.e. eigen-residual vanishes
        let resid = &p.hamiltonian() * &v - v.scale(p.r * p.omega.cos());
        assert!(resid.norm() < 1e-14);
        let other = linalg::rvec(&[1.0, 0.0]);
        assert!(matches!(
            qfi_at_ep(&p, &other, 1.0),
            Err(Error::UnsupportedAtEp(_))
        ));
    }

    #[test]
    fn ep_generic_pipeline_vanishes() {
        let p = PtParams::new(0.5, 0.5, FRAC_PI_2).unwrap();
        let psi0 = coalesced_eigenstate(&p).unwrap();
        let eval = Evaluator::new(&p, 0.9).unwrap().qfi(&psi0).unwrap();
        assert!(eval.report.value.abs() < 1e-8);
    }

    #[test]
    fn ep_continuity_probe() {
        // Nudging s off the EP restores a finite, nonzero QFI for a
        // non-eigenstate superposition.
        let p = PtParams::new(0.5, 0.501, FRAC_PI_2).unwrap();
        let init = PtInitialState::new(1.0, PI).unwrap();
        let q = qfi_unbroken(&p, &init, 0.5).unwrap();
        assert!(q.generic.value.is_finite() && q.generic.value > 0.0);
    }

    #[test]
    fn optimal_state_found_at_m1_phi_pi() {
        let coarse = GridSpec {
            m_step: 0.1,
            phi_step: 0.1,
            ..GridSpec::default()
        };
        // preparation objective: argmax is exactly (1, π) in both regimes
        for p in [unbroken(), broken()] {
            let (m, phi, f) =
                optimal_initial_state(&p, 0.0, &coarse, Objective::Projected).unwrap();
            assert!((m - 1.0).abs() < 0.05, "m* = {m}");
            assert!((phi - PI).abs() < 0.05, "phi* = {phi}");
            assert!(f > 0.0);
        }
    }

    #[test]
    fn optimal_state_full_qfi_drifts_from_preparation_optimum() {
        // With the norm-rate term included the unbroken argmax keeps m* = 1
        // but φ* moves off π as θ grows.
        let p = unbroken();
        let coarse = GridSpec {
            m_step: 0.1,
            phi_step: 0.1,
            ..GridSpec::default()
        };
        let (m, phi, f) = optimal_initial_state(&p, 1.0, &coarse, Objective::Qfi).unwrap();
        assert!((m - 1.0).abs() < 0.05, "m* = {m}");
        assert!(f > 0.0);
        assert!((phi - PI).abs() > 0.2, "phi* = {phi} should shift off π");
    }

    #[test]
    fn sweeps_have_expected_shape() {
        let p = unbroken();
        let thetas = linspace(0.0, 3.0, 31);
        let rows = pt_sweep(&p, 1.0, &fig2_phi_values(), &thetas).unwrap();
        assert_eq!(rows.len(), 5 * 31);
        for r in &rows {
            assert!(r.f_generic.unwrap().is_finite());
            assert!(r.f_projected.unwrap().is_finite());
        }
    }

    #[test]
    fn rejects_wrong_regime() {
        assert!(matches!(
            eigensystem_unbroken(&broken()),
            Err(Error::RegimeError(_))
        ));
        assert!(matches!(
            eigensystem_broken(&unbroken()),
            Err(Error::RegimeError(_))
        ));
        assert!(matches!(
            evolution_closed_form(&broken(), 1.0),
            Err(Error::RegimeError(_))
        ));
    }
}
