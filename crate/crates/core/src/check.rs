//! Named cross-validation suite: every closed form against the independent
//! numerical oracle, plus the documented divergences of the printed
//! formulas. Consumed by the `check` CLI subcommand and the acceptance
//! tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::family::{DensityFamily, StateFamily};
use crate::hilbert;
use crate::linalg::{self, CVector};
use crate::oracle::{self, BinaryMeasurement, StencilConfig};
use crate::pseudo_hermitian::{self, NMode, PseudoQubitParams};
use crate::pt_symmetric::{self, GridSpec, PtInitialState, PtParams};
use crate::qfi;
use crate::sweep::linspace;

/// One verification item: a residual against a pinned threshold.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub detail: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn from_residual(id: &'static str, detail: String, residual: f64, threshold: f64) -> Self {
        Self {
            id,
            detail,
            residual,
            threshold,
            passed: residual.is_finite() && residual <= threshold,
        }
    }
}

/// A divergence between a printed formula and the oracle pipeline that is
/// expected and documented rather than a defect. The suite asserts the
/// divergence reproduces deterministically at its frozen reference value.
pub struct KnownDiscrepancy {
    pub id: &'static str,
    pub description: &'static str,
    /// |printed − generic| measured at the pinned probe point.
    pub reference_residual: f64,
    /// How tightly a rerun must reproduce the reference.
    pub reproduce_tol: f64,
}

/// Probe point for the Eq. 42 discrepancy: Fig. 2 parameters, φ = 2π/3,
/// θ = 0.5 (a point where φ̄ ≠ φ so the printed denominators disagree with
/// the derivation).
pub const EQ42_PROBE: (f64, f64, f64) = (1.0, 2.0 * std::f64::consts::PI / 3.0, 0.5);

pub const KNOWN_DISCREPANCIES: &[KnownDiscrepancy] = &[
    KnownDiscrepancy {
        id: "eq42-at-theta0",
        description: "Eq. 42 as printed carries a spurious extra N² on its second term, so \
                      even at θ=0 (where φ̄=φ and α=0) it sits below the pipeline: at the \
                      Fig. 2 anchor (m=1, φ=π) printed = 7.84·5/6 vs generic = 7.84, a gap \
                      of exactly 7.84/6",
        reference_residual: 7.84 / 6.0,
        reproduce_tol: 1e-8,
    },
    KnownDiscrepancy {
        id: "eq42-printed-form",
        description: "away from θ=0 the same N² typo makes Eq. 42 diverge from the oracle \
                      pipeline by a θ-dependent amount; frozen at the (m=1, φ=2π/3, θ=0.5) \
                      probe",
        reference_residual: EQ42_REFERENCE_RESIDUAL,
        reproduce_tol: 1e-9,
    },
    KnownDiscrepancy {
        id: "fig4-caption-value",
        description: "Fig. 4's caption quotes 'approximately 8' for s=0.4, r=0.6 near θ=0, \
                      but the printed Eq. 44 evaluates to exactly 4.0 at θ=0, m=1, φ=π",
        reference_residual: 4.0,
        reproduce_tol: 1e-12,
    },
];

/// Frozen |printed Eq. 42 − generic| at EQ42_PROBE (dev-measured; the check
/// asserts reproducibility of the divergence, not its size).
pub const EQ42_REFERENCE_RESIDUAL: f64 = 1.02058946565746655;

fn caption_unbroken() -> PtParams {
    PtParams::new(0.4, 1.0, std::f64::consts::FRAC_PI_2).expect("caption parameters valid")
}

fn caption_broken() -> PtParams {
    PtParams::new(0.6, 0.4, std::f64::consts::FRAC_PI_2).expect("caption parameters valid")
}

/// Criterion 1: the non-Hermitian pure path reduces to the Hermitian one on
/// unitary (norm-preserving) families.
pub fn check_hermitian_reduction(seed: u64) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let dim = 2 + (i % 3);
        let v = oracle::random_unitary(dim, &mut rng);
        let energies: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut g = linalg::CMatrix::zeros(dim, dim);
        for (k, e) in energies.iter().enumerate() {
            let col = CVector::from(v.column(k).into_owned());
            g += linalg::outer(&col, &col).scale(*e);
        }
        let psi0 = oracle::random_state(dim, &mut rng);
        let fam = StateFamily::new(move |t: f64| {
            oracle::expm(&g.map(|z| z * Complex64::new(0.0, -t))).expect("finite generator")
                * &psi0
        });
        let theta = 0.3;
        let h = 1e-5;
        let nh = qfi::qfi_pure_nonhermitian(&fam, theta, h)?.value;
        let herm = qfi::qfi_pure_hermitian(&fam, theta, h)?.value;
        worst = worst.max((nh - herm).abs() / herm.abs().max(1.0));
    }
    Ok(CheckOutcome::from_residual(
        "hermitian-reduction",
        "pure non-Hermitian vs Hermitian QFI on 50 random unitary families (dim 2-4)".into(),
        worst,
        1e-8,
    ))
}

/// Criterion 2a: structured pure pipeline vs the spectral-form oracle on
/// the pseudo-Hermitian eigenstate family, all four n modes.
pub fn check_oracle_pure_pseudo() -> Result<CheckOutcome> {
    let modes = [
        NMode::Constant(0.5),
        NMode::Constant(std::f64::consts::FRAC_1_SQRT_2),
        NMode::Constant(1.0),
        NMode::Normalized,
    ];
    let grid = linspace(-2.0, 2.0, 41);
    let mut worst = 0.0f64;
    for mode in modes {
        let p = PseudoQubitParams::new(1.0, 1.0, 0.0, mode)?;
        let fam = pseudo_hermitian::right_state_family(&p);
        for &x in &grid {
            let h = 1e-5 * x.abs().max(1.0);
            let structured = qfi::qfi_pure_nonhermitian(&fam, x, h)?.value;
            let reference = oracle::qfi_oracle(&fam, x, &StencilConfig::for_theta(x))?;
            worst = worst.max((structured - reference).abs() / reference.abs().max(1.0));
        }
    }
    Ok(CheckOutcome::from_residual(
        "oracle-pure-pseudo",
        "Eq. 16 pipeline vs spectral oracle on |R_n(x)>, 4 n-modes x 41 points".into(),
        worst,
        1e-6,
    ))
}

/// Criterion 2b: same comparison on the PT evolved families, both regimes.
pub fn check_oracle_pure_pt() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let init = PtInitialState::new(1.0, std::f64::consts::PI)?;
    for (p, thetas, broken) in [
        (caption_unbroken(), linspace(0.0, 4.0, 41), false),
        (caption_broken(), linspace(0.0, 4.0, 41), true),
    ] {
        let psi0 = pt_symmetric::initial_state(&p, &init)?;
        let h_s = p.hamiltonian();
        let fam = StateFamily::new(move |t: f64| {
            oracle::expm(&h_s.map(|z| z * Complex64::new(0.0, -t))).expect("finite H") * &psi0
        });
        for &theta in &thetas {
            let generic = if broken {
                pt_symmetric::qfi_broken(&p, &init, theta)?.generic.value
            } else {
                pt_symmetric::qfi_unbroken(&p, &init, theta)?.generic.value
            };
            let reference = oracle::qfi_oracle(&fam, theta, &StencilConfig::for_theta(theta))?;
            worst = worst.max((generic - reference).abs() / reference.abs().max(1.0));
        }
    }
    Ok(CheckOutcome::from_residual(
        "oracle-pure-pt",
        "generator pipeline vs spectral oracle on PT evolved families, both regimes, 41 points"
            .into(),
        worst,
        1e-6,
    ))
}

/// Criterion 3: mixed-state formulas agree with each other, collapse to the
/// pure value at rank 1, and reproduce the classical coin.
pub fn check_mixed_consistency() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;

    // Eq. 21 vs Eq. 24 under unitary evolution of a rank-2 state.
    let h = &linalg::sigma_x() + &linalg::sigma_z().scale(0.3);
    let rho0_mat = {
        let e1 = linalg::rvec(&[1.0, 0.0]);
        let e2 = linalg::rvec(&[0.0, 1.0]);
        linalg::outer(&e1, &e1).scale(0.7) + linalg::outer(&e2, &e2).scale(0.3)
    };
    let rho0 = hilbert::spectral_decompose(&rho0_mat, hilbert::DEFAULT_RANK_TOL)?;
    let ctx = qfi::GeneratorContext::from_hamiltonian(linalg::rvec(&[1.0, 0.0]), h.clone());
    let h_ev = h.clone();
    let rho_fam = DensityFamily::new(move |t: f64| {
        let u = oracle::expm(&h_ev.map(|z| z * Complex64::new(0.0, -t))).expect("finite H");
        &u * &rho0_mat * u.adjoint()
    });
    let theta = 0.4;
    let direct = qfi::qfi_mixed_nonhermitian(&rho_fam, theta, 1e-5)?.value;
    let generator = qfi::qfi_mixed_generator(&rho0, &ctx, theta)?.value;
    worst = worst.max((direct - generator).abs() / generator.abs().max(1.0));

    // Rank-1 collapse onto the pure path.
    let pure_fam = StateFamily::new(|t: f64| {
        linalg::rvec(&[(0.9 * t).cos(), (0.9 * t).sin()]).scale((0.3 * t).exp())
    });
    let rho_rank1 = DensityFamily::from_pure(pure_fam.clone());
    let mixed = qfi::qfi_mixed_nonhermitian(&rho_rank1, 0.4, 1e-5)?.value;
    let pure = qfi::qfi_pure_nonhermitian(&pure_fam, 0.4, 1e-5)?.value;
    worst = worst.max((mixed - pure).abs() / pure.abs().max(1.0));

    // Classical coin at θ = 0.3: F = 1/(θ(1−θ)) = 1/0.21.
    let coin = DensityFamily::new(|t: f64| {
        linalg::cmat(2, &[linalg::cr(t), linalg::cr(0.0), linalg::cr(0.0), linalg::cr(1.0 - t)])
    });
    let f_coin = qfi::qfi_mixed_nonhermitian(&coin, 0.3, 1e-5)?.value;
    let coin_resid = (f_coin - 1.0 / 0.21).abs();
    // the coin carries the 1e-8 absolute pin; fold it in at its own scale
    worst = worst.max(coin_resid * (1e-6 / 1e-8));

    Ok(CheckOutcome::from_residual(
        "mixed-consistency",
        "Eq. 21 vs Eq. 24, rank-1 collapse, and the diag(θ,1−θ) coin at θ=0.3".into(),
        worst,
        1e-6,
    ))
}

/// Criterion 4: pseudo-Hermitian closed-form anchors and Fig. 1 dominance.
pub fn check_pseudo_closed_forms() -> Result<CheckOutcome> {
    let p = PseudoQubitParams::new(1.0, 1.0, 0.0, NMode::Normalized)?;
    let mut worst = 0.0f64;
    worst = worst.max((p.eps_lambda() - 2.0 * 2.0_f64.sqrt()).abs());
    worst = worst.max((p.delta_lambda() - 1.0 / 2.0_f64.sqrt()).abs());
    worst = worst.max((pseudo_hermitian::qfi_fxd(&p, 0.0) - 1.0 / 36.0).abs());
    worst = worst.max((pseudo_hermitian::qfi_fx(&p, 0.0) - 2.0 / 81.0).abs());

    let mut violation = 0.0f64;
    for &eps in &[1.0, 1.5, 2.0] {
        let q = PseudoQubitParams::new(eps, 1.0, 0.0, NMode::Normalized)?;
        for &x in &pseudo_hermitian::fig1_grid() {
            let gap = pseudo_hermitian::qfi_fx(&q, x) - pseudo_hermitian::qfi_fxd(&q, x);
            violation = violation.max(gap);
        }
    }
    worst = worst.max(violation);
    Ok(CheckOutcome::from_residual(
        "pseudo-closed-forms",
        "ε_λ, δ_λ, F_x^d, F_x anchors at ε=ω=1, x=0, plus F_x^d ≥ F_x dominance on the grid"
            .into(),
        worst,
        1e-10,
    ))
}

/// Criterion 5: Eq. 38 closed-form evolution vs expm, and the Eq. 39 point.
pub fn check_pt_evolution() -> Result<CheckOutcome> {
    let p = caption_unbroken();
    let x = ((p.r / p.s) * p.omega.sin()).asin();
    let period = 4.0 * std::f64::consts::PI / (p.s * x.cos());
    let mut worst = 0.0f64;
    for &theta in &linspace(0.0, period, 41) {
        let closed = pt_symmetric::evolution_closed_form(&p, theta)?;
        let numeric = oracle::expm(&p.hamiltonian().map(|z| z * Complex64::new(0.0, -theta)))?;
        worst = worst.max(
            (closed - numeric)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max),
        );
    }
    let quarter = std::f64::consts::FRAC_PI_2 / (p.s * x.cos());
    let u = pt_symmetric::evolution_closed_form(&p, quarter)?;
    let expect = linalg::cmat(
        2,
        &[
            linalg::cr(x.sin()),
            -Complex64::i(),
            -Complex64::i(),
            linalg::cr(-x.sin()),
        ],
    )
    .unscale(x.cos());
    worst = worst.max(linalg::frobenius_distance(&u, &expect));
    Ok(CheckOutcome::from_residual(
        "pt-evolution",
        "Eq. 38 vs expm over a full period and the Eq. 39 quarter-period form".into(),
        worst,
        1e-10,
    ))
}

/// Criterion 6: Eq. 40 inner-product factor vs direct ⟨ψ₀|U†U|ψ₀⟩.
pub fn check_inner_product_factor() -> Result<CheckOutcome> {
    let p = caption_unbroken();
    let mut worst = 0.0f64;
    for phi in [0.0, std::f64::consts::FRAC_PI_3, 2.0 * std::f64::consts::FRAC_PI_3, std::f64::consts::PI] {
        let init = PtInitialState::new(1.0, phi)?;
        let psi0 = pt_symmetric::initial_state(&p, &init)?;
        for &theta in &linspace(0.0, 12.0, 41) {
            let u = oracle::expm(&p.hamiltonian().map(|z| z * Complex64::new(0.0, -theta)))?;
            let direct = (&u * &psi0).norm_squared();
            let closed = pt_symmetric::inner_product_factor_closed(&p, &init, theta)?;
            worst = worst.max((closed - direct).abs());
        }
    }
    Ok(CheckOutcome::from_residual(
        "inner-product-factor",
        "Eq. 40 closed form vs direct evolved norm over θ-grid and 4 φ values".into(),
        worst,
        1e-10,
    ))
}

/// Criterion 7: grid search over the preparation objective finds the
/// optimal state (1, π) in both regimes.
pub fn check_optimal_state() -> Result<CheckOutcome> {
    let grid = GridSpec::default();
    let mut worst = 0.0f64;
    for p in [caption_unbroken(), caption_broken()] {
        let (m, phi, _f) = pt_symmetric::optimal_initial_state(
            &p,
            0.0,
            &grid,
            pt_symmetric::Objective::Projected,
        )?;
        worst = worst.max((m - 1.0).abs());
        worst = worst.max((phi - std::f64::consts::PI).abs());
    }
    Ok(CheckOutcome::from_residual(
        "optimal-state",
        "argmax of 4·Var_{ψ0}(H) over (m, φ) at the caption parameter sets".into(),
        worst,
        GridSpec::default().m_step + 1e-9,
    ))
}

/// Criterion 8: QFI vanishes at the exceptional point on the coalesced
/// eigenstate, by algebra and by the generic pipeline.
pub fn check_exceptional_point() -> Result<CheckOutcome> {
    let p = PtParams::new(0.5, 0.5, std::f64::consts::FRAC_PI_2)?;
    let v = pt_symmetric::coalesced_eigenstate(&p)?;
    let algebraic = pt_symmetric::qfi_at_ep(&p, &v, 1.0)?;
    let h_s = p.hamiltonian();
    let fam = StateFamily::new(move |t: f64| {
        oracle::expm(&h_s.map(|z| z * Complex64::new(0.0, -t))).expect("finite H") * &v
    });
    let pipeline = qfi::qfi_pure_nonhermitian(&fam, 0.9, 1e-5)?.value;
    Ok(CheckOutcome::from_residual(
        "exceptional-point",
        "Eq. 46: zero QFI on the coalesced eigenstate, algebraic and pipeline".into(),
        algebraic.abs().max(pipeline.abs()),
        1e-8,
    ))
}

/// Criterion 9: Robertson–Schrödinger slack is nonnegative over random
/// draws.
pub fn check_uncertainty_inequality(seed: u64) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(9));
    let mut min_slack = f64::INFINITY;
    for i in 0..1000 {
        let dim = 2 + (i % 3);
        let a = linalg::CMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let b = linalg::CMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let psi = oracle::random_state(dim, &mut rng);
        min_slack = min_slack.min(qfi::robertson_schrodinger_slack(&a, &b, &psi)?);
    }
    Ok(CheckOutcome::from_residual(
        "uncertainty-inequality",
        "Robertson–Schrödinger slack over 1000 random (A, B, ψ) draws, dims 2-4".into(),
        (-min_slack).max(0.0),
        1e-10,
    ))
}

/// Criterion 10: Monte Carlo estimator variance clears the Cramér–Rao band.
pub fn check_mc_cramer_rao(seed: u64) -> Result<CheckOutcome> {
    let report = oracle::mc_cramer_rao(
        &BinaryMeasurement::qubit_phase(),
        0.0,
        4.0,
        10_000,
        200,
        seed,
    )?;
    let shortfall = (report.band_floor() - report.empirical_variance).max(0.0);
    Ok(CheckOutcome::from_residual(
        "mc-cramer-rao",
        format!(
            "qubit phase model, F=4, 1e4 shots x 200 trials: variance {:.3e} vs bound {:.3e}",
            report.empirical_variance, report.bound
        ),
        shortfall / report.bound,
        1e-12,
    ))
}

/// Criterion 11: the printed Eq. 42/44 forms either agree with the oracle
/// or reproduce their documented divergence exactly.
pub fn check_printed_forms() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();

    // θ = 0 anchor: the spurious-N² gap must reproduce exactly.
    let p = caption_unbroken();
    let init = PtInitialState::new(1.0, std::f64::consts::PI)?;
    let at0 = pt_symmetric::qfi_unbroken(&p, &init, 0.0)?;
    let ledger = &KNOWN_DISCREPANCIES[0];
    out.push(CheckOutcome::from_residual(
        ledger.id,
        format!("{} (reference |Δ| = {:.12e})", ledger.description, ledger.reference_residual),
        (at0.difference.abs() - ledger.reference_residual).abs(),
        ledger.reproduce_tol,
    ));

    // Away from θ = 0 the divergence must reproduce its frozen size.
    let (m, phi, theta) = EQ42_PROBE;
    let probe = pt_symmetric::qfi_unbroken(&p, &PtInitialState::new(m, phi)?, theta)?;
    let ledger = &KNOWN_DISCREPANCIES[1];
    out.push(CheckOutcome::from_residual(
        ledger.id,
        format!("{} (reference |Δ| = {:.12e})", ledger.description, ledger.reference_residual),
        (probe.difference.abs() - ledger.reference_residual).abs(),
        ledger.reproduce_tol,
    ));

    // Fig. 4 caption: printed Eq. 44 is exactly 4.0 at the probe, not ≈8.
    let printed = pt_symmetric::printed_broken(
        &caption_broken(),
        &PtInitialState::new(1.0, std::f64::consts::PI)?,
        0.0,
    )?;
    let ledger = &KNOWN_DISCREPANCIES[2];
    out.push(CheckOutcome::from_residual(
        ledger.id,
        ledger.description.into(),
        (printed - ledger.reference_residual).abs(),
        ledger.reproduce_tol,
    ));
    Ok(out)
}

/// Runs every check; the CLI `check` subcommand and the acceptance suite
/// print one line per entry.
pub fn run_all(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = vec![
        check_hermitian_reduction(seed)?,
        check_oracle_pure_pseudo()?,
        check_oracle_pure_pt()?,
        check_mixed_consistency()?,
        check_pseudo_closed_forms()?,
        check_pt_evolution()?,
        check_inner_product_factor()?,
        check_optimal_state()?,
        check_exceptional_point()?,
        check_uncertainty_inequality(seed)?,
        check_mc_cramer_rao(seed)?,
    ];
    out.extend(check_printed_forms()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DEFAULT_SEED;

    #[test]
    fn fast_checks_pass() {
        for outcome in [
            check_pseudo_closed_forms().unwrap(),
            check_pt_evolution().unwrap(),
            check_inner_product_factor().unwrap(),
            check_exceptional_point().unwrap(),
        ] {
            assert!(
                outcome.passed,
                "{}: residual {:.3e} > {:.3e}",
                outcome.id, outcome.residual, outcome.threshold
            );
        }
    }

    #[test]
    fn printed_form_ledger_reproduces() {
        for outcome in check_printed_forms().unwrap() {
            assert!(
                outcome.passed,
                "{}: residual {:.3e} > {:.3e}",
                outcome.id, outcome.residual, outcome.threshold
            );
        }
    }

    #[test]
    fn stochastic_checks_pass_with_default_seed() {
        assert!(check_hermitian_reduction(DEFAULT_SEED).unwrap().passed);
        assert!(check_uncertainty_inequality(DEFAULT_SEED).unwrap().passed);
        assert!(check_mc_cramer_rao(DEFAULT_SEED).unwrap().passed);
    }
}
