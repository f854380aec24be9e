//! Independent numerical machinery used to validate every closed form:
//! matrix exponential, finite-difference derivatives, a purely numerical
//! QFI evaluator, and a Monte Carlo Cramér–Rao check.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::{DensityFamily, StateFamily};
use crate::hilbert;
use crate::linalg::{self, CMatrix, CVector};

/// Default seed for stochastic checks.
pub const DEFAULT_SEED: u64 = 0x00C0_FFEE;

/// Gauge handling for state-family stencils.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeMode {
    /// Strip the global phase of every stencil point via the projective
    /// decomposition (deterministic first-component gauge).
    FirstComponent,
    /// Phase-rotate the outer stencil points onto the center point.
    OverlapAlign,
}

/// Finite-difference stencil configuration.
#[derive(Clone, Copy, Debug)]
pub struct StencilConfig {
    /// Base step; clamped to [1e-9, 1e-2].
    pub h: f64,
    /// Richardson extrapolation levels (0 = plain central difference).
    pub richardson_levels: u32,
    pub gauge: GaugeMode,
}

impl StencilConfig {
    pub fn with_step(h: f64) -> Self {
        Self {
            h: h.clamp(1e-9, 1e-2),
            richardson_levels: 1,
            gauge: GaugeMode::FirstComponent,
        }
    }

    /// Default step scaled to the evaluation point: h = 1e-5·max(1, |θ|).
    pub fn for_theta(theta: f64) -> Self {
        Self::with_step(1e-5 * theta.abs().max(1.0))
    }

    pub fn gauge(mut self, gauge: GaugeMode) -> Self {
        self.gauge = gauge;
        self
    }

    pub fn plain(mut self) -> Self {
        self.richardson_levels = 0;
        self
    }
}

impl Default for StencilConfig {
    fn default() -> Self {
        Self::with_step(1e-5)
    }
}

// Padé-13 coefficients for the scaling-and-squaring matrix exponential.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring with a [13/13] Padé
/// approximant.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    if !linalg::all_finite_mat(a) {
        return Err(Error::NonFinite("expm input".into()));
    }
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::ShapeMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let theta13 = 5.371920351148152;
    let s = if norm1 > theta13 {
        (norm1 / theta13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|z| z / Complex64::from(2f64.powi(s as i32)));

    let id = linalg::identity(n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * (a6.scale(PADE13[13]) + a4.scale(PADE13[11]) + a2.scale(PADE13[9]))
        + a6.scale(PADE13[7])
        + a4.scale(PADE13[5])
        + a2.scale(PADE13[3])
        + id.scale(PADE13[1]);
    let u = &scaled * u_inner;
    let v = &a6 * (a6.scale(PADE13[12]) + a4.scale(PADE13[10]) + a2.scale(PADE13[8]))
        + a6.scale(PADE13[6])
        + a4.scale(PADE13[4])
        + a2.scale(PADE13[2])
        + id.scale(PADE13[0]);

    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut result = lhs
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NonFinite("singular Padé denominator in expm".into()))?;
    for _ in 0..s {
        result = &result * &result;
    }
    Ok(result)
}

fn gauge_fix(v: &CVector, center: Option<&CVector>, gauge: GaugeMode) -> Result<CVector> {
    match gauge {
        GaugeMode::FirstComponent => {
            let d = hilbert::decompose(v)?;
            Ok(d.psi.scale(d.alpha.exp()))
        }
        GaugeMode::OverlapAlign => Ok(match center {
            Some(anchor) => linalg::align_phase(v, anchor),
            None => v.clone(),
        }),
    }
}

fn central_difference<T, E, D>(theta: f64, h: f64, levels: u32, eval: E, diff: D) -> Result<T>
where
    T: Richardson,
    E: Fn(f64) -> Result<T>,
    D: Fn(&T, &T, f64) -> T,
{
    let stencil = |step: f64| -> Result<T> {
        let plus = eval(theta + step)?;
        let minus = eval(theta - step)?;
        Ok(diff(&plus, &minus, step))
    };
    let mut d = stencil(h)?;
    let mut step = h;
    for _ in 0..levels {
        step /= 2.0;
        let finer = stencil(step)?;
        d = combine_richardson(finer, d);
    }
    Ok(d)
}

trait Richardson {
    fn richardson(fine: Self, coarse: Self) -> Self;
}

impl Richardson for CVector {
    fn richardson(fine: Self, coarse: Self) -> Self {
        (fine.scale(4.0) - coarse).unscale(3.0)
    }
}

impl Richardson for CMatrix {
    fn richardson(fine: Self, coarse: Self) -> Self {
        (fine.scale(4.0) - coarse).unscale(3.0)
    }
}

impl Richardson for f64 {
    fn richardson(fine: Self, coarse: Self) -> Self {
        (4.0 * fine - coarse) / 3.0
    }
}

fn combine_richardson<T: Richardson>(fine: T, coarse: T) -> T {
    T::richardson(fine, coarse)
}

/// Central-difference derivative of a state family, with stencil points
/// gauge-handled per `cfg.gauge`.
pub fn fd_derivative(family: &StateFamily, theta: f64, cfg: &StencilConfig) -> Result<CVector> {
    family.check_domain(theta - cfg.h)?;
    family.check_domain(theta + cfg.h)?;
    let center = match cfg.gauge {
        GaugeMode::OverlapAlign => Some(family.eval(theta)),
        GaugeMode::FirstComponent => None,
    };
    central_difference(
        theta,
        cfg.h,
        cfg.richardson_levels,
        |t| gauge_fix(&family.eval(t), center.as_ref(), cfg.gauge),
        |p: &CVector, m: &CVector, step| (p - m).unscale(2.0 * step),
    )
}

/// Central-difference derivative of a density-matrix family.
pub fn fd_density_derivative(
    family: &DensityFamily,
    theta: f64,
    cfg: &StencilConfig,
) -> Result<CMatrix> {
    central_difference(
        theta,
        cfg.h,
        cfg.richardson_levels,
        |t| Ok(family.eval(t)),
        |p: &CMatrix, m: &CMatrix, step| (p - m).unscale(2.0 * step),
    )
}

/// Relative support threshold for eigenvalue pairs in the spectral sum.
const SUPPORT_TOL: f64 = 1e-12;

/// Purely numerical QFI from the spectral form of the SLD sum.
///
/// Builds ∂_θρ by central differences, expands it in the eigenbasis of
/// ρ(θ), and evaluates
///
///   F = Σ_{λ_k+λ_l > 0} 2|⟨k|∂_θρ|l⟩|²/(λ_k+λ_l) + 12·(tr ρ)·(∂_θα)²,
///
/// where the trailing term carries the norm-factor convention of the
/// projective-space formulation (α = ½ ln tr ρ). This is the reference
/// every structured QFI path is compared against; it shares no code with
/// those paths beyond the eigensolver.
pub fn qfi_oracle_density(family: &DensityFamily, theta: f64, cfg: &StencilConfig) -> Result<f64> {
    let rho = family.eval(theta);
    let drho = fd_density_derivative(family, theta, cfg)?;
    let (lambdas, vecs) = linalg::hermitian_eigen(&rho)?;
    let trace: f64 = lambdas.iter().sum();
    if trace <= 0.0 {
        return Err(Error::NotAState("non-positive trace in oracle".into()));
    }

    let n = lambdas.len();
    let mut f = 0.0;
    for k in 0..n {
        for l in 0..n {
            let denom = lambdas[k] + lambdas[l];
            if denom <= SUPPORT_TOL * trace {
                continue;
            }
            let elem = vecs[k].dotc(&(&drho * &vecs[l]));
            f += 2.0 * elem.norm_sqr() / denom;
        }
    }

    // d/dθ of α = ½ ln tr ρ, from the traces on the same stencil.
    let dalpha = central_difference(
        theta,
        cfg.h,
        cfg.richardson_levels,
        |t| {
            let tr = linalg::trace_re(&family.eval(t));
            if tr <= 0.0 {
                return Err(Error::NotAState("non-positive trace in oracle stencil".into()));
            }
            Ok(0.5 * tr.ln())
        },
        |p: &f64, m: &f64, step| (p - m) / (2.0 * step),
    )?;
    f += 12.0 * trace * dalpha * dalpha;
    Ok(f)
}

/// Numerical QFI of a raw-state family via ρ_θ = |Ψ_θ⟩⟨Ψ_θ|.
pub fn qfi_oracle(family: &StateFamily, theta: f64, cfg: &StencilConfig) -> Result<f64> {
    let fam = family.clone();
    let rho_family = DensityFamily::new(move |t| {
        let psi = fam.eval(t);
        linalg::outer(&psi, &psi)
    });
    qfi_oracle_density(&rho_family, theta, cfg)
}

/// Two-outcome projective measurement model with analytic outcome
/// probability p(θ) of the "+" result.
#[derive(Clone)]
pub struct BinaryMeasurement {
    prob: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Inversion bracket for the maximum-likelihood estimate.
    pub search: (f64, f64),
}

impl BinaryMeasurement {
    pub fn new<F>(prob: F, search: (f64, f64)) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            prob: Arc::new(prob),
            search,
        }
    }

    pub fn prob(&self, theta: f64) -> f64 {
        (self.prob)(theta)
    }

    /// Qubit phase model |ψ_θ⟩ = e^{−iθσ_z}|+⟩ measured along σ_y; its
    /// classical Fisher information saturates the QFI value 4 at θ = 0.
    pub fn qubit_phase() -> Self {
        Self::new(|theta: f64| 0.5 * (1.0 + (2.0 * theta).sin()), (-0.7, 0.7))
    }

    /// Biased coin with success probability θ.
    pub fn coin() -> Self {
        Self::new(|theta: f64| theta, (1e-6, 1.0 - 1e-6))
    }

    /// Maximum-likelihood estimate from an observed success frequency.
    /// Returns `None` when the likelihood is degenerate on the bracket.
    fn mle(&self, freq: f64) -> Option<f64> {
        let (mut lo, mut hi) = self.search;
        let (plo, phi) = (self.prob(lo), self.prob(hi));
        let increasing = phi > plo;
        let (fmin, fmax) = if increasing { (plo, phi) } else { (phi, plo) };
        if freq <= fmin || freq >= fmax {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let pm = self.prob(mid);
            if (pm < freq) == increasing {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// Result of the Monte Carlo Cramér–Rao validation.
#[derive(Clone, Copy, Debug)]
pub struct McReport {
    pub empirical_variance: f64,
    /// (1/F)/shots.
    pub bound: f64,
    pub shots: u64,
    pub trials: u64,
    /// Trials with degenerate likelihood, excluded from the variance.
    pub flagged: u64,
}

impl McReport {
    /// Lower edge of the sampling-tolerance band the variance must clear.
    pub fn band_floor(&self) -> f64 {
        self.bound * (1.0 - 5.0 / (self.trials as f64).sqrt())
    }

    pub fn satisfies_bound(&self) -> bool {
        self.empirical_variance >= self.band_floor()
    }
}

/// Simulate repeated estimation rounds and compare the estimator variance
/// to the Cramér–Rao bound 1/(F·shots).
pub fn mc_cramer_rao(
    model: &BinaryMeasurement,
    theta_true: f64,
    fisher: f64,
    shots: u64,
    trials: u64,
    seed: u64,
) -> Result<McReport> {
    if fisher <= 0.0 {
        return Err(Error::UnboundedVariance(fisher));
    }
    let p = model.prob(theta_true);
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("model probability {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut estimates = Vec::with_capacity(trials as usize);
    let mut flagged = 0u64;
    for _ in 0..trials {
        let mut successes = 0u64;
        for _ in 0..shots {
            if rng.gen::<f64>() < p {
                successes += 1;
            }
        }
        match model.mle(successes as f64 / shots as f64) {
            Some(est) => estimates.push(est),
            None => flagged += 1,
        }
    }
    if estimates.len() < 2 {
        return Err(Error::Precondition("all trials degenerate".into()));
    }
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(McReport {
        empirical_variance: var,
        bound: 1.0 / (fisher * shots as f64),
        shots,
        trials,
        flagged,
    })
}

/// Haar-ish random unitary from the QR decomposition of a complex
/// Gaussian matrix. Test and `check` utility.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    use rand::distributions::Distribution;
    let normal = rand::distributions::Uniform::new(-1.0f64, 1.0);
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(normal.sample(rng), normal.sample(rng))
    });
    let qr = g.qr();
    qr.q()
}

/// Random unit vector. Test and `check` utility.
pub fn random_state(dim: usize, rng: &mut impl Rng) -> CVector {
    use rand::distributions::Distribution;
    let normal = rand::distributions::Uniform::new(-1.0f64, 1.0);
    let v = CVector::from_fn(dim, |_, _| Complex64::new(normal.sample(rng), normal.sample(rng)));
    let n = v.norm();
    v.unscale(n)
}
