//! Parameterized families: the θ ↦ state / operator / density-matrix
//! mappings every QFI routine consumes.

use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

type VecFn = Arc<dyn Fn(f64) -> CVector + Send + Sync>;
type MatFn = Arc<dyn Fn(f64) -> CMatrix + Send + Sync>;

/// θ ↦ raw state vector, possibly unnormalized.
#[derive(Clone)]
pub struct StateFamily {
    eval: VecFn,
    derivative: Option<VecFn>,
    domain: RangeInclusive<f64>,
}

/// θ ↦ operator (an evolution operator U_θ, typically).
#[derive(Clone)]
pub struct OperatorFamily {
    eval: MatFn,
    domain: RangeInclusive<f64>,
}

/// θ ↦ density matrix (Hermitian PSD, trace need not be one).
#[derive(Clone)]
pub struct DensityFamily {
    eval: MatFn,
    domain: RangeInclusive<f64>,
}

impl StateFamily {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(f64) -> CVector + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            derivative: None,
            domain: f64::NEG_INFINITY..=f64::INFINITY,
        }
    }

    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(f64) -> CVector + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    pub fn with_domain(mut self, domain: RangeInclusive<f64>) -> Self {
        self.domain = domain;
        self
    }

    pub fn eval(&self, theta: f64) -> CVector {
        (self.eval)(theta)
    }

    pub fn analytic_derivative(&self, theta: f64) -> Option<CVector> {
        self.derivative.as_ref().map(|d| d(theta))
    }

    pub fn domain(&self) -> &RangeInclusive<f64> {
        &self.domain
    }

    pub fn check_domain(&self, theta: f64) -> Result<()> {
        if self.domain.contains(&theta) {
            Ok(())
        } else {
            Err(Error::DomainViolation {
                theta,
                lo: *self.domain.start(),
                hi: *self.domain.end(),
            })
        }
    }

    /// Checks that the analytic derivative (when present) agrees with a
    /// plain central difference at `theta` to relative tolerance `tol`.
    pub fn validate_derivative(&self, theta: f64, h: f64, tol: f64) -> Result<()> {
        let Some(analytic) = self.analytic_derivative(theta) else {
            return Ok(());
        };
        let fd = (self.eval(theta + h) - self.eval(theta - h)).unscale(2.0 * h);
        let scale = analytic.norm().max(1.0);
        let err = (&fd - &analytic).norm() / scale;
        if err > tol {
            return Err(Error::InconsistentContext(format!(
                "analytic derivative disagrees with finite differences: rel err {err:.3e}"
            )));
        }
        Ok(())
    }
}

impl OperatorFamily {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            domain: f64::NEG_INFINITY..=f64::INFINITY,
        }
    }

    pub fn with_domain(mut self, domain: RangeInclusive<f64>) -> Self {
        self.domain = domain;
        self
    }

    pub fn eval(&self, theta: f64) -> CMatrix {
        (self.eval)(theta)
    }

    pub fn domain(&self) -> &RangeInclusive<f64> {
        &self.domain
    }
}

impl DensityFamily {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            domain: f64::NEG_INFINITY..=f64::INFINITY,
        }
    }

    pub fn with_domain(mut self, domain: RangeInclusive<f64>) -> Self {
        self.domain = domain;
        self
    }

    pub fn eval(&self, theta: f64) -> CMatrix {
        (self.eval)(theta)
    }

    pub fn domain(&self) -> &RangeInclusive<f64> {
        &self.domain
    }

    /// Rank-1 family |Ψ_θ⟩⟨Ψ_θ| built from a state family.
    pub fn from_pure(states: StateFamily) -> Self {
        let domain = states.domain().clone();
        Self::new(move |theta| {
            let psi = states.eval(theta);
            crate::linalg::outer(&psi, &psi)
        })
        .with_domain(domain)
    }
}
