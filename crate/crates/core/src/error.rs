use thiserror::Error;

/// Errors surfaced by the QFI routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A state vector with (numerically) zero norm cannot be decomposed.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// A caller-visible precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Matrix is not a valid (Hermitian, positive semidefinite) density matrix.
    #[error("not a state: {0}")]
    NotAState(String),

    /// Operand dimensions do not match.
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    /// The off-diagonal coupling of the reduced Hamiltonian vanishes.
    #[error("singular delta: off-diagonal coefficient is zero")]
    SingularDelta,

    /// Eigenvalue pairing across the finite-difference stencil failed.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// The evolution family is not generated by the supplied generator.
    #[error("inconsistent context: {0}")]
    InconsistentContext(String),

    /// The generator is not Hermitian; use the non-Hermitian generator path.
    #[error("non-Hermitian generator (max deviation {deviation:.3e}); use qfi_generator_nonhermitian")]
    NonHermitianGenerator { deviation: f64 },

    /// Cramér–Rao bound is undefined for non-positive Fisher information.
    #[error("unbounded variance: Fisher information {0} is not positive")]
    UnboundedVariance(f64),

    /// Operation requires a different PT regime.
    #[error("regime error: {0}")]
    RegimeError(String),

    /// The closed-form evolution operator diverges near the exceptional point.
    #[error("near exceptional point: |cos x| = {0:.3e} below threshold")]
    NearExceptionalPoint(f64),

    /// Broken-regime amplitude growth exceeded the representable range.
    #[error("amplitude overflow in broken regime at theta = {theta}")]
    AmplitudeOverflow { theta: f64 },

    /// Only eigenstate initialization is supported at the exceptional point.
    #[error("unsupported at exceptional point: {0}")]
    UnsupportedAtEp(String),

    /// Parameter outside the family's domain.
    #[error("domain violation: theta = {theta} outside [{lo}, {hi}]")]
    DomainViolation { theta: f64, lo: f64, hi: f64 },

    /// Input contains NaN or infinite entries.
    #[error("non-finite input: {0}")]
    NonFinite(String),

    /// Grid search over an empty grid.
    #[error("empty grid")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
