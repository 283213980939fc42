use thiserror::Error;

/// Errors shared by all modules. Diagnostic payloads are converted to `f64`
/// so the error type stays independent of the working scalar.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible dimensions: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("matrix is not Hermitian (residual {residual:.3e}, tolerance {tol:.3e})")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("iteration failed to converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("degenerate singular-value block could not be stabilized")]
    DegenerateBlockFailure,

    #[error("matrix is not positive (offending eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("logarithmic mean requires positive arguments (got {0:.3e}, {1:.3e})")]
    NonPositiveInput(f64, f64),

    #[error("trace must be 1 (got {0:.6e})")]
    InvalidTrace(f64),

    #[error("support violation: weight {weight:.3e} on null eigenvalue {eigenvalue:.3e}")]
    SupportViolation { weight: f64, eigenvalue: f64 },

    #[error("state is rank deficient (minimum eigenvalue {0:.3e})")]
    RankDeficient(f64),

    #[error("sigma is rank deficient (minimum eigenvalue {0:.3e})")]
    RankDeficientSigma(f64),

    #[error("tilde-orthonormality residual {0:.3e} exceeds tolerance")]
    TildeOrthonormalityFailure(f64),

    #[error("weights must satisfy the boundary simplex constraint: {0}")]
    SimplexViolation(String),

    #[error("filter is singular (|det| = {0:.3e})")]
    SingularFilter(f64),

    #[error("ray point at x = {x:.6e} is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositiveRay { x: f64, eigenvalue: f64 },

    #[error("state is not on the separable boundary (signed concurrence {0:.3e})")]
    BoundaryViolation(f64),

    #[error("minimizer iterate lost the support of rho")]
    SupportCollapse,
}

pub type Result<T> = std::result::Result<T, Error>;
