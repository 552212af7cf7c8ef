use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A net could not be built because the generating function failed at a
    /// grid point.
    #[error("construction failed at ({m}, {n}): {reason}")]
    Construction { m: usize, n: usize, reason: String },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    /// A hypothesis of the requested operation does not hold. `witness` is a
    /// human-readable description of where it fails.
    #[error("precondition violated: {reason} (witness: {witness})")]
    PreconditionViolated { reason: String, witness: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate density at m = {m}: the discriminant b(m)^2 - 4a(m) vanishes")]
    DegenerateDensity { m: u64 },

    #[error("wrong case: {0}")]
    WrongCase(String),

    #[error("numerical budget exhausted after {evaluations} evaluations (best residual {best_residual:e})")]
    NumericalBudget {
        evaluations: u64,
        best_residual: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),
}
