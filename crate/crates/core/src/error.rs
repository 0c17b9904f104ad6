use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter is outside its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The blocks passed to a partition constructor do not form a set
    /// partition of `{1, …, N}`.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// An excitation label does not fit the partition it is paired with.
    #[error("label/partition mismatch: {0}")]
    LabelMismatch(String),

    /// A position sample has the wrong number of coordinates.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Hermite order above the configured recurrence cap.
    #[error("Hermite order {order} exceeds the configured maximum {max}")]
    HermiteOrderOverflow { order: usize, max: usize },

    /// Visibility is undefined when the separable bound is not positive
    /// or the expectation value is negative.
    #[error("visibility undefined: expectation {expectation}, separable bound {bound}")]
    UndefinedVisibility { expectation: f64, bound: f64 },

    /// The optimum over the particle number diverges as the coupling
    /// vanishes.
    #[error("optimal particle number diverges for zero coupling ratio")]
    DivergentOptimum,

    /// A mean particle number that no distribution on the scanned support
    /// can attain.
    #[error("infeasible mean particle number {mean}: must lie in [0, {n_max}]")]
    InfeasibleMean { mean: f64, n_max: u64 },

    /// A computed optimality certificate failed verification.
    #[error("optimality certificate violated: {0}")]
    CertificateViolation(String),

    /// The grand-canonical series cannot converge for the given fugacity.
    #[error("thermal series diverges: {0}")]
    SeriesDivergence(String),

    /// Root bracketing or bisection failed.
    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// The mean particle number 0 is only reached in the limit of
    /// infinite fugacity parameter.
    #[error("target mean particle number 0 is a boundary case (alpha -> +inf)")]
    VacuumBoundary,

    /// A requested dense matrix would exceed the desk-scale budget.
    #[error("basis budget exceeded: {rows} rows > {budget}")]
    BudgetExceeded { rows: usize, budget: usize },

    /// An iterative eigensolver ran out of iterations.
    #[error("eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
