use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max entry deviation {deviation:.3e}, tolerance {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(
        "numerical invariant breached at t = {time}: |tr rho - 1| = {trace_err:.3e}, \
         hermiticity deviation = {herm_err:.3e} (reduce dt or increase the hierarchy depth)"
    )]
    InvariantBreach {
        time: f64,
        trace_err: f64,
        herm_err: f64,
    },

    #[error(
        "hierarchy did not converge by depth {max_depth}: last discrepancy {discrepancy:.3e} \
         (tolerance {tolerance:.3e})"
    )]
    ConvergenceFailure {
        max_depth: usize,
        discrepancy: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
