use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate triangle {element}: signed area {area:e}")]
    DegenerateElement { element: usize, area: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index ({row}, {col}) out of range for a {n_rows}x{n_cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// GMRES hit its iteration cap. The best iterate is kept so callers can
    /// decide whether it is usable.
    #[error("GMRES did not converge in {iterations} iterations (relative residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("time step {step} failed: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("study level {level} (nx = {nx}, dt = {dt}) failed: {source}")]
    Level {
        level: usize,
        nx: usize,
        dt: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
