use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is numerically singular (pivot {pivot:e} at column {col})")]
    Singular { col: usize, pivot: f64 },
    #[error("matrix is not symmetric (|s_ij - s_ji| = {defect:e})")]
    Asymmetric { defect: f64 },
    #[error("{method} did not converge in {iters} iterations (last residual {residual:e})")]
    NoConvergence {
        method: &'static str,
        iters: usize,
        residual: f64,
    },
    #[error("could not draw a non-degenerate instance after {retries} retries")]
    DegenerateInstance { retries: usize },
    #[error("sign system is identically zero")]
    DegenerateSystem,
    #[error("spectral gap too small: sigma_(n-1) = {sigma:e}, ||C||_F = {frob:e}")]
    DegenerateGap { sigma: f64, frob: f64 },
    #[error("all magnitudes are zero")]
    AllZeroMagnitudes,
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("invalid sign vector: entry {index} is {value}")]
    InvalidSign { index: usize, value: f64 },
    #[error("brute-force search refused for n = {n} (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("sign solution is ambiguous: best residual {best:e}, runner-up {runner_up:e}")]
    Ambiguous { best: f64, runner_up: f64 },
    #[error("flip state already converged (residual norm {norm:e})")]
    AlreadyConverged { norm: f64 },
    #[error("operation requires ground-truth signs")]
    MissingTruth,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
