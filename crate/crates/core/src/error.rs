use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unstable topology (g={g}, n={n}): need 2g-2+n > 0")]
    Unstable { g: u32, n: u32 },
    #[error("({g},{n}) is outside the admissible range: {reason}")]
    OutOfRange { g: u32, n: u32, reason: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("series truncated at order {available}, coefficient {requested} requested")]
    Truncation { requested: i64, available: i64 },
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("Newton iteration did not converge after {iterations} steps (last residual {residual:e}, last r {r})")]
    NoConvergence { iterations: usize, residual: f64, r: f64 },
    #[error("Z(r) has no zero on the physical branch (closest |Z| = {residual:e} at r = {r}): the weight is supercritical")]
    NoRoot { residual: f64, r: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not reach tolerance (error estimate {estimate:e})")]
    Quadrature { estimate: f64 },
    #[error("invalid weight at {pointer}: {message}")]
    InvalidWeight { pointer: String, message: String },
    #[error("missing table entry: {0}")]
    MissingEntry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
