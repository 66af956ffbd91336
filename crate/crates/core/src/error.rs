use thiserror::Error;

/// Errors raised by the numerical core and the scenario builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension must be positive")]
    EmptyDimension,

    #[error("expected {expected} entries, found {found}")]
    BadLength { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("zero vector cannot define a ray")]
    ZeroVector,

    #[error("eigenvalues {first} and {second} coincide within {tol:e}")]
    DegenerateSpectrum { first: f64, second: f64, tol: f64 },

    #[error("basis is not orthonormal (max deviation {deviation:e})")]
    NonOrthonormalBasis { deviation: f64 },

    #[error("unsupported local dimension {0}")]
    UnsupportedDimension(usize),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("trace has imaginary part {0:e}")]
    NonNegligibleImaginaryPart(f64),

    #[error("probability {value:e} at cell ({row}, {col}) is negative")]
    NegativeProbability { row: usize, col: usize, value: f64 },

    #[error("joint table sums to {0}, not 1")]
    NotNormalizedTable(f64),

    #[error("cell ({row}, {col}) is outside a {rows}x{cols} table")]
    BadCellIndex { row: usize, col: usize, rows: usize, cols: usize },

    #[error("shot record ({row}, {col}) does not fit a {rows}x{cols} table")]
    ShapeMismatch { row: usize, col: usize, rows: usize, cols: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
}

pub type Result<T> = std::result::Result<T, Error>;
