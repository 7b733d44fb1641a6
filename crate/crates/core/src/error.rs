use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{op}: shape mismatch, {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix data has {actual} entries, expected {expected}")]
    InvalidLength { expected: usize, actual: usize },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("density operator has no eigenvalue above the rank cut")]
    ZeroRank,

    #[error("invalid lift: {0}")]
    InvalidLift(String),

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("unitary does not commute with P(sigma) (residual {residual:e})")]
    NotInGaugeGroup { residual: f64 },

    #[error("not an element of the gauge algebra: {0}")]
    NotInGaugeAlgebra(String),

    #[error("vector is not tangent to the lift manifold (residual {residual:e})")]
    NotTangent { residual: f64 },

    #[error("{relation} violated (slack {slack:e})")]
    RelationViolated { relation: &'static str, slack: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
