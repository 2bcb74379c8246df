use thiserror::Error;

/// Errors produced by state/operator construction and protocol runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("dimension {dim} exceeds the {what} cap of {cap}")]
    SizeLimit {
        dim: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("state vector is not normalized (|norm^2 - 1| = {defect:.3e})")]
    NotNormalized { defect: f64 },

    #[error("matrix fails the unitarity certificate (defect {defect:.3e} > {tol:.3e})")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("non-finite amplitude at flat index {0}")]
    NonFiniteAmplitude(usize),

    #[error(
        "input did not herald a Bell state: control residual {residual:.3e} exceeds {threshold:.3e}"
    )]
    NonHeraldedInput { residual: f64, threshold: f64 },

    #[error("invalid Schmidt coefficient list: {0}")]
    InvalidSchmidt(String),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
