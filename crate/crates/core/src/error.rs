use thiserror::Error;

/// Errors raised by the analytic and algebraic kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconsistent bundle data: {0}")]
    Inconsistency(String),

    #[error("stable isotropy is ambiguous at r = {point}: {detail}")]
    Ambiguity { point: f64, detail: String },

    #[error("boundary map error: {0}")]
    BoundaryMap(String),

    #[error("numerical tolerance exceeded: {0}")]
    NumericalTolerance(String),

    #[error(
        "resolution error: phase step {step:.4} rad at sample {index} reaches pi/2; refine the grid"
    )]
    Resolution { index: usize, step: f64 },

    #[error("loop passes too close to zero: |u| = {modulus:.3e} at sample {index}")]
    NearZero { index: usize, modulus: f64 },

    #[error("winding total {value} is not within tolerance of an integer")]
    Normalization { value: f64 },

    #[error("homotopy path error: {0}")]
    Path(String),

    #[error("integrability error: {0}")]
    Integrability(String),

    #[error("six-term sequence is under-determined: nonzero corner group(s) {0}")]
    UnderDetermined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
