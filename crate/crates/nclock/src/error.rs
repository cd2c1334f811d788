use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty lattice domain: no site of spacing {epsilon} lies in the shape")]
    EmptyDomain { epsilon: f64 },
    #[error("map is singular at ({x}, {y})")]
    SingularSample { x: f64, y: f64 },
    #[error("sampling too coarse: consecutive values differ by {gap} rad (>= pi)")]
    Resolution { gap: f64 },
    #[error("scale separation violated: {0}")]
    ScaleSeparation(String),
    #[error("boundary side of length {length} is shorter than {required}")]
    SideTooShort { length: f64, required: f64 },
    #[error("singularity placement: {0}")]
    Placement(String),
    #[error("field values {gap} rad apart across a cell face exceed the tolerance {tolerance}")]
    Discontinuous { gap: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
