use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape parameters: {0}")]
    InvalidShape(String),

    #[error("inadmissible problem: {0}")]
    Inadmissible(String),

    #[error("resolution {resolution} is below the minimum of {minimum}")]
    ResolutionTooSmall { resolution: usize, minimum: usize },

    #[error("raster of {width}x{height} pixels exceeds platform limits")]
    ResolutionOverflow { width: usize, height: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("opening radius {radius} is smaller than the pixel spacing {spacing}")]
    RadiusBelowSpacing { radius: f64, spacing: f64 },

    #[error("graph needs {required} bytes, budget is {budget} bytes")]
    MemoryBudget { required: u64, budget: u64 },

    #[error("no valid candidate to choose from")]
    NoValidCandidate,

    #[error("tangency construction is infeasible: {0}")]
    Infeasible(String),

    #[error("malformed graymap: {0}")]
    Graymap(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;
