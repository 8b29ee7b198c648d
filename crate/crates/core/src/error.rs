use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid `{field}`: {constraint}")]
    InvalidParameter { field: String, constraint: String },

    #[error("time grid truncates the pulse: estimated photon-number loss {loss:.3e} (need the grid to span center ± 5·T)")]
    GridTooShort { loss: f64 },

    #[error("envelopes live on different time grids")]
    GridMismatch,

    #[error("envelope photon number {0:.3e} is too small for a normalized comparison")]
    EmptyEnvelope(f64),

    #[error("coherence steady-state matrix is singular (zero damping?)")]
    SingularMatrix,

    #[error("step size too large: {0}")]
    StepSize(String),

    #[error("propagation grid rejected: {0}")]
    PropagationGrid(String),

    #[error("non-finite field encountered at z-slice {slice}")]
    NonFinite { slice: usize },

    #[error("query off grid: {0}")]
    OffGrid(String),

    #[error("time bins overlap (cross-overlap {overlap:.3e}, separation must be at least 5·T)")]
    OverlappingBins { overlap: f64 },

    #[error("unsupported by tier: {0}")]
    Unsupported(String),

    #[error("envelope file: {0}")]
    EnvelopeFile(String),
}

impl Error {
    pub(crate) fn invalid(field: &str, constraint: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_owned(),
            constraint: constraint.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
