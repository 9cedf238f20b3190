use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("array axis {axis:?} is not orthogonal to boresight {boresight:?}")]
    NotOrthogonal { axis: [f64; 2], boresight: [f64; 2] },

    #[error("AMAF element {amaf} and RIS element {ris} coincide")]
    CoincidentElements { amaf: usize, ris: usize },

    #[error("index out of range: {what} {index} (len {len})")]
    IndexOutOfRange { what: &'static str, index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("RIS excitation is identically zero")]
    ZeroExcitation,

    #[error("at grid point {point}: {source}")]
    GridPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// True for failures of the numerical kernels rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. } | Error::ZeroExcitation | Error::CoincidentElements { .. } => true,
            Error::GridPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
