use thiserror::Error;

/// Errors raised by the library. Every variant is a rejected precondition;
/// no operation fails for numerical reasons since all arithmetic is exact.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{op}: the zero polynomial is not accepted")]
    ZeroPolynomial { op: &'static str },

    #[error("{op}: degree {found} is below the required minimum {required}")]
    DegreeTooLow {
        op: &'static str,
        required: usize,
        found: usize,
    },

    #[error("{op}: interval endpoints must satisfy lo < hi")]
    EmptyInterval { op: &'static str },

    #[error("{op}: certificate does not carry a sign change")]
    NoSignChange { op: &'static str },

    #[error("probe must lie strictly inside the certified interval")]
    ProbeOutside,

    #[error("tolerance must be positive")]
    NonPositiveTolerance,

    #[error("iteration limit must be positive")]
    ZeroIterationLimit,

    #[error("derivative vanished at iterate {at}")]
    DerivativeVanished { at: String },

    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
