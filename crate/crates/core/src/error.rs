use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("probability at sample point {index} is not strictly positive")]
    NonPositiveProbability { index: usize },
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: String },
    #[error("empty sample space")]
    EmptySpace,
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("partitions live on different ground sets ({left} vs {right} points)")]
    GroundSetMismatch { left: usize, right: usize },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector given as a ray")]
    ZeroRay,
    #[error("undefined extended sum +inf + -inf")]
    UndefinedExtendedSum,
    #[error("alpha must lie in (0, 1], got {0}")]
    InvalidAlpha(String),
    #[error("polyhedron is not a cone")]
    NotACone,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron is empty")]
    Empty,
    #[error("conditional core is empty on atom {atom}")]
    EmptyCore { atom: usize },
    #[error("random set is empty at sample point {index}")]
    EmptyValue { index: usize },
    #[error("sequence element {step} is not measurable w.r.t. its filtration partition")]
    NotAdapted { step: usize },
    #[error("partition {step} does not refine its predecessor")]
    NotAFiltration { step: usize },
    #[error("{0} is not measurable w.r.t. the conditioning partition")]
    NotMeasurable(&'static str),
    #[error("crossed spread on atom {atom}: esssup bid {bid} exceeds essinf ask {ask}")]
    CrossedSpread { atom: usize, bid: String, ask: String },
    #[error("invalid bid/ask at sample point {index}: need 0 < bid <= ask")]
    InvalidSpread { index: usize },
    #[error("{0} must be finite")]
    NotFinite(&'static str),
    #[error("partition is not coarser than the conditioning partition")]
    NotCoarser,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Name of the violated condition, e.g. `NotNormalized`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveProbability { .. } => "NonPositiveProbability",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::EmptySpace => "EmptySpace",
            Error::NotAPartition(_) => "NotAPartition",
            Error::GroundSetMismatch { .. } => "GroundSetMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroRay => "ZeroRay",
            Error::UndefinedExtendedSum => "UndefinedExtendedSum",
            Error::InvalidAlpha(_) => "InvalidAlpha",
            Error::NotACone => "NotACone",
            Error::Unbounded => "Unbounded",
            Error::Empty => "Empty",
            Error::EmptyCore { .. } => "EmptyCore",
            Error::EmptyValue { .. } => "EmptyValue",
            Error::NotAdapted { .. } => "NotAdapted",
            Error::NotAFiltration { .. } => "NotAFiltration",
            Error::NotMeasurable(_) => "NotMeasurable",
            Error::CrossedSpread { .. } => "CrossedSpread",
            Error::InvalidSpread { .. } => "InvalidSpread",
            Error::NotFinite(_) => "NotFinite",
            Error::NotCoarser => "NotCoarser",
            Error::Parse(_) => "Parse",
        }
    }
}
