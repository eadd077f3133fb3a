use thiserror::Error;

/// Coarse classification used by callers that map errors to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The inputs are structurally inconsistent (dimensions, exponents, names).
    Config,
    /// The inputs are well-formed but violate a precondition of the operation
    /// (e.g. a point lies outside the set it must belong to).
    Domain,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("exponent must satisfy 1 < p < inf, got {0}")]
    InvalidExponent(f64),
    #[error("space dimension must be at least 1, got {0}")]
    InvalidDimension(usize),
    #[error("atom {id:?} must have finite positive mass, got {mass}")]
    InvalidMass { id: String, mass: f64 },
    #[error("duplicate atom id {0:?}")]
    DuplicateAtom(String),
    #[error("unknown atom id {0:?}")]
    UnknownAtom(String),
    #[error("coordinate count mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("value count mismatch: space has {atoms} atoms, got {got} values")]
    ValueCountMismatch { atoms: usize, got: usize },
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("coefficient count {coeffs} does not match function count {functions}")]
    CoefficientMismatch { coeffs: usize, functions: usize },
    #[error("{0} must not be empty")]
    EmptySelection(&'static str),
    #[error("radius/bound must be finite and positive, got {0}")]
    InvalidRadius(f64),
    #[error("point lies outside the ball: norm {norm} > radius {radius}")]
    OutsideBall { norm: f64, radius: f64 },
    #[error("point does not belong to the set ({0})")]
    NotInSet(String),
    #[error("{0}")]
    UnsupportedSet(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptySelection(_) | Error::OutsideBall { .. } | Error::NotInSet(_) => {
                ErrorKind::Domain
            }
            _ => ErrorKind::Config,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
