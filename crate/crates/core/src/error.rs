use crate::int::IVec2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("({a}, {b}) is not a reduced commensurate pair: {reason}")]
    InvalidAngle { a: i64, b: i64, reason: &'static str },

    #[error("closed-form coupling matrix is not integral for ({a}, {b})")]
    NonIntegralCoupling { a: i64, b: i64 },

    #[error("search radius {radius} exceeds the guard {limit}")]
    RadiusGuard { radius: f64, limit: f64 },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("potential is not a honeycomb potential (first violation at {mode})")]
    NotHoneycomb { mode: IVec2 },

    #[error("potential lattice does not match the plane-wave basis lattice")]
    LatticeMismatch,

    #[error("no member of the orbit of {orbit:?} has a vanishing shifted coefficient")]
    ZeroPatternFailure { orbit: [IVec2; 3] },

    #[error("degenerate second-order denominator at modes {modes:?}")]
    DegenerateDenominator { modes: Vec<IVec2> },

    #[error("matrix dimension {dim} exceeds the eigensolver guard {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("no two-fold eigenvalue cluster found at K*")]
    NoTwoFoldCluster,

    #[error("mixed sector labels in the cluster at E = {energy}")]
    MixedSectors { energy: f64 },

    #[error("band tracking is ambiguous at ring radius {radius}")]
    BandTracking { radius: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Coarse classification used to map failures onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    ComputeGuard,
    Compute,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidAngle { .. }
            | Error::InvalidPotential(_)
            | Error::NotHoneycomb { .. }
            | Error::LatticeMismatch
            | Error::InvalidArgument(_) => ErrorClass::InvalidInput,
            Error::RadiusGuard { .. } | Error::DimensionGuard { .. } => ErrorClass::ComputeGuard,
            _ => ErrorClass::Compute,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
