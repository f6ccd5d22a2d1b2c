use num_bigint::BigInt;
use thiserror::Error;

use crate::fan::{Cone, FanViolation};
use crate::stacky::DataViolation;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid fan: {0}")]
    InvalidFan(FanViolation),
    #[error("invalid data: {0}")]
    InvalidData(DataViolation),
    #[error("rays span a sublattice of rank {rank} in a lattice of rank {lattice_rank}; split off the torus factor first")]
    NonSpanningRays { rank: usize, lattice_rank: usize },
    #[error("cone {0:?} is not in the fan")]
    ConeNotInFan(Cone),
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected rigid data (no root constructions), found {0}")]
    NotRigid(usize),
    #[error("underlying lattice, fan or ray vectors differ: {0}")]
    MismatchedUnderlyingData(String),
    #[error("r-list {0:?} is not a divisor chain; canonicalize first")]
    NotInChainForm(Vec<BigInt>),
    #[error("the zero polynomial has no well-defined degree")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous: term {first} and term {second} have different degrees")]
    NotHomogeneous { first: usize, second: usize },
    #[error("morphisms have different source, target or chi data")]
    MismatchedSourceTarget,
    #[error("source fan is not complete")]
    SourceNotComplete,
    #[error("rays of the target fan do not span")]
    TargetNotSpanning,
    #[error("malformed morphism data: {0}")]
    MalformedMorphism(String),
}

impl Error {
    /// Stable identifier for machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidFan(_) => "invalid_fan",
            Error::InvalidData(_) => "invalid_data",
            Error::NonSpanningRays { .. } => "non_spanning_rays",
            Error::ConeNotInFan(_) => "cone_not_in_fan",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::NotRigid(_) => "not_rigid",
            Error::MismatchedUnderlyingData(_) => "mismatched_underlying_data",
            Error::NotInChainForm(_) => "not_in_chain_form",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::NotHomogeneous { .. } => "not_homogeneous",
            Error::MismatchedSourceTarget => "mismatched_source_target",
            Error::SourceNotComplete => "source_not_complete",
            Error::TargetNotSpanning => "target_not_spanning",
            Error::MalformedMorphism(_) => "malformed_morphism",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
