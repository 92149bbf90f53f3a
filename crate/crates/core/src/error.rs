//! Error type shared by every stage.

use thiserror::Error;

use crate::arith::interval::RatInterval;
use crate::Rat;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument outside the supported domain: {0}")]
    Domain(String),
    #[error("polynomial vanishes at interval endpoint {0}")]
    EndpointRoot(Rat),
    #[error("polynomial has a repeated root in the domain")]
    NotSquarefree,
    #[error("sign condition fails on the {side} side near {witness}")]
    SignViolation { side: String, witness: RatInterval },
    #[error("f(0) and its Fourier transform at 0 differ: {0}")]
    Normalization(String),
    #[error("length exclusion budget fails on {0}")]
    BudgetViolation(RatInterval),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("precondition fails: {0}")]
    PreconditionViolation(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("optimizer made no progress after {0} iterations")]
    NoProgress(usize),
    #[error("Gegenbauer coefficient {0} is negative")]
    ExpansionNegative(usize),
    #[error("design coefficient {0} is not positive")]
    NonpositiveCoefficient(usize),
    #[error("projected enumeration of {projected} nodes exceeds the cap {cap}")]
    BoundTooLarge { projected: u64, cap: u64 },
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("pair ({0}, {1}) has inner product {2} outside the expected classes")]
    UnclassifiablePair(usize, usize, String),
    #[error("intersection counts are not constant: {0}")]
    NotAScheme(String),
    #[error("perturbation size {0} is not below 1/10")]
    SigmaTooLarge(String),
    #[error("missing scheme fact: {0}")]
    MissingSchemeFact(String),
    #[error("{0} minors exceed the configured limit")]
    TooManyMinors(u64),
    #[error("missing witness configuration: {0}")]
    MissingWitness(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
