use crate::exactalg::tower::{AsSplit, NonInvertible, Splitting, TowerError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("degree map inconsistent on relator {index}: exponent sum {sum}")]
    InconsistentDegree { index: usize, sum: i64 },
    #[error("presentation has no relators")]
    EmptyRelators,
    #[error("not a knot group presentation: {0}")]
    NotAKnotGroup(String),
    #[error("braid closure has {0} components, expected a knot")]
    MultiComponent(usize),
    #[error("hypothesis fails: {0}")]
    HypothesisFailed(String),
    #[error("linear system infeasible: {0}")]
    Infeasible(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Arith(#[from] NonInvertible),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

impl AsSplit for Error {
    fn as_split(&self) -> Option<&Splitting> {
        match self {
            Error::Arith(e) | Error::Tower(TowerError::Arith(e)) => e.as_split(),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
