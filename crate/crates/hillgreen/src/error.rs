use thiserror::Error;

use crate::green::BcKind;

/// Failure modes shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("grid must have at least 2 nodes, got {n}")]
    InvalidGrid { n: usize },
    #[error("potential is not defined on all of [0,1]: {0}")]
    PotentialDomain(String),
    #[error("argument {value} outside [0,1]")]
    OutOfDomain { value: f64 },
    #[error("{bc} problem is resonant: boundary determinant {det:e} is below threshold {threshold:e}")]
    Resonant {
        bc: BcKind,
        det: f64,
        threshold: f64,
    },
    #[error("identity {id} is degenerate: nondegeneracy scalar {value:e} is below threshold")]
    DegenerateIdentity { id: String, value: f64 },
    #[error("integral operator is not a contraction: sup_t int |G(t,s)| K(s) ds = {p} >= 1")]
    NotContractive { p: f64 },
    #[error("Picard iteration did not reach tolerance within {iters} steps (last increment {last_increment:e})")]
    MaxIterExceeded { iters: usize, last_increment: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
