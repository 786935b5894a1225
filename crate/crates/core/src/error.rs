use thiserror::Error;

/// Errors produced by the algebraic pipeline and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected an even dimension, got {0}")]
    OddDimension(usize),
    #[error("{0} is singular")]
    Singular(&'static str),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("evolution matrix is singular; the criterion only applies to invertible M")]
    SingularM,
    #[error("lower-left block M21 is singular; the system is not admissible")]
    SingularM21,
    #[error("system is not Hamiltonian: no invertible symmetric factor exists")]
    NotHamiltonian,
    #[error("criterion accepts but no invertible symmetric factor found after {0} attempts")]
    SearchExhausted(usize),
    #[error("companion block has zero constant term")]
    ZeroConstantTerm,
    #[error("companion block polynomial is not even or has odd degree")]
    OddBlock,
    #[error("no symmetric invertible S1 with S1*B1 alternating and S1*B2 symmetric")]
    NoCanonicalForm,
    #[error("force field is not conservative")]
    NotConservative,
    #[error("state became non-finite at t = {time}")]
    NonFinite { time: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
