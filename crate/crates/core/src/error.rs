use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank {0} is not supported (need l >= 4)")]
    RankTooSmall(usize),
    #[error("operands live in different algebras (rank {0} vs {1})")]
    RankMismatch(usize, usize),
    #[error("operands belong to different algebra handles ({0} vs {1})")]
    HandleMismatch(String, String),
    #[error("expected a degree-1 Clifford element")]
    NotLinear,
    #[error("commutator left the span of the Lie basis: {0}")]
    OutsideBasis(String),
    #[error("level k = {0} is critical (k = -h^vee)")]
    CriticalLevel(String),
    #[error("degree {degree} exceeds the solver bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },
    #[error("{0} is not a diagram symmetry of D_4")]
    NotDiagramSymmetry(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
