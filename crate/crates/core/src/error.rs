use crate::rational::Rational;

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("party count {0} out of supported range 1..=6")]
    PartyCount(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("zero tensor has no canonical orbit form")]
    ZeroTensor,

    #[error("element is not an involution")]
    NotAnInvolution,

    #[error("involutions do not commute")]
    NonCommutingInvolutions,

    #[error("cone is not pointed; lineality space has dimension {}", lineality_basis.len())]
    NotPointed { lineality_basis: Vec<Vec<Rational>> },

    #[error("vector is not a member of the cone")]
    NotInCone,

    #[error("lift precondition failed: {0}")]
    Lift(#[from] LiftFailure),

    #[error("only k=2 settings and l=2 outcomes are supported here")]
    UnsupportedScenario,
}

/// Which hypothesis of a lifting construction failed, with a certificate
/// where one exists.
#[derive(Debug, Clone, thiserror::Error)]
pub enum LiftFailure {
    #[error("tensor is not even under the involution")]
    NotEven,

    #[error("x {} y is not no-signaling", if *plus_sign { "+" } else { "-" })]
    SumNotMember {
        plus_sign: bool,
        /// Violated positivity functional.
        certificate: Vec<Rational>,
    },

    #[error("input box is not no-signaling")]
    NotNoSignaling { certificate: Vec<Rational> },

    #[error("eigenspace condition fails; residual is nonzero")]
    EigenCondition { residual: Vec<Rational> },

    #[error("functional is negative on a deterministic strategy")]
    NotBellInequality { strategy: Vec<Rational> },
}
