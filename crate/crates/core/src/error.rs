use thiserror::Error;

/// Errors raised across the library. Undecided outcomes are values, not errors,
/// except where a caller explicitly requires a decided answer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero input: {0}")]
    Zero(&'static str),
    #[error("degree out of range: {0}")]
    Degree(String),
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("singular base locus: repeated factor {0}")]
    SingularBaseLocus(String),
    #[error("degenerate pencil: every member is singular")]
    DegeneratePencil,
    #[error("pencil matrices must be symmetric 5x5")]
    NotSymmetric,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("not invertible modulo P: {0}")]
    NotInvertible(String),
    #[error("ramified prime {0}")]
    Ramified(u64),
    #[error("insufficient certificates: square class of factor {0} undecided")]
    Undecided(usize),
    #[error("P(b) = 0: b is a root")]
    PoleAtB,
    #[error("subgroup is not transitive; orbits {0:?}")]
    NotTransitive(Vec<Vec<u8>>),
    #[error("r = {given} inconsistent with acting group (expected {expected})")]
    FieldDegree { given: usize, expected: usize },
    #[error("inadmissible class {0}")]
    Inadmissible(String),
    #[error("no prime found below bound {bound} for class {class}")]
    BoundExhausted { bound: u64, class: String },
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("pairing is not alternating")]
    NotAlternating,
    #[error("no admissible move: {0}")]
    NoMove(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
