use thiserror::Error;

use crate::stabgroup::ValidityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(u64),

    #[error("residue {value} out of range for modulus {modulus}")]
    ResidueOutOfRange { value: u64, modulus: u64 },

    #[error("factor index {index} out of range ({count} factors)")]
    FactorIndex { index: usize, count: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dense size {size} exceeds budget {budget}")]
    DenseBudget { size: u128, budget: usize },

    #[error("group enumeration exceeded budget of {0} elements")]
    EnumerationBudget(usize),

    #[error("search space of {size} candidates exceeds budget {budget}")]
    SearchBudget { size: u128, budget: u128 },

    #[error("generators do not define a stabilizer state: {0}")]
    NotAStabilizerState(ValidityReport),

    #[error("exponent {value} at position {position} is not divisible by {divisor}")]
    Divisibility { position: usize, value: u64, divisor: u64 },

    #[error("phase exponent {gamma} of element {element} cannot be carried to the factor Pauli group (needs a multiple of {divisor})")]
    PhaseMismatch { element: usize, gamma: u64, divisor: u64 },

    #[error("no computational basis seed survives projection")]
    NoSurvivingSeed,

    #[error("invalid party subset {subset:?} for {parties} parties")]
    InvalidSubset { subset: Vec<usize>, parties: usize },

    #[error("invalid adjacency matrix: {0}")]
    InvalidAdjacency(String),

    #[error("merge needs a nonempty set of factors")]
    EmptyMerge,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {q} is not a prime power")]
    NotPrimePower { line: usize, q: u64 },

    #[error("conflicting facts for (n={n}, q={q}): {first} vs {second}")]
    FactConflict { n: usize, q: u64, first: String, second: String },

    #[error("cell (n={n}, D={d}) is both excluded (via q={via}) and witnessed by {source_note}")]
    Soundness { n: usize, d: u64, via: u64, source_note: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
