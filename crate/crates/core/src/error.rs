use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),

    #[error("representation must have at least one part")]
    EmptyParts,

    #[error("part sizes must be at least 1 (got {0})")]
    PartBelowOne(u64),

    #[error("part size {part} exceeds p = {p}")]
    PartExceedsP { part: u64, p: u64 },

    #[error("cannot parse representation {input:?}: {reason}")]
    Syntax { input: String, reason: String },

    #[error("jump {j} is divisible by p = {p}")]
    DivisibleJump { j: u64, p: u64 },

    #[error("s = {s} outside [1, p-1] for p = {p}")]
    ResidueOutOfRange { s: u64, p: u64 },

    #[error("p = {p} exceeds the shift-profile cap {cap}")]
    PrimeTooLarge { p: u64, cap: u64 },

    #[error("dim C = {dim_c} outside [0, l] with l = {l}")]
    CenterDimOutOfRange { dim_c: u64, l: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("enumeration cap exceeded: {count} partitions for p = {p}, d = {d} (cap {cap})")]
    EnumerationCap { p: u64, d: u64, count: u128, cap: u128 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by bad user input rather than by limits or bugs.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::EmptyParts
                | Error::PartBelowOne(_)
                | Error::PartExceedsP { .. }
                | Error::Syntax { .. }
                | Error::DivisibleJump { .. }
                | Error::ResidueOutOfRange { .. }
                | Error::CenterDimOutOfRange { .. }
                | Error::Precondition(_)
                | Error::InvalidQuery(_)
        )
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::PrimeTooLarge { .. } | Error::EnumerationCap { .. } | Error::Overflow(_))
    }
}
