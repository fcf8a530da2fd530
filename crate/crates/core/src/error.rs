use alloc::string::String;

use crate::ring::RingSpec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: RingSpec, right: RingSpec },

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid modulus {0}")]
    InvalidModulus(u64),

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid Max-3Lin row {row}: {reason}")]
    InvalidRow { row: usize, reason: &'static str },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("expansion exceeds term cap: {needed} > {cap}")]
    TermCapExceeded { needed: u128, cap: usize },

    #[error("enumeration exceeds point cap: {needed} > {cap}")]
    PointCapExceeded { needed: u128, cap: u64 },

    #[error("unsupported domain {0}: an integral domain that is not a field is required")]
    UnsupportedDomain(RingSpec),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid gamma {0}: must be a nonzero non-unit")]
    InvalidGamma(String),

    #[error("assignment does not solve the system")]
    NotASolution,

    #[error("shift is not zero-sum structured: b0 must equal minus the sum of the other coordinates")]
    ShiftStructure,

    #[error("shift does not reduce sparsity ({before} -> {after})")]
    NoReduction { before: usize, after: usize },

    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("no amplification possible for sparsity {0}")]
    NoAmplification(usize),
}

impl Error {
    /// True for errors caused by an enumeration or expansion limit.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::TermCapExceeded { .. } | Error::PointCapExceeded { .. })
    }

    pub(crate) fn parse(what: &'static str, input: &str) -> Self {
        Error::Parse { what, input: input.into() }
    }
}
