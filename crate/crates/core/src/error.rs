use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed group spec {spec:?}: {reason}")]
    GroupSpecSyntax { spec: String, reason: String },

    #[error("cyclic modulus {0} is below 2")]
    ModulusTooSmall(u64),

    #[error("group order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: u128, max: u64 },

    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: u64, order: u64 },

    #[error("operands live in different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    #[error("{0} requires a nonempty set")]
    EmptySet(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("convolution exceeds the exact-arithmetic envelope: {0}")]
    ExactnessEnvelope(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("family too large for exhaustive enumeration ({count} instances, limit {limit}); use a sampled family")]
    FamilyTooLarge { count: u128, limit: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
