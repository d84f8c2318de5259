use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("index {index} is out of range for ordinal {ordinal}")]
    IndexOutOfRange { ordinal: String, index: u64 },

    #[error("ordinal {value} is not below {bound}")]
    NotBelow { value: String, bound: String },

    #[error("natural-number index overflow while encoding {0}")]
    IndexOverflow(String),

    #[error("invalid element for {expr}: {msg}")]
    InvalidElement { expr: String, msg: String },

    #[error("malformed element JSON: {0}")]
    ElementJson(String),

    #[error("value {0} is outside the unit interval")]
    OutOfUnitInterval(String),

    #[error("value {0} is not a dyadic rational")]
    NotDyadic(String),

    #[error("ternary digit {0} is not in {{0, 2}}")]
    BadCantorDigit(u8),

    #[error("value {0} has no terminating binary expansion below 1")]
    NotTerminating(String),

    #[error("exponent must be positive")]
    ZeroExponent,

    #[error("{0}")]
    Unsupported(String),

    #[error("engine not applicable: {0}")]
    EngineMismatch(String),

    #[error("parameter cannot be decided exactly: {0}")]
    Undecidable(String),

    #[error("registry is frozen; cannot register {0}")]
    Frozen(String),

    #[error("prefix {0} has not been materialized")]
    Unmaterialized(String),

    #[error("family is not a chain under inclusion: {0}")]
    NotAChain(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("relation has a cycle through {0}")]
    Cycle(String),

    #[error("no rank rule applies to {0}")]
    NoRankRule(String),

    #[error("sample is not order-consistent: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
