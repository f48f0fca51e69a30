use thiserror::Error;

/// Errors raised by evaluation, jets and the claim engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid precision: bits = {bits}, max_bits = {max_bits} (need 0 < bits <= max_bits)")]
    InvalidPrecision { bits: u32, max_bits: u32 },

    #[error("invalid escalation factor {0} (need >= 2)")]
    InvalidEscalation(u32),

    #[error("domain error in {op}: argument {arg}")]
    Domain { op: &'static str, arg: String },

    #[error("{func} is singular at x = {point}")]
    Singular { func: &'static str, point: String },

    #[error("unknown constant `{0}`")]
    UnknownConstant(String),

    #[error("Bernoulli index {0} is not an even integer in [2, 512]")]
    BernoulliIndex(u32),

    #[error("order {order} exceeds ceiling {max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("jet mismatch: {0}")]
    JetMismatch(String),

    #[error("division by a jet with zero constant term")]
    JetDivisionByZero,

    #[error("dimension {0} outside [1, 1000000]")]
    Dimension(u64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
