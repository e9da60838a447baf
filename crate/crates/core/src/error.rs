use crate::cyclotomic::CycNum;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("value is not rational: {0}")]
    NotRational(Box<CycNum>),

    #[error("division by zero in Q(zeta_{order})")]
    DivisionByZero { order: usize },

    #[error("cannot promote an element of order {from} to order {to}")]
    InvalidPromotion { from: usize, to: usize },

    #[error("{path}: {message}")]
    InvalidData { path: String, message: String },

    #[error("unknown point label `{0}`")]
    UnknownLabel(String),

    #[error("invalid Hecke transformation at `{label}`: {reason}")]
    InvalidHecke { label: String, reason: String },

    #[error("degenerate pair: {m} is divisible by {n}")]
    DegeneratePair { m: i64, n: usize },

    #[error("tableau enumeration is limited to {limit} boxes, shape has {boxes}")]
    SizeGuard { boxes: i64, limit: i64 },

    #[error("split degree d_1 = {0} is not an integer")]
    NonIntegralDegree(String),

    #[error("{0:?} is not in W'_k for this split")]
    NotInWPrime(Vec<i64>),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("float evaluation lost precision (residual {residual:.3e})")]
    PrecisionExhausted { residual: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("Hecke normalization failed: {0}")]
    HeckeNormalization(String),
}

impl Error {
    pub(crate) fn data(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidData {
            path: path.into(),
            message: message.into(),
        }
    }
}
