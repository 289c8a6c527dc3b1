use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Gamma pole at argument {0}")]
    Pole(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("index constraint violated: {0}")]
    IndexConstraint(String),
    #[error("partitions have unequal weight ({0} vs {1})")]
    UnequalWeight(u32, u32),
    #[error("no rational function of degree <= {0} fits the samples")]
    InconsistentSamples(usize),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("Weingarten function has a pole at z = {0}")]
    PoleAtInteger(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
