use thiserror::Error;

use crate::oracle::StringClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator constant term {0} is not a unit; exact integer expansion is impossible")]
    NonUnitConstantTerm(String),

    #[error("n = {n} exceeds the enumeration bound {bound}")]
    OracleBoundExceeded { n: usize, bound: usize },

    #[error("no {class} strings of length {n}")]
    EmptyEnsemble { class: StringClass, n: usize },

    #[error("operation is not supported for {0} strings")]
    UnsupportedClass(StringClass),

    #[error("undefined family: {bit}-runs of {class} strings")]
    UndefinedFamily { class: StringClass, bit: u8 },

    #[error("moment order {0} is not supported (1..=4)")]
    UnsupportedMoment(u32),

    #[error("variance vanishes at n = {0}; correlation is undefined")]
    DegenerateVariance(usize),

    #[error("no closed form covers n = {n}, ell = {ell}, k = {k}")]
    OutOfFormulaRange { n: usize, ell: usize, k: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed cache file {path}: {reason}")]
    CacheFormat { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
