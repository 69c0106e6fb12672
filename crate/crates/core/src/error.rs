use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field {characteristic}^{degree} exceeds the configured cap {cap}")]
    FieldTooLarge {
        characteristic: u32,
        degree: u32,
        cap: u64,
    },
    #[error("invalid weight data: {0}")]
    InvalidWeight(String),
    #[error("invalid dimension vector: {0}")]
    InvalidDimension(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("lattice context mismatch")]
    ContextMismatch,
    #[error("slope of the zero class is undefined")]
    ZeroSlope,
    #[error("zero class has no side")]
    ZeroClass,
    #[error("unclassifiable class (rank 0, degree 0): {0}")]
    Unclassifiable(String),
    #[error("tuple space q^{exponent} (q = {q}) exceeds the enumeration cap {cap}")]
    EnumerationCap { q: u64, exponent: u64, cap: u64 },
    #[error("endomorphism scan q^{exponent} (q = {q}) exceeds the cap {cap}")]
    EndomorphismCap { q: u64, exponent: u64, cap: u64 },
    #[error("not an endomorphism: {0}")]
    NotEndomorphism(String),
    #[error("endomorphism is not nilpotent")]
    NotNilpotent,
    #[error("series error: {0}")]
    Series(String),
    #[error("integrality violation: {0}")]
    Integrality(String),
    #[error("underdetermined: {0}")]
    Underdetermined(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
