use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q = {0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not primitive over GF({q}): {poly}")]
    NotPrimitive { q: u32, poly: String },
    #[error("no stored default primitive polynomial for GF({q}^{m})")]
    NoDefaultPolynomial { q: u32, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("enumerating {size} vectors exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search refused: estimated cost {estimate:.3e} exceeds budget {budget:.3e}")]
    Intractable { estimate: f64, budget: f64 },
    #[error("could not certify result within {0} bits of precision")]
    Precision(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
