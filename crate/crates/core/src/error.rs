use thiserror::Error;

/// Errors raised by the field, counting and L-polynomial engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is outside the supported range 2 <= p < 2^16")]
    UnsupportedCharacteristic(u64),
    #[error("field F_{{{p}^{n}}} exceeds the arithmetic size limit")]
    FieldTooLarge { p: u32, n: usize },
    #[error("{what}: needs {needed} but the budget is {budget}")]
    BudgetExceeded { what: &'static str, needed: String, budget: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("{d} does not divide the extension degree {n}")]
    NotSubfield { d: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("curve has genus 0 and no extremal structure")]
    GenusZero,
    #[error("inconsistent counts: {0}")]
    Inconsistent(String),
    #[error("spectrum rounding residual {residual:e} exceeds tolerance")]
    SpectrumRounding { residual: f64 },
    #[error("spectrum does not reproduce the count at degree {n}")]
    ReconstructionMismatch { n: u64 },
    #[error("negative multiplicity {value} at index {index}")]
    NegativeMultiplicity { index: usize, value: i64 },
    #[error("validator failed: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
