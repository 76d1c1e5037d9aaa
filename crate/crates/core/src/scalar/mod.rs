//! Exact scalars: rationals (from GMP), the quadratic field Q(sqrt d), its
//! complexification, and values graded by powers of 1/pi.

mod complex;
mod field;
mod graded;
mod reconstruct;

pub use complex::ExactComplex;
pub use field::FieldElement;
pub use graded::{eval_complex, eval_field, PiGraded, SymbolicConstant};
pub use reconstruct::rational_reconstruct;
pub use rug::{Float, Integer, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot combine elements of Q(sqrt {0}) and Q(sqrt {1})")]
    FieldMismatch(u32, u32),
    #[error("product would carry a 1/pi^2 term")]
    PiSquared,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("{0:?} uses the surd s but no radicand is declared")]
    MissingRadicand(String),
}

#[cfg(test)]
mod props;
