//! Exact and certified scalar arithmetic.

pub mod dyadic;
pub mod interval;
pub mod quad;
pub mod real;

pub use dyadic::Dyadic;
pub use interval::Interval;
pub use quad::QuadVal;
pub use real::Real;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("values over Q(√{left}) and Q(√{right}) cannot be mixed")]
    FieldMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand {0} is not a positive square-free integer")]
    NotSquareFree(String),
    #[error("cannot certify the square-free part of {0}")]
    Unfactorable(String),
    #[error("parse error: {0}")]
    Parse(String),
}
