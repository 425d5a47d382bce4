//! Exact arithmetic in the real fields ℚ(2cos(π/N)).

mod field;
mod rational;
pub mod upoly;

pub use field::{field_create, AlgebraicReal, FieldDescriptor};
pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields (N = {0} and N = {1})")]
    FieldMismatch(u32, u32),
    #[error("2cos(pi/{0}) does not lie in this field")]
    NotInField(u32),
}

/// Shorthand used throughout the crate.
pub type Scalar = AlgebraicReal;
