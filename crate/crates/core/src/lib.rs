//! Symbolic kernel for higher λβη-equality: untyped λ-terms, one-step β/η
//! reduction, dimension-indexed conversion cells with boundary checking, and
//! the constructions that relate conversions one dimension up.

pub mod cells;
pub mod error;
pub mod reduction;
pub mod syntax;
pub mod theory;

pub use error::{Error, KernelError, ParseError};
