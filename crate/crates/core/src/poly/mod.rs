//! Exact multivariate polynomials over the rationals.

mod monomial;
mod parse;
mod polynomial;

pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_polynomial;
pub use polynomial::{cmp_leading, Polynomial, Ring};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("syntax error at position {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("negative exponents are not allowed")]
    NegativeExponent,
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("point has {got} coordinates, ring has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Rational from a small integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
