//! Exact, presentation-level computations relating constructible sheaves on
//! the complex plane with vanishing global cohomology to Stokes structures of
//! exponential type on the circle.
//!
//! All arithmetic is over the rationals and all geometric decisions are made
//! with exact predicates on rational points and integer directions.

pub mod canonical;
pub mod costokes;
pub mod decomp;
pub mod exactplane;
pub mod linalg;
pub mod presentation;
pub mod transport;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// The coefficient field.
pub type Q = BigRational;

/// Rational from an integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational `n / d`; panics when `d == 0`.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}
