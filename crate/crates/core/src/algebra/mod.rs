//! Exact arithmetic substrate.

pub mod cyclotomic;
pub mod laurent;
pub mod linalg;
pub mod modp;
pub mod multipoly;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod valuation;

pub use cyclotomic::CyclotomicNumber;
pub use laurent::LaurentPolynomial;
pub use linalg::Matrix;
pub use modp::ModpLaurent;
pub use multipoly::MultiPoly;
pub use poly::UniPoly;
pub use rational::Rational;
pub use ring::Ring;
pub use valuation::Valuation;
