use crate::algebra::rational::Rational;
use num_traits::{One, Zero};

/// A commutative ring with exact arithmetic.
///
/// `zero()` and `one()` may return "universal" constants that adapt to the
/// shape (cyclotomic level, number of variables) of whatever they are
/// combined with.
pub trait Ring: Clone + PartialEq + Send + Sync {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero_elem(&self) -> bool;

    fn from_rational(q: &Rational) -> Self;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_elem();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Ring for Rational {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}
