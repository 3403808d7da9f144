//! Univariate polynomials and integer resultants.

use crate::algebra::rational::Rational;
use crate::algebra::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial, coefficients lowest degree first, with no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero_elem) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        UniPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        UniPoly::new(vec![R::zero_elem(), R::one_elem()])
    }

    pub fn is_zero(&self) -> bool {
        Ring::is_zero_elem(self)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero_elem)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero_elem(), |acc, c| acc.mul(x).add(c))
    }
}

impl<R: Ring> Ring for UniPoly<R> {
    fn zero_elem() -> Self {
        UniPoly { coeffs: vec![] }
    }
    fn one_elem() -> Self {
        UniPoly::new(vec![R::one_elem()])
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero_elem();
        }
        let mut out = vec![R::zero_elem(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero_elem() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        UniPoly::new(out)
    }
    fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_rational(q: &Rational) -> Self {
        UniPoly::new(vec![R::from_rational(q)])
    }
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) a mod b`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut steps = (a.len() - 1 - db + 1) as u32;
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * bi;
        }
        r = trim(r);
        steps -= 1;
    }
    if steps > 0 {
        let f = num_traits::pow(lb.clone(), steps as usize);
        for x in r.iter_mut() {
            *x *= &f;
        }
    }
    r
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn pow_big(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow(b.clone(), e)
}

/// Resultant of two integer polynomials (coefficients lowest degree first)
/// by the subresultant pseudo-remainder sequence.
pub fn resultant_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    if a.len() == 1 && b.len() == 1 {
        return BigInt::one();
    }
    let ca = content(&a);
    let cb = content(&b);
    let (da, db) = (a.len() - 1, b.len() - 1);
    let t = pow_big(&ca, db) * pow_big(&cb, da);
    for x in a.iter_mut() {
        *x = &*x / &ca;
    }
    for x in b.iter_mut() {
        *x = &*x / &cb;
    }
    let mut s = BigInt::one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.len() - 1, b.len() - 1);
        if db == 0 {
            // b is a nonzero constant.
            let lb = &b[0];
            let res = if da == 0 {
                BigInt::one()
            } else {
                pow_big(lb, da) / pow_big(&h, da - 1)
            };
            return s * t * res;
        }
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let div = &g * pow_big(&h, delta);
        a = b;
        b = r.into_iter().map(|x| x / &div).collect();
        g = a[a.len() - 1].clone();
        h = if delta == 0 {
            h
        } else {
            pow_big(&g, delta) / pow_big(&h, delta - 1)
        };
    }
}

/// Resultant of two rational polynomials.
pub fn resultant_rational(a: &[Rational], b: &[Rational]) -> Rational {
    let clear = |v: &[Rational]| -> (Vec<BigInt>, BigInt) {
        let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        (v.iter().map(|q| q.numer() * (&l / q.denom())).collect(), l)
    };
    let (ai, la) = clear(a);
    let (bi, lb) = clear(b);
    let ai = trim(ai);
    let bi = trim(bi);
    if ai.is_empty() || bi.is_empty() {
        return Rational::zero();
    }
    let (da, db) = (ai.len() - 1, bi.len() - 1);
    let r = resultant_int(&ai, &bi);
    let denom = pow_big(&la, db) * pow_big(&lb, da);
    let out = Rational::new(r, denom.abs());
    if denom.is_negative() {
        -out
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::{det_rational, Matrix};
    use crate::algebra::rational::rat;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Sylvester-matrix determinant.
    fn sylvester(a: &[i64], b: &[i64]) -> Rational {
        let (m, n) = (a.len() - 1, b.len() - 1);
        let size = m + n;
        if size == 0 {
            return rat(1);
        }
        let mat = Matrix::from_fn(size, size, |i, j| {
            if i < n {
                // row i: a shifted by i, highest degree first
                j.checked_sub(i).filter(|&k| k <= m).map_or(rat(0), |k| rat(a[m - k]))
            } else {
                let i = i - n;
                j.checked_sub(i).filter(|&k| k <= n).map_or(rat(0), |k| rat(b[n - k]))
            }
        });
        det_rational(&mat)
    }

    #[test]
    fn known_resultants() {
        // Res(x^2 + 1, x - 1) = 2
        assert_eq!(resultant_int(&ints(&[1, 0, 1]), &ints(&[-1, 1])), BigInt::from(2));
        // Res(x - 2, x - 5) = -3
        assert_eq!(resultant_int(&ints(&[-2, 1]), &ints(&[-5, 1])), BigInt::from(-3));
        assert_eq!(resultant_int(&ints(&[0, 1]), &ints(&[0, 1])), BigInt::zero());
    }

    #[test]
    fn unipoly_ring_ops() {
        let p: UniPoly<Rational> = UniPoly::new(vec![rat(1), rat(1)]);
        let q = p.mul(&p);
        assert_eq!(q.coeffs(), &[rat(1), rat(2), rat(1)]);
        assert_eq!(q.sub(&q), UniPoly::zero_elem());
        assert_eq!(q.eval(&rat(2)), rat(9));
        assert_eq!(q.degree(), Some(2));
    }

    proptest! {
        #[test]
        fn resultant_matches_sylvester(
            a in prop::collection::vec(-4i64..5, 1..6),
            b in prop::collection::vec(-4i64..5, 1..6),
        ) {
            let mut a = a; let mut b = b;
            if *a.last().unwrap() == 0 { *a.last_mut().unwrap() = 1; }
            if *b.last().unwrap() == 0 { *b.last_mut().unwrap() = -2; }
            let r = resultant_int(&ints(&a), &ints(&b));
            prop_assert_eq!(Rational::from_integer(r), sylvester(&a, &b));
        }
    }
}
