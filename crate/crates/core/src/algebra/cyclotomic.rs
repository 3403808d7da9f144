//! Exact arithmetic in `Q(zeta_{p^N})`.
//!
//! An element at level `N >= 1` is a rational combination of
//! `1, x, ..., x^(phi(p^N) - 1)` with `x = zeta_{p^N}`. Level-0 elements are
//! plain rationals and combine with elements of any prime.

use crate::algebra::poly::resultant_rational;
use crate::algebra::rational::{
    check_prime, format_rational, parse_rational, val_p_rational_i64, Rational,
};
use crate::algebra::ring::Ring;
use crate::algebra::valuation::Valuation;
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

#[derive(Debug, Clone)]
pub struct CyclotomicNumber {
    prime: u64,
    level: u32,
    coeffs: Vec<Rational>,
}

pub fn phi_prime_power(p: u64, n: u32) -> usize {
    if n == 0 {
        1
    } else {
        ((p - 1) * p.pow(n - 1)) as usize
    }
}

/// Coefficients of the cyclotomic polynomial `Phi_{p^N}`, lowest degree first.
pub fn cyclotomic_polynomial(p: u64, n: u32) -> Vec<Rational> {
    if n == 0 {
        return vec![-Rational::one(), Rational::one()];
    }
    let step = p.pow(n - 1) as usize;
    let mut c = vec![Rational::zero(); (p as usize - 1) * step + 1];
    for k in 0..p as usize {
        c[k * step] = Rational::one();
    }
    c
}

/// Reduces a vector indexed by `Z / p^N` (a polynomial modulo `x^{p^N} - 1`)
/// to the power basis of `Q(zeta_{p^N})`.
fn reduce_cyclic(p: u64, n: u32, mut v: Vec<Rational>) -> Vec<Rational> {
    let phi = phi_prime_power(p, n);
    if n == 0 {
        let s = v.into_iter().fold(Rational::zero(), |a, b| a + b);
        return vec![s];
    }
    let step = p.pow(n - 1) as usize;
    // x^(phi + j) = -sum_{k=0}^{p-2} x^(j + k step)
    for i in (phi..v.len()).rev() {
        if v[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        let j = i - phi;
        for k in 0..(p as usize - 1) {
            v[j + k * step] -= &c;
        }
    }
    v.truncate(phi);
    v
}

impl CyclotomicNumber {
    /// Panics unless `coeffs.len() == phi(p^level)`.
    pub fn new(prime: u64, level: u32, coeffs: Vec<Rational>) -> Self {
        assert_eq!(
            coeffs.len(),
            phi_prime_power(prime, level),
            "coefficient vector has the wrong length"
        );
        CyclotomicNumber {
            prime,
            level,
            coeffs,
        }
    }

    pub fn try_new(prime: u64, level: u32, coeffs: Vec<Rational>) -> Result<Self> {
        check_prime(prime)?;
        let phi = phi_prime_power(prime, level);
        if coeffs.len() != phi {
            return Err(Error::DimensionMismatch {
                expected: phi,
                got: coeffs.len(),
            });
        }
        Ok(CyclotomicNumber::new(prime, level, coeffs))
    }

    pub fn from_rational(prime: u64, q: Rational) -> Self {
        CyclotomicNumber {
            prime,
            level: 0,
            coeffs: vec![q],
        }
    }

    pub fn from_int(prime: u64, n: i64) -> Self {
        Self::from_rational(prime, Rational::from_integer(n.into()))
    }

    /// `zeta_{p^n}^k`.
    pub fn zeta_power(prime: u64, level: u32, k: i64) -> Self {
        let order = prime.pow(level) as i64;
        let mut v = vec![Rational::zero(); order as usize];
        v[k.rem_euclid(order) as usize] = Rational::one();
        CyclotomicNumber {
            prime,
            level,
            coeffs: reduce_cyclic(prime, level, v),
        }
    }

    /// The primitive root `zeta_{p^n}`.
    pub fn zeta(prime: u64, level: u32) -> Self {
        Self::zeta_power(prime, level, 1)
    }

    /// Builds an element from coefficients indexed by `Z / p^n`.
    pub fn from_cyclic(prime: u64, level: u32, v: Vec<Rational>) -> Self {
        assert_eq!(v.len() as u64, prime.pow(level));
        CyclotomicNumber {
            prime,
            level,
            coeffs: reduce_cyclic(prime, level, v),
        }
    }

    pub fn is_zero(&self) -> bool {
        Ring::is_zero_elem(self)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    fn common_prime(&self, other: &Self) -> u64 {
        match (self.level, other.level) {
            (0, _) => other.prime,
            (_, 0) => self.prime,
            _ => {
                assert_eq!(
                    self.prime, other.prime,
                    "cyclotomic numbers over different primes"
                );
                self.prime
            }
        }
    }

    /// Embeds into `Q(zeta_{p^level})` for `level >= self.level`.
    pub fn lift(&self, level: u32) -> Self {
        self.lift_with_prime(self.prime, level)
    }

    fn lift_with_prime(&self, prime: u64, level: u32) -> Self {
        assert!(level >= self.level, "lift must not lower the level");
        if level == self.level && prime == self.prime {
            return self.clone();
        }
        let mut out = vec![Rational::zero(); phi_prime_power(prime, level)];
        let stride = if self.level == 0 {
            0
        } else {
            prime.pow(level - self.level) as usize
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * stride] = c.clone();
        }
        CyclotomicNumber {
            prime,
            level,
            coeffs: out,
        }
    }

    /// The same element viewed at a lower level, if it lies in that subfield.
    pub fn reduce_to(&self, level: u32) -> Option<Self> {
        assert!(level <= self.level, "reduce_to must not raise the level");
        let stride = if level == 0 {
            return self.to_rational().map(|q| Self::from_rational(self.prime, q));
        } else {
            self.prime.pow(self.level - level) as usize
        };
        let ok = self
            .coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % stride == 0 || c.is_zero());
        ok.then(|| CyclotomicNumber {
            prime: self.prime,
            level,
            coeffs: self.coeffs.iter().step_by(stride).cloned().collect(),
        })
    }

    /// Lowers the level as far as possible.
    pub fn simplify(&self) -> Self {
        let mut cur = self.clone();
        while cur.level > 0 {
            match cur.reduce_to(cur.level - 1) {
                Some(r) => cur = r,
                None => break,
            }
        }
        cur
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        let p = self.common_prime(other);
        let l = self.level.max(other.level);
        (self.lift_with_prime(p, l), other.lift_with_prime(p, l))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicNumber {
            prime: self.prime,
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// The Galois automorphism `zeta -> zeta^u` for `u` prime to `p`.
    pub fn galois(&self, u: i64) -> Self {
        assert!(u.rem_euclid(self.prime as i64) != 0, "not a unit");
        if self.level == 0 {
            return self.clone();
        }
        let order = self.prime.pow(self.level) as i64;
        let mut v = vec![Rational::zero(); order as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let k = (i as i64 * u).rem_euclid(order) as usize;
                v[k] += c;
            }
        }
        Self::from_cyclic(self.prime, self.level, v)
    }

    /// Complex conjugation.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// Field norm down to `Q`, as a resultant with the cyclotomic polynomial.
    pub fn norm(&self) -> Rational {
        if self.level == 0 {
            return self.coeffs[0].clone();
        }
        if self.is_zero() {
            return Rational::zero();
        }
        resultant_rational(&cyclotomic_polynomial(self.prime, self.level), &self.coeffs)
    }

    /// `v_p` of the element, via the norm.
    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let v = val_p_rational_i64(&self.norm(), self.prime).expect("nonzero norm");
        let phi = phi_prime_power(self.prime, self.level) as i64;
        Valuation::Finite(Rational::new(v.into(), phi.into()))
    }

    /// `v_p` of the element from its expansion in the uniformizer
    /// `pi = zeta - 1`: the minimum of `v_p(c_i) + i / phi`, which is attained
    /// exactly once. Agrees with [`CyclotomicNumber::valuation`].
    pub fn valuation_fast(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let phi = self.coeffs.len();
        // Taylor shift: c(1 + pi), by repeated synthetic division.
        let mut c = self.coeffs.clone();
        for i in 0..phi {
            for j in (i..phi - 1).rev() {
                let t = c[j + 1].clone();
                c[j] += t;
            }
        }
        let mut best: Option<Rational> = None;
        for (i, ci) in c.iter().enumerate() {
            if let Some(v) = val_p_rational_i64(ci, self.prime) {
                let val = Rational::new((v * phi as i64 + i as i64).into(), (phi as i64).into());
                if best.as_ref().is_none_or(|b| val < *b) {
                    best = Some(val);
                }
            }
        }
        Valuation::Finite(best.expect("nonzero element"))
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.level != 0 && other.level != 0 && self.prime != other.prime {
            return false;
        }
        let (a, b) = self.align(other);
        a.coeffs == b.coeffs
    }
}

impl Ring for CyclotomicNumber {
    /// A level-0 zero; the prime is a placeholder that is ignored in mixed
    /// arithmetic.
    fn zero_elem() -> Self {
        Self::from_rational(2, Rational::zero())
    }
    fn one_elem() -> Self {
        Self::from_rational(2, Rational::one())
    }
    fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.align(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
    fn sub(&self, other: &Self) -> Self {
        let (mut a, b) = self.align(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }
    fn mul(&self, other: &Self) -> Self {
        if self.level == 0 {
            return other.scale(&self.coeffs[0]);
        }
        if other.level == 0 {
            return self.scale(&other.coeffs[0]);
        }
        let (a, b) = self.align(other);
        let order = a.prime.pow(a.level) as usize;
        let mut v = vec![Rational::zero(); order];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[(i + j) % order] += x * y;
                }
            }
        }
        CyclotomicNumber::from_cyclic(a.prime, a.level, v)
    }
    fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn from_rational(q: &Rational) -> Self {
        Self::from_rational(2, q.clone())
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = format!("z{}", self.prime.pow(self.level));
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = format_rational(&c.abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => f.write_str(&mag)?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        f.write_str(&z)?;
                    } else {
                        write!(f, "{z}^{i}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    prime: u64,
    level: u32,
    coefficients: Vec<String>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicRepr {
            prime: self.prime,
            level: self.level,
            coefficients: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CyclotomicRepr::deserialize(d)?;
        let coeffs = r
            .coefficients
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CyclotomicNumber::try_new(r.prime, r.level, coeffs).map_err(serde::de::Error::custom)
    }
}

/// Field norm, as a free function.
pub fn cyclo_norm(x: &CyclotomicNumber) -> Rational {
    x.norm()
}

/// `p`-adic valuation extended to `Q(zeta_{p^N})`.
pub fn val_p_cyclotomic(x: &CyclotomicNumber) -> Valuation {
    x.valuation()
}
