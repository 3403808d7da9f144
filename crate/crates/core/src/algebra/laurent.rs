//! Sparse multivariate Laurent polynomials over `Q` in `u_i = 1 + T_i`.

use crate::algebra::cyclotomic::CyclotomicNumber;
use crate::algebra::modp::ModpLaurent;
use crate::algebra::rational::{
    check_prime, format_rational, p_power, parse_rational, reduce_mod_p, val_p_rational_i64,
    Rational,
};
use crate::algebra::ring::Ring;
use crate::algebra::valuation::Valuation;
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// A finitely supported map `Z^d -> Q`, ordered lexicographically by
/// exponent vector. Zero coefficients are never stored.
///
/// `dims == 0` denotes a constant that adapts to any number of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    dims: usize,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl LaurentPolynomial {
    pub fn zero_in(dims: usize) -> Self {
        LaurentPolynomial {
            dims,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dims: usize, c: Rational) -> Self {
        Self::monomial(vec![0; dims], c)
    }

    pub fn monomial(exponents: Vec<i64>, c: Rational) -> Self {
        let dims = exponents.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        LaurentPolynomial { dims, terms }
    }

    /// The variable `u_i` (zero-based).
    pub fn variable(i: usize, dims: usize) -> Self {
        let mut e = vec![0; dims];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    /// Panics if an exponent vector has the wrong length.
    pub fn from_terms(dims: usize, terms: impl IntoIterator<Item = (Vec<i64>, Rational)>) -> Self {
        let mut out = Self::zero_in(dims);
        for (e, c) in terms {
            assert_eq!(e.len(), dims, "exponent vector has the wrong length");
            out.add_term(e, &c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<i64>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        Ring::is_zero_elem(self)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, exponents: &[i64]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Views the polynomial with `dims` variables. Panics unless `self`
    /// already has that many variables or is a universal constant.
    pub fn with_dims(&self, dims: usize) -> Self {
        if self.dims == dims {
            return self.clone();
        }
        assert_eq!(
            self.dims, 0,
            "Laurent polynomials in {} and {} variables",
            self.dims, dims
        );
        LaurentPolynomial {
            dims,
            terms: self
                .terms
                .values()
                .map(|c| (vec![0; dims], c.clone()))
                .collect(),
        }
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        let d = self.dims.max(other.dims);
        (self.with_dims(d), other.with_dims(d))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero_in(self.dims);
        }
        LaurentPolynomial {
            dims: self.dims,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `u^e`.
    pub fn shift(&self, e: &[i64]) -> Self {
        assert_eq!(e.len(), self.dims);
        LaurentPolynomial {
            dims: self.dims,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.iter().zip(e).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// The substitution `u_i -> u_i^{-1}` in every variable.
    pub fn substitute_inverse(&self) -> Self {
        LaurentPolynomial {
            dims: self.dims,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.iter().map(|a| -a).collect(), c.clone()))
                .collect(),
        }
    }

    /// Sum of all coefficients, i.e. the value at `u = (1, ..., 1)`.
    pub fn eval_at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, b| a + b)
    }

    /// Value with `u_i := zeta_i`.
    pub fn eval(&self, zeta: &[CyclotomicNumber]) -> Result<CyclotomicNumber> {
        if zeta.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: zeta.len(),
            });
        }
        let mut inverses: Vec<Option<CyclotomicNumber>> = vec![None; zeta.len()];
        for (i, z) in zeta.iter().enumerate() {
            if z.is_zero() {
                return Err(Error::InvalidEvaluationPoint(format!(
                    "u{} evaluated at zero",
                    i + 1
                )));
            }
            if self.terms.keys().any(|e| e[i] < 0) {
                inverses[i] = Some(root_of_unity_inverse(z).ok_or_else(|| {
                    Error::InvalidEvaluationPoint(format!(
                        "u{} := {z} is not a root of unity of p-power order",
                        i + 1
                    ))
                })?);
            }
        }
        let mut acc = CyclotomicNumber::zero_elem();
        for (e, c) in &self.terms {
            let mut m = CyclotomicNumber::from_rational(2, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let base = if k < 0 {
                    inverses[i].as_ref().expect("inverse computed")
                } else {
                    &zeta[i]
                };
                m = m.mul(&base.pow(k.unsigned_abs()));
            }
            acc = acc.add(&m);
        }
        Ok(acc)
    }

    /// Value with `u_i := zeta_{p^level}^{k_i}`, computed by accumulating
    /// exponents modulo `p^level`.
    pub fn eval_roots(&self, p: u64, level: u32, k: &[u64]) -> CyclotomicNumber {
        assert_eq!(k.len(), self.dims);
        let order = p.pow(level);
        let mut v = vec![Rational::zero(); order as usize];
        for (e, c) in &self.terms {
            let mut idx: i128 = 0;
            for (a, b) in e.iter().zip(k) {
                idx += *a as i128 * *b as i128;
            }
            v[idx.rem_euclid(order as i128) as usize] += c;
        }
        CyclotomicNumber::from_cyclic(p, level, v)
    }

    /// Minimum `p`-adic valuation of the coefficients.
    pub fn content_valuation(&self, p: u64) -> Option<i64> {
        self.terms
            .values()
            .filter_map(|c| val_p_rational_i64(c, p))
            .min()
    }

    /// Splits off the `p`-content: returns `(mu, F0)` with `F = p^mu F0` and
    /// some coefficient of `F0` a `p`-adic unit.
    pub fn normalize(&self, p: u64) -> Result<(Valuation, LaurentPolynomial)> {
        check_prime(p)?;
        let mu = self
            .content_valuation(p)
            .ok_or(Error::ZeroElement("normalization of the zero polynomial"))?;
        Ok((Valuation::from_i64(mu), self.scale(&p_power(p, -mu))))
    }

    /// Coefficientwise reduction modulo `p`.
    pub fn mod_p_reduce(&self, p: u64) -> Result<ModpLaurent> {
        check_prime(p)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let r = reduce_mod_p(c, p).ok_or_else(|| Error::NegativeValuation {
                prime: p,
                coefficient: format_rational(c),
            })?;
            if r != 0 {
                terms.insert(e.clone(), r);
            }
        }
        Ok(ModpLaurent::from_map(p, self.dims, terms))
    }

    /// For one variable: `(s, c)` with `F = (1+T)^s * sum_i c_i T^i`.
    pub fn t_form(&self) -> Option<(i64, Vec<Rational>)> {
        if self.dims != 1 {
            return None;
        }
        let lo = self.terms.keys().map(|e| e[0]).min().unwrap_or(0);
        let hi = self.terms.keys().map(|e| e[0]).max().unwrap_or(0);
        let mut c = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, x) in &self.terms {
            c[(e[0] - lo) as usize] = x.clone();
        }
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].clone();
                c[j] += t;
            }
        }
        while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Some((lo, c))
    }

    /// Human-readable `T`-form for one variable.
    pub fn t_form_string(&self) -> Option<String> {
        let (s, c) = self.t_form()?;
        let body = format_univariate(&c, "T");
        Some(if s == 0 {
            body
        } else {
            format!("(1+T)^{s}*({body})")
        })
    }

    fn var_name(&self, i: usize) -> String {
        if self.dims == 1 {
            "u".into()
        } else {
            format!("u{}", i + 1)
        }
    }
}

/// The inverse of a root of unity of `p`-power order (or of any nonzero
/// rational).
fn root_of_unity_inverse(z: &CyclotomicNumber) -> Option<CyclotomicNumber> {
    if let Some(q) = z.to_rational() {
        if q.is_zero() {
            return None;
        }
        return Some(CyclotomicNumber::from_rational(z.prime(), q.recip()));
    }
    let order = z.prime().pow(z.level());
    let inv = z.pow(order - 1);
    (inv.mul(z) == CyclotomicNumber::one_elem()).then_some(inv)
}

fn format_univariate(c: &[Rational], var: &str) -> String {
    let mut out = String::new();
    for (i, x) in c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let neg = x.is_negative();
        let mag = format_rational(&x.abs());
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Ring for LaurentPolynomial {
    fn zero_elem() -> Self {
        Self::zero_in(0)
    }
    fn one_elem() -> Self {
        Self::constant(0, Rational::one())
    }
    fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.align(other);
        for (e, c) in b.terms {
            a.add_term(e, &c);
        }
        a
    }
    fn sub(&self, other: &Self) -> Self {
        let (mut a, b) = self.align(other);
        for (e, c) in b.terms {
            a.add_term(e, &-c);
        }
        a
    }
    fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.align(other);
        let mut out = Self::zero_in(a.dims);
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(0, q.clone())
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
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
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.var_name(i)
                    } else {
                        format!("{}^{k}", self.var_name(i))
                    }
                })
                .collect();
            if mono.is_empty() {
                f.write_str(&mag)?;
            } else if mag == "1" {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: Vec<i64>,
    coefficient: String,
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(e, c)| TermRepr {
                exponents: e.clone(),
                coefficient: format_rational(c),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        let dims = v.first().map_or(0, |t| t.exponents.len());
        let mut out = LaurentPolynomial::zero_in(dims);
        for t in v {
            if t.exponents.len() != dims {
                return Err(serde::de::Error::custom("inconsistent exponent lengths"));
            }
            let c = parse_rational(&t.coefficient).map_err(serde::de::Error::custom)?;
            out.add_term(t.exponents, &c);
        }
        Ok(out)
    }
}

/// Free-function form of [`LaurentPolynomial::eval`].
pub fn laurent_eval(f: &LaurentPolynomial, zeta: &[CyclotomicNumber]) -> Result<CyclotomicNumber> {
    f.eval(zeta)
}

/// Free-function form of [`LaurentPolynomial::normalize`].
pub fn laurent_normalize(f: &LaurentPolynomial, p: u64) -> Result<(Valuation, LaurentPolynomial)> {
    f.normalize(p)
}

/// Free-function form of [`LaurentPolynomial::mod_p_reduce`].
pub fn mod_p_reduce(f0: &LaurentPolynomial, p: u64) -> Result<ModpLaurent> {
    f0.mod_p_reduce(p)
}
