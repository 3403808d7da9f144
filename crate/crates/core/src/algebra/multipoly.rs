//! Sparse multivariate polynomials over `Q`.

use crate::algebra::laurent::LaurentPolynomial;
use crate::algebra::rational::{format_rational, Rational};
use crate::algebra::ring::Ring;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// `nvars == 0` denotes a constant that adapts to any number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero_in(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut out = Self::zero_in(nvars);
        out.add_term(vec![0; nvars], &c);
        out
    }

    /// `c * x_i`.
    pub fn linear(i: usize, nvars: usize, c: Rational) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut out = Self::zero_in(nvars);
        out.add_term(e, &c);
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        Ring::is_zero_elem(self)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    fn with_nvars(&self, n: usize) -> Self {
        if self.nvars == n {
            return self.clone();
        }
        assert_eq!(self.nvars, 0, "polynomials in different numbers of variables");
        MultiPoly {
            nvars: n,
            terms: self.terms.values().map(|c| (vec![0; n], c.clone())).collect(),
        }
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        let n = self.nvars.max(other.nvars);
        (self.with_nvars(n), other.with_nvars(n))
    }

    /// Substitutes a Laurent polynomial for each variable.
    pub fn substitute(&self, values: &[LaurentPolynomial]) -> LaurentPolynomial {
        assert_eq!(values.len(), self.nvars, "wrong number of substitution values");
        let mut powers: Vec<Vec<LaurentPolynomial>> = vec![vec![LaurentPolynomial::one_elem()]; self.nvars];
        let mut acc = LaurentPolynomial::zero_elem();
        for (e, c) in &self.terms {
            let mut m = LaurentPolynomial::from_rational(c);
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().expect("nonempty").mul(&values[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    m = m.mul(&powers[i][k as usize]);
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// Renders with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = format_rational(&c.abs());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{k}", names[i])
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{mag}*{}", mono.join("*")));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Ring for MultiPoly {
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
        let mut out = Self::zero_in(a.nvars);
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                out.add_term(e1.iter().zip(e2).map(|(x, y)| x + y).collect(), &(c1 * c2));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(0, q.clone())
    }
}
