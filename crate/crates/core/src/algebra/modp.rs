//! Laurent polynomials over `F_p`.

use crate::algebra::rational::{check_prime, inv_mod};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

type Terms = BTreeMap<Vec<i64>, u64>;

/// A finitely supported map `Z^d -> F_p`. Zero residues are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModpLaurent {
    prime: u64,
    dims: usize,
    terms: Terms,
}

fn add_term(t: &mut Terms, e: Vec<i64>, c: u64, p: u64) {
    let c = c % p;
    if c == 0 {
        return;
    }
    let entry = t.entry(e.clone()).or_insert(0);
    *entry = (*entry + c) % p;
    if *entry == 0 {
        t.remove(&e);
    }
}

fn mul_terms(a: &Terms, b: &Terms, p: u64) -> Terms {
    let mut out = Terms::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            add_term(&mut out, e, c1 * c2 % p, p);
        }
    }
    out
}

/// Exact division of polynomials (nonnegative exponents) in lex order.
/// Returns `None` when `divisor` does not divide `dividend`.
fn divide_poly(dividend: &Terms, divisor: &Terms, p: u64) -> Option<Terms> {
    let (lm, lc) = divisor.iter().next_back().expect("nonzero divisor");
    let lc_inv = inv_mod(*lc, p);
    let mut rem = dividend.clone();
    let mut quot = Terms::new();
    while let Some((m, c)) = rem.iter().next_back() {
        if !m.iter().zip(lm).all(|(a, b)| a >= b) {
            return None;
        }
        let qe: Vec<i64> = m.iter().zip(lm).map(|(a, b)| a - b).collect();
        let qc = c * lc_inv % p;
        for (e, d) in divisor {
            let te = e.iter().zip(&qe).map(|(x, y)| x + y).collect();
            add_term(&mut rem, te, (p - d * qc % p) % p, p);
        }
        add_term(&mut quot, qe, qc, p);
    }
    Some(quot)
}

impl ModpLaurent {
    pub fn from_map(prime: u64, dims: usize, terms: BTreeMap<Vec<i64>, u64>) -> Self {
        let mut t = Terms::new();
        for (e, c) in terms {
            assert_eq!(e.len(), dims, "exponent vector has the wrong length");
            add_term(&mut t, e, c, prime);
        }
        ModpLaurent {
            prime,
            dims,
            terms: t,
        }
    }

    /// Residues may be any integers; they are reduced modulo `prime`.
    pub fn from_terms(
        prime: u64,
        dims: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, i64)>,
    ) -> Self {
        let mut t = Terms::new();
        for (e, c) in terms {
            assert_eq!(e.len(), dims, "exponent vector has the wrong length");
            add_term(&mut t, e, c.rem_euclid(prime as i64) as u64, prime);
        }
        ModpLaurent {
            prime,
            dims,
            terms: t,
        }
    }

    pub fn one(prime: u64, dims: usize) -> Self {
        Self::from_terms(prime, dims, [(vec![0; dims], 1)])
    }

    /// `u^a - 1`.
    pub fn sigma_minus_one(prime: u64, a: &[i64]) -> Self {
        Self::from_terms(prime, a.len(), [(a.to_vec(), 1), (vec![0; a.len()], -1)])
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "different characteristics");
        assert_eq!(self.dims, other.dims, "different numbers of variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut t = self.terms.clone();
        for (e, c) in &other.terms {
            add_term(&mut t, e.clone(), *c, self.prime);
        }
        ModpLaurent {
            terms: t,
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        ModpLaurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.prime - c))
                .collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        ModpLaurent {
            terms: mul_terms(&self.terms, &other.terms, self.prime),
            ..self.clone()
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.prime, self.dims);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Writes `self = u^s g` with `g` a polynomial divisible by no `u_i`.
    pub fn to_polynomial(&self) -> (Vec<i64>, BTreeMap<Vec<i64>, u64>) {
        let s: Vec<i64> = (0..self.dims)
            .map(|i| self.terms.keys().map(|e| e[i]).min().unwrap_or(0))
            .collect();
        let g = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(&s).map(|(a, b)| a - b).collect(), *c))
            .collect();
        (s, g)
    }

    /// `self / divisor` when the quotient is a Laurent polynomial.
    pub fn divide_exact(&self, divisor: &Self) -> Option<Self> {
        self.check_compatible(divisor);
        assert!(!divisor.is_zero(), "division by zero");
        if self.is_zero() {
            return Some(self.clone());
        }
        let (s, g) = self.to_polynomial();
        let (t, h) = divisor.to_polynomial();
        let q = divide_poly(&g, &h, self.prime)?;
        let shift: Vec<i64> = s.iter().zip(&t).map(|(a, b)| a - b).collect();
        Some(ModpLaurent {
            terms: q
                .into_iter()
                .map(|(e, c)| (e.iter().zip(&shift).map(|(a, b)| a + b).collect(), c))
                .collect(),
            ..self.clone()
        })
    }

    /// Largest `k` with `(u^a - 1)^k` dividing `self`.
    pub fn trial_divide_sigma(&self, a: &[i64]) -> Result<u32> {
        if a.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                got: a.len(),
            });
        }
        if a.iter().all(|x| x.rem_euclid(self.prime as i64) == 0) {
            return Err(Error::NotPrimitiveDirection(a.to_vec()));
        }
        if self.is_zero() {
            return Err(Error::ZeroElement("trial division of zero"));
        }
        let f = Self::sigma_minus_one(self.prime, a);
        let mut cur = self.clone();
        let mut k = 0;
        while let Some(q) = cur.divide_exact(&f) {
            cur = q;
            k += 1;
        }
        Ok(k)
    }

    /// Order of vanishing at `T = 0` after writing `u = 1 + T` (one variable).
    pub fn ord_t(&self) -> Result<u32> {
        if self.dims != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.dims,
            });
        }
        if self.is_zero() {
            return Err(Error::ZeroElement("T-adic order of zero"));
        }
        let p = self.prime;
        let (_, g) = self.to_polynomial();
        let deg = g.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
        let mut c = vec![0u64; deg + 1];
        for (e, x) in &g {
            c[e[0] as usize] = *x;
        }
        for i in 0..c.len() {
            for j in (i..c.len() - 1).rev() {
                c[j] = (c[j] + c[j + 1]) % p;
            }
        }
        Ok(c.iter().position(|&x| x != 0).expect("nonzero polynomial") as u32)
    }
}

impl fmt::Display for ModpLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| {
                        let v = if self.dims == 1 {
                            "u".to_string()
                        } else {
                            format!("u{}", i + 1)
                        };
                        if k == 1 {
                            v
                        } else {
                            format!("{v}^{k}")
                        }
                    })
                    .collect();
                match (mono.is_empty(), *c == 1) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{c}*{}", mono.join("*")),
                }
            })
            .collect();
        write!(f, "{} (mod {})", parts.join(" + "), self.prime)
    }
}

/// Free-function form of [`ModpLaurent::ord_t`].
pub fn ord_t_d1(g: &ModpLaurent) -> Result<u32> {
    g.ord_t()
}

/// Free-function form of [`ModpLaurent::trial_divide_sigma`].
pub fn trial_divide_sigma(g: &ModpLaurent, a: &[i64]) -> Result<u32> {
    check_prime(g.prime())?;
    g.trial_divide_sigma(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_63() -> ModpLaurent {
        ModpLaurent::sigma_minus_one(2, &[1, 1]).mul(&ModpLaurent::sigma_minus_one(2, &[1, -1]))
    }

    #[test]
    fn ord_t_examples() {
        let g = ModpLaurent::from_terms(2, 1, [(vec![1], 1), (vec![-1], 1)]);
        assert_eq!(g.ord_t().unwrap(), 2);
        assert_eq!(ModpLaurent::one(5, 1).ord_t().unwrap(), 0);
        assert_eq!(ModpLaurent::sigma_minus_one(3, &[1]).ord_t().unwrap(), 1);
        assert!(ModpLaurent::from_terms(3, 1, []).ord_t().is_err());
    }

    #[test]
    fn trial_division_examples() {
        let g = example_63();
        assert_eq!(g.trial_divide_sigma(&[1, 1]).unwrap(), 1);
        assert_eq!(g.trial_divide_sigma(&[1, -1]).unwrap(), 1);
        assert_eq!(g.trial_divide_sigma(&[1, 0]).unwrap(), 0);
        assert!(g.trial_divide_sigma(&[2, 4]).is_err());
    }

    #[test]
    fn powers_are_counted() {
        let f = ModpLaurent::sigma_minus_one(3, &[1, 2]);
        let g = f.pow(3).mul(&ModpLaurent::sigma_minus_one(3, &[0, 1]));
        assert_eq!(g.trial_divide_sigma(&[1, 2]).unwrap(), 3);
        assert_eq!(g.trial_divide_sigma(&[0, 1]).unwrap(), 1);
        // Over F_2, u1^2 - 1 = (u1 - 1)^2.
        let h = ModpLaurent::sigma_minus_one(2, &[2, 0]);
        assert_eq!(h.trial_divide_sigma(&[1, 0]).unwrap(), 2);
    }

    #[test]
    fn display() {
        let g = ModpLaurent::from_terms(2, 1, [(vec![1], 1), (vec![-1], 1)]);
        assert_eq!(g.to_string(), "u + u^-1 (mod 2)");
    }

    fn arb_modp(p: u64) -> impl Strategy<Value = ModpLaurent> {
        prop::collection::vec((prop::collection::vec(-2i64..3, 2), 0i64..p as i64), 1..5)
            .prop_map(move |ts| ModpLaurent::from_terms(p, 2, ts))
    }

    proptest! {
        #[test]
        fn negating_direction_preserves_multiplicity(
            g in arb_modp(3), a in prop::collection::vec(-3i64..4, 2), k in 0u32..3
        ) {
            prop_assume!(!g.is_zero());
            prop_assume!(a.iter().any(|x| x.rem_euclid(3) != 0));
            let g = g.mul(&ModpLaurent::sigma_minus_one(3, &a).pow(k));
            let neg: Vec<i64> = a.iter().map(|x| -x).collect();
            let m = g.trial_divide_sigma(&a).unwrap();
            prop_assert!(m >= k);
            prop_assert_eq!(m, g.trial_divide_sigma(&neg).unwrap());
        }

        #[test]
        fn exact_division_inverts_multiplication(f in arb_modp(2), g in arb_modp(2)) {
            prop_assume!(!g.is_zero());
            let q = f.mul(&g).divide_exact(&g).unwrap();
            prop_assert_eq!(q, f);
        }
    }
}
