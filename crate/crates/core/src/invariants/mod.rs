//! Iwasawa invariants of characteristic elements and the growth of
//! `v_p(kappa_n)` along a tower.

mod fit;
mod kida;
mod tower;

pub use fit::{fit_growth, fit_secondary, growth_basis, predict, GrowthFit};
pub use kida::{kida_verify, KidaHypotheses, KidaReport};
pub use tower::{
    tower_report, IwasawaReport, LayerRow, TowerOptions, TowerOutcome, ZeroCaseReport,
};
pub(crate) use tower::{series_end, stable_fit};

use crate::algebra::cyclotomic::CyclotomicNumber;
use crate::algebra::rational::{rat, Rational};
use crate::algebra::valuation::Valuation;
use crate::charelem::CharElement;
use crate::error::{Error, Result};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

/// Default half-width of the box of directions tried for `d >= 2`.
pub const DEFAULT_BOX: u32 = 4;

/// `mu(Q)`: the minimum `p`-adic valuation of the coefficients.
pub fn mu_invariant(q: &CharElement) -> Result<Rational> {
    q.poly
        .content_valuation(q.prime)
        .map(rat)
        .ok_or(Error::ZeroElement("mu-invariant of zero"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divisor {
    /// Exponent vector `a` of the prime `u^a - 1`.
    pub direction: Vec<i64>,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaCertificate {
    /// Half-width of the search box; `None` for one variable, where the
    /// `T`-adic order is exact.
    pub box_bound: Option<u32>,
    pub divisors: Vec<Divisor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaResult {
    /// `lambda(Q)` as the sum of certified multiplicities.
    pub lambda_q: u64,
    /// `lambda(Q) - 1` for `d = 1`, `lambda(Q)` otherwise.
    pub tower_lambda: u64,
    pub certificate: LambdaCertificate,
}

/// Primitive integer vectors in `[-b, b]^d` up to sign, first nonzero entry
/// positive, in lexicographic order.
pub fn primitive_directions(d: usize, b: u32) -> Vec<Vec<i64>> {
    let b = b as i64;
    let side = (2 * b + 1) as usize;
    let total = side.pow(d as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut r = idx;
        let mut a = vec![0i64; d];
        for i in (0..d).rev() {
            a[i] = (r % side) as i64 - b;
            r /= side;
        }
        let Some(first) = a.iter().find(|&&x| x != 0) else {
            continue;
        };
        if *first < 0 {
            continue;
        }
        let g = a.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 1 {
            out.push(a);
        }
    }
    out
}

/// `lambda(Q)`: the `T`-adic order of the reduction for `d = 1`, otherwise
/// the multiplicities of `u^a - 1` over primitive `a` with `|a|_inf <= box`.
pub fn lambda_invariant(q: &CharElement, box_bound: u32) -> Result<LambdaResult> {
    let (_, f0) = q.poly.normalize(q.prime)?;
    let fbar = f0.mod_p_reduce(q.prime)?;
    if q.dims == 1 {
        let k = fbar.ord_t()?;
        let divisors = if k > 0 {
            vec![Divisor {
                direction: vec![1],
                multiplicity: k,
            }]
        } else {
            Vec::new()
        };
        return Ok(LambdaResult {
            lambda_q: k as u64,
            tower_lambda: (k as u64).saturating_sub(1),
            certificate: LambdaCertificate {
                box_bound: None,
                divisors,
            },
        });
    }
    let dirs = primitive_directions(q.dims, box_bound);
    let mults: Vec<u32> = dirs
        .par_iter()
        .map(|a| fbar.trial_divide_sigma(a))
        .collect::<Result<_>>()?;
    let divisors: Vec<Divisor> = dirs
        .into_iter()
        .zip(mults)
        .filter(|(_, k)| *k > 0)
        .map(|(direction, multiplicity)| Divisor {
            direction,
            multiplicity,
        })
        .collect();
    let lambda_q = divisors.iter().map(|d| d.multiplicity as u64).sum();
    Ok(LambdaResult {
        lambda_q,
        tower_lambda: lambda_q,
        certificate: LambdaCertificate {
            box_bound: Some(box_bound),
            divisors,
        },
    })
}

/// Checks a certificate: dividing the reduction by the certified product
/// leaves a cofactor divisible by none of the certified primes.
pub fn verify_certificate(q: &CharElement, cert: &LambdaCertificate) -> Result<bool> {
    let (_, f0) = q.poly.normalize(q.prime)?;
    let mut g = f0.mod_p_reduce(q.prime)?;
    for dv in &cert.divisors {
        let f = crate::algebra::modp::ModpLaurent::sigma_minus_one(q.prime, &dv.direction);
        match g.divide_exact(&f.pow(dv.multiplicity)) {
            Some(r) => g = r,
            None => return Ok(false),
        }
    }
    for dv in &cert.divisors {
        if g.trial_divide_sigma(&dv.direction)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exponent vectors of `(Z/p^n)^d`, last coordinate fastest.
pub fn layer_exponents(p: u64, n: u32, d: usize) -> Vec<Vec<u64>> {
    let m = p.pow(n);
    let total = (m as usize).pow(d as u32);
    (0..total)
        .map(|idx| {
            let mut r = idx as u64;
            let mut k = vec![0u64; d];
            for i in (0..d).rev() {
                k[i] = r % m;
                r /= m;
            }
            k
        })
        .collect()
}

fn val_p_u64(mut k: u64, p: u64) -> u32 {
    let mut v = 0;
    while k.is_multiple_of(p) {
        k /= p;
        v += 1;
    }
    v
}

pub(crate) fn phi(p: u64, j: u32) -> u64 {
    if j == 0 {
        1
    } else {
        (p - 1) * p.pow(j - 1)
    }
}

/// For a nonzero `k` in `(Z/p^n)^d`, the Galois-orbit data: the level
/// `n - j` of the root it defines, the reduced exponent `k / p^j`, and
/// whether `k` is the canonical orbit representative (first coordinate of
/// minimal valuation equal to `p^j`).
fn orbit_data(k: &[u64], p: u64, n: u32) -> (u32, Vec<u64>, bool) {
    let j = k.iter().filter(|&&x| x != 0).map(|&x| val_p_u64(x, p)).min().expect("nonzero");
    let pj = p.pow(j);
    let first = k
        .iter()
        .find(|&&x| x != 0 && val_p_u64(x, p) == j)
        .copied()
        .expect("nonzero");
    (n - j, k.iter().map(|x| x / pj).collect(), first == pj)
}

fn evaluate(q: &CharElement, level: u32, k: &[u64], layer: u32, exps: &[u64]) -> Result<CyclotomicNumber> {
    let v = q.poly.eval_roots(q.prime, level, k).simplify();
    if v.is_zero() {
        return Err(Error::Vanishing {
            layer,
            exponents: exps.to_vec(),
        });
    }
    Ok(v)
}

/// `sum over nontrivial k in (Z/p^n)^d of v_p(Q(zeta^k))`, one evaluation per
/// Galois orbit.
pub fn valuation_sum(q: &CharElement, n: u32) -> Result<Rational> {
    let p = q.prime;
    let terms: Vec<Rational> = layer_exponents(p, n, q.dims)
        .into_par_iter()
        .filter(|k| k.iter().any(|&x| x != 0))
        .filter_map(|k| {
            let (level, reduced, canonical) = orbit_data(&k, p, n);
            canonical.then(|| {
                let v = evaluate(q, level, &reduced, n, &k)?;
                let val = finite(v.valuation_fast())?;
                Ok(val * Rational::from_integer(phi(p, level).into()))
            })
        })
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().sum())
}

/// [`valuation_sum`] evaluated at every nontrivial root tuple through the
/// norm.
pub fn valuation_sum_naive(q: &CharElement, n: u32) -> Result<Rational> {
    let terms: Vec<Rational> = layer_exponents(q.prime, n, q.dims)
        .into_par_iter()
        .filter(|k| k.iter().any(|&x| x != 0))
        .map(|k| finite(evaluate(q, n, &k, n, &k)?.valuation()))
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().sum())
}

/// `prod over nontrivial k of Q(zeta^k)`: one norm per Galois orbit.
pub(crate) fn character_product(q: &CharElement, n: u32) -> Rational {
    let p = q.prime;
    layer_exponents(p, n, q.dims)
        .into_par_iter()
        .filter(|k| k.iter().any(|&x| x != 0))
        .filter_map(|k| {
            let (level, reduced, canonical) = orbit_data(&k, p, n);
            canonical.then(|| q.poly.eval_roots(p, level, &reduced).norm())
        })
        .reduce(|| rat(1), |a, b| a * b)
}

/// Nontrivial exponent vectors at layer `n` where `Q` vanishes.
pub fn vanishing_exponents(q: &CharElement, n: u32) -> Vec<Vec<u64>> {
    layer_exponents(q.prime, n, q.dims)
        .into_par_iter()
        .filter(|k| k.iter().any(|&x| x != 0))
        .filter(|k| q.poly.eval_roots(q.prime, n, k).is_zero())
        .collect()
}

fn finite(v: Valuation) -> Result<Rational> {
    match v {
        Valuation::Finite(q) => Ok(q),
        Valuation::Infinity => Err(Error::ZeroElement("valuation of zero")),
    }
}
