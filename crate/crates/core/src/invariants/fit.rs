//! Exact fitting of
//! `(mu p^n + lambda n) p^{(d-1)n} + sum_i (mu_i p^n + lambda_i n) p^{(d-i-1)n} + nu`.

use crate::algebra::linalg::{solve_rational, Matrix};
use crate::algebra::rational::{p_power, rat, Rational};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub mu: Rational,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub lambda: Rational,
    /// `mu_1 .. mu_{d-1}`.
    #[serde(with = "crate::algebra::rational::serde_rational::vec")]
    pub mu_i: Vec<Rational>,
    /// `lambda_1 .. lambda_{d-1}`.
    #[serde(with = "crate::algebra::rational::serde_rational::vec")]
    pub lambda_i: Vec<Rational>,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub nu: Rational,
    /// Layers used to solve for the unknowns.
    pub solved_on: Vec<u32>,
    /// Layers checked against the solution.
    pub verified_on: Vec<u32>,
    /// Whether every verification layer matched exactly.
    pub consistent: bool,
}

/// Basis values at `n`, ordered `mu, lambda, mu_1.., lambda_1.., nu`.
pub fn growth_basis(n: u32, p: u64, d: usize) -> Vec<Rational> {
    let pn = |k: i64| p_power(p, k * n as i64);
    let nn = rat(n as i64);
    let d = d as i64;
    let mut b = vec![pn(d), &nn * pn(d - 1)];
    for i in 1..d {
        b.push(pn(d - i));
    }
    for i in 1..d {
        b.push(&nn * pn(d - i - 1));
    }
    b.push(rat(1));
    b
}

fn coefficients(fit: &GrowthFit) -> Vec<Rational> {
    let mut c = vec![fit.mu.clone(), fit.lambda.clone()];
    c.extend(fit.mu_i.iter().cloned());
    c.extend(fit.lambda_i.iter().cloned());
    c.push(fit.nu.clone());
    c
}

/// The closed form at layer `n`.
pub fn predict(fit: &GrowthFit, n: u32, p: u64) -> Rational {
    let d = fit.mu_i.len() + 1;
    growth_basis(n, p, d)
        .iter()
        .zip(coefficients(fit))
        .map(|(b, c)| b * c)
        .sum()
}

fn assemble(
    coeffs: Vec<Rational>,
    d: usize,
    points: &[(u32, Rational)],
    solved: usize,
    p: u64,
) -> GrowthFit {
    let mut it = coeffs.into_iter();
    let mu = it.next().expect("mu");
    let lambda = it.next().expect("lambda");
    let mu_i: Vec<Rational> = it.by_ref().take(d - 1).collect();
    let lambda_i: Vec<Rational> = it.by_ref().take(d - 1).collect();
    let nu = it.next().expect("nu");
    let mut fit = GrowthFit {
        mu,
        lambda,
        mu_i,
        lambda_i,
        nu,
        solved_on: points[..solved].iter().map(|(n, _)| *n).collect(),
        verified_on: points[solved..].iter().map(|(n, _)| *n).collect(),
        consistent: true,
    };
    fit.consistent = points[solved..].iter().all(|(n, v)| predict(&fit, *n, p) == *v);
    fit
}

fn solve(rows: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Result<Vec<Rational>> {
    let k = rows.len();
    let a = Matrix::from_rows(rows);
    solve_rational(&a, &rhs).ok_or_else(|| {
        Error::SingularFit(format!("the {k} x {k} system on the chosen layers is singular"))
    })
}

/// Solves for all `2d + 1` coefficients on the first `2d + 1` points and
/// checks the rest; at least one point must be left for checking.
pub fn fit_growth(points: &[(u32, Rational)], p: u64, d: usize) -> Result<GrowthFit> {
    let k = 2 * d + 1;
    if d == 0 || points.len() < k + 1 {
        return Err(Error::SingularFit(format!(
            "{} points given; {} are needed for d = {d}",
            points.len(),
            k + 1
        )));
    }
    let rows = points[..k].iter().map(|(n, _)| growth_basis(*n, p, d)).collect();
    let rhs = points[..k].iter().map(|(_, v)| v.clone()).collect();
    Ok(assemble(solve(rows, rhs)?, d, points, k, p))
}

/// Solves for `mu_i, lambda_i, nu` with `mu` and `lambda` fixed, on the first
/// `2d - 1` points, and checks the rest.
pub fn fit_secondary(
    points: &[(u32, Rational)],
    p: u64,
    d: usize,
    mu: &Rational,
    lambda: &Rational,
) -> Result<GrowthFit> {
    let k = 2 * d - 1;
    if d == 0 || points.len() < k {
        return Err(Error::SingularFit(format!(
            "{} points given; at least {k} are needed for d = {d}",
            points.len()
        )));
    }
    let mut rows = Vec::with_capacity(k);
    let mut rhs = Vec::with_capacity(k);
    for (n, v) in &points[..k] {
        let b = growth_basis(*n, p, d);
        rhs.push(v - mu * &b[0] - lambda * &b[1]);
        rows.push(b[2..].to_vec());
    }
    let mut coeffs = vec![mu.clone(), lambda.clone()];
    coeffs.extend(solve(rows, rhs)?);
    Ok(assemble(coeffs, d, points, k, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;
    use proptest::prelude::*;

    fn pts(v: &[i64]) -> Vec<(u32, Rational)> {
        v.iter().enumerate().map(|(n, x)| (n as u32, rat(*x))).collect()
    }

    #[test]
    fn bouquet_tower() {
        let f = fit_growth(&pts(&[0, 2, 5, 10]), 2, 1).unwrap();
        assert_eq!((f.mu.clone(), f.lambda.clone(), f.nu.clone()), (rat(1), rat(1), rat(-1)));
        assert!(f.consistent);
        assert_eq!(f.verified_on, vec![3]);
        assert!(!fit_growth(&pts(&[0, 2, 5, 11]), 2, 1).unwrap().consistent);
    }

    #[test]
    fn cycle_tower() {
        let f = fit_growth(&pts(&[0, 1, 2, 3, 4]), 2, 1).unwrap();
        assert_eq!((f.mu, f.lambda, f.nu), (rat(0), rat(1), rat(0)));
        assert!(f.consistent);
    }

    #[test]
    fn constant_zero() {
        let f = fit_growth(&pts(&[0; 6]), 3, 2).unwrap();
        assert!(f.consistent);
        assert!(f.mu_i.iter().chain(&f.lambda_i).all(|c| *c == rat(0)));
        assert_eq!(f.nu, rat(0));
    }

    #[test]
    fn torus_secondary() {
        let points: Vec<_> = pts(&[0, 5, 19, 61, 167])[1..].to_vec();
        let f = fit_secondary(&points, 2, 2, &rat(0), &rat(2)).unwrap();
        assert_eq!((f.mu_i.clone(), f.lambda_i.clone(), f.nu.clone()), (vec![rat(4)], vec![rat(-6)], rat(-1)));
        assert!(f.consistent);
        assert_eq!(f.verified_on, vec![4]);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(fit_growth(&pts(&[0, 1, 2]), 2, 1), Err(Error::SingularFit(_))));
        let repeated = vec![(1, rat(0)), (1, rat(0)), (1, rat(0)), (2, rat(0))];
        assert!(matches!(fit_growth(&repeated, 2, 1), Err(Error::SingularFit(_))));
    }

    proptest! {
        #[test]
        fn round_trip(
            p in prop::sample::select(vec![2u64, 3, 5]),
            d in 1usize..=3,
            c in prop::collection::vec((-20i64..20, 1i64..4), 7),
            start in 0u32..2,
        ) {
            let coeffs: Vec<Rational> = c.iter().take(2 * d + 1).map(|(a, b)| ratio(*a, *b)).collect();
            let truth = assemble(coeffs.clone(), d, &[(0, rat(0))], 1, p);
            let points: Vec<_> = (start..start + 2 * d as u32 + 3)
                .map(|n| (n, predict(&truth, n, p)))
                .collect();
            let f = fit_growth(&points, p, d).unwrap();
            prop_assert!(f.consistent);
            prop_assert_eq!(coefficients(&f), coeffs.clone());
            let s = fit_secondary(&points, p, d, &coeffs[0], &coeffs[1]).unwrap();
            prop_assert!(s.consistent);
            prop_assert_eq!(coefficients(&s), coeffs);
        }
    }
}
