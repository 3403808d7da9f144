//! Grover-type discrete-time quantum walks on darts, their characteristic
//! polynomials, and valuation growth of `det(aI - U_n)` along a tower.

use crate::algebra::laurent::LaurentPolynomial;
use crate::algebra::linalg::{berkowitz_charpoly, det, det_rational, Matrix};
use crate::algebra::poly::UniPoly;
use crate::algebra::rational::{format_rational, rat, ratio, Rational};
use crate::algebra::ring::Ring;
use crate::algebra::valuation::{val_p_rational, Valuation};
use crate::charelem::{laurent_det, laurent_weight_matrix, CharElement, Route};
use crate::error::{Error, Result};
use crate::graph::{tower_connected, tower_layer, WeightedGraph, ZVoltage};
use crate::invariants::{
    character_product, fit_growth, lambda_invariant, mu_invariant, phi, predict, series_end,
    stable_fit, valuation_sum, GrowthFit, LambdaCertificate, TowerOptions,
};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

fn require_degrees(x: &WeightedGraph) -> Result<()> {
    match (0..x.num_vertices()).find(|&v| x.degree(v) == 0) {
        Some(v) => Err(Error::InvalidGraph(format!(
            "vertex {} has no darts",
            x.vertices()[v]
        ))),
        None => Ok(()),
    }
}

fn walk_weights(x: &WeightedGraph) -> WeightedGraph {
    x.reweighted(|_, d| ratio(2, x.degree(d.origin) as i64))
}

/// Reweights every dart by `2 / d_{o(e)}`; rejects graphs whose weighted
/// matrix is then asymmetric.
pub fn qwalk_weights(x: &WeightedGraph) -> Result<WeightedGraph> {
    require_degrees(x)?;
    let y = walk_weights(x);
    if !y.weighted_matrix().is_symmetric() {
        return Err(Error::InvalidGraph(
            "walk weights 2/d give an asymmetric weighted matrix".into(),
        ));
    }
    Ok(y)
}

/// The `2l x 2l` transition matrix: `2/d_{o(e_i)}` when `o(e_i) = t(e_j)` and
/// `e_j` is not the reverse of `e_i`, `2/d_{o(e_i)} - 1` when it is.
pub fn transition_matrix(x: &WeightedGraph) -> Result<Matrix<Rational>> {
    require_degrees(x)?;
    let n = x.num_darts();
    Ok(Matrix::from_fn(n, n, |i, j| {
        let o = x.dart(i).origin;
        let w = ratio(2, x.degree(o) as i64);
        if x.inverse(i) == j {
            w - rat(1)
        } else if x.dart(j).terminus == o {
            w
        } else {
            rat(0)
        }
    }))
}

/// Both sides of `det(uI - U) = (u^2 - 1)^{l - m} det(u^2 I - uW + (D - I))`,
/// after moving a negative power of `u^2 - 1` to the other side.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSides {
    pub lhs: UniPoly<Rational>,
    pub rhs: UniPoly<Rational>,
}

fn u_squared_minus_one() -> UniPoly<Rational> {
    UniPoly::new(vec![rat(-1), rat(0), rat(1)])
}

pub fn spectral_sides(x: &WeightedGraph) -> Result<SpectralSides> {
    let u = transition_matrix(x)?;
    let lhs = UniPoly::new(berkowitz_charpoly(&u));
    let (w, d) = walk_weights(x).weighted_matrices();
    let m = x.num_vertices();
    let one = Matrix::<Rational>::identity(m);
    let poly = Matrix::from_fn(m, m, |i, j| {
        UniPoly::new(vec![
            d.get(i, j) - one.get(i, j),
            -w.get(i, j).clone(),
            one.get(i, j).clone(),
        ])
    });
    let core = det(&poly);
    let e = x.num_edges() as i64 - m as i64;
    let f = u_squared_minus_one().pow(e.unsigned_abs());
    Ok(if e >= 0 {
        SpectralSides { lhs, rhs: core.mul(&f) }
    } else {
        SpectralSides { lhs: lhs.mul(&f), rhs: core }
    })
}

/// Checks the characteristic-polynomial identity exactly.
pub fn spectral_identity_check(x: &WeightedGraph) -> Result<bool> {
    let s = spectral_sides(x)?;
    Ok(s.lhs == s.rhs)
}

/// `det(aI - U)`; a zero value is reported as an eigenvalue hit at `layer`.
pub fn charpoly_at(u: &Matrix<Rational>, a: &Rational, layer: u32) -> Result<Rational> {
    let n = u.rows();
    let m = Matrix::<Rational>::identity(n).scale(a).sub(u);
    let v = det_rational(&m);
    if v.is_zero() {
        return Err(Error::EigenvalueHit {
            layer,
            value: format_rational(a),
        });
    }
    Ok(v)
}

/// `Q_a = det(a^2 I - a W_tau + (D - I))` for the walk weights.
pub fn qa_char_element(x: &WeightedGraph, alpha: &ZVoltage, a: &Rational, p: u64) -> Result<CharElement> {
    let xw = qwalk_weights(x)?;
    let dims = alpha.dims();
    let m = xw.num_vertices();
    let wt = laurent_weight_matrix(&xw, alpha);
    let dm = xw.degree_matrix();
    let a2 = a * a;
    let mat = Matrix::from_fn(m, m, |i, j| {
        let mut c = dm.get(i, j).clone();
        if i == j {
            c += &a2 - rat(1);
        }
        LaurentPolynomial::constant(dims, c).sub(&wt.get(i, j).scale(a))
    });
    Ok(CharElement {
        prime: p,
        dims,
        route: Route::Direct,
        poly: laurent_det(&mat).with_dims(dims),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkRow {
    pub n: u32,
    /// Darts of `X_n`.
    pub darts: usize,
    #[serde(with = "crate::algebra::rational::serde_rational::option")]
    pub det_direct: Option<Rational>,
    /// `(a^2 - 1)^{-p^{dn} chi} prod_psi Q_a(zeta_psi)`.
    #[serde(with = "crate::algebra::rational::serde_rational::option")]
    pub det_factorized: Option<Rational>,
    pub valuation: Valuation,
    #[serde(with = "crate::algebra::rational::serde_rational::option")]
    pub predicted: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub a: Rational,
    pub p: u64,
    pub d: usize,
    pub chi: i64,
    /// `v_p(a^2 - 1)`.
    pub val_a2_minus_1: Valuation,
    pub char_element_a: String,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub mu_qa: Rational,
    pub lambda_qa: u64,
    pub certificate: LambdaCertificate,
    /// `mu(Q_a) - chi v_p(a^2 - 1)`.
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub mu: Rational,
    pub lambda: u64,
    pub secondary: Option<GrowthFit>,
    pub full_fit: Option<GrowthFit>,
    pub stable_from: Option<u32>,
    /// For `d = 1`, the least `n` with `phi(p^n) >= lambda(Q_a)`.
    pub provable_stable_from: Option<u32>,
    pub closed_form_holds: bool,
    pub table: Vec<WalkRow>,
    pub warnings: Vec<String>,
}

fn finite(v: Valuation, what: &str) -> Result<Rational> {
    v.finite()
        .cloned()
        .ok_or_else(|| Error::InvalidEvaluationPoint(format!("{what} is zero")))
}

/// Valuation growth of `det(aI - U_n)` on the tower of `X` (unweighted; walk
/// weights are applied here).
///
/// Layers `n <= nmax` are computed as explicit determinants and through the
/// character factorization; further layers needed for fitting use the
/// factorization alone.
pub fn qwalk_growth(
    x: &WeightedGraph,
    alpha: &ZVoltage,
    p: u64,
    a: &Rational,
    nmax: u32,
    opts: &TowerOptions,
) -> Result<GrowthReport> {
    let xw = qwalk_weights(x)?;
    xw.require_valid()?;
    let d = alpha.dims();
    if d == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    if !tower_connected(&xw, alpha, p)? {
        return Err(Error::Disconnected("the tower layers are disconnected".into()));
    }
    if let Some(limit) = opts.size_limit {
        let size = (xw.num_vertices() as f64) * (p as f64).powi((d * nmax as usize) as i32);
        if size > limit as f64 {
            return Err(Error::TooLarge {
                vertices: size.min(usize::MAX as f64) as usize,
                limit,
            });
        }
    }
    let chi = xw.euler_characteristic();
    let a2m1 = a * a - rat(1);
    let val_a2_minus_1 = val_p_rational(&a2m1, p)?;
    let qa = qa_char_element(x, alpha, a, p)?;
    let trivial = qa.poly.eval_at_one();
    let end = series_end(p, d, nmax, opts.max_characters);

    // sum over all characters, trivial included, plus the (a^2 - 1) factor
    let factorized_valuation = |n: u32| -> Result<Rational> {
        let sheets = (p as i64).pow(d as u32 * n);
        let mut v = valuation_sum(&qa, n).map_err(|e| match e {
            Error::Vanishing { layer, .. } => Error::EigenvalueHit {
                layer,
                value: format_rational(a),
            },
            e => e,
        })?;
        if trivial.is_zero() {
            return Err(Error::EigenvalueHit { layer: n, value: format_rational(a) });
        }
        v += finite(val_p_rational(&trivial, p)?, "Q_a(1)")?;
        if chi != 0 {
            v -= rat(sheets * chi) * finite(val_a2_minus_1.clone(), "a^2 - 1")?;
        }
        Ok(v)
    };

    let mut table: Vec<WalkRow> = (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let layer = tower_layer(&xw, alpha, p, n)?;
            let u = transition_matrix(layer.graph())?;
            let direct = charpoly_at(&u, a, n)?;
            let sheets = (p as i64).pow(d as u32 * n);
            let factorized = character_product(&qa, n) * &trivial * a2m1.pow(-(sheets * chi) as i32);
            if direct != factorized {
                return Err(Error::mismatch(
                    format!("det(aI - U_{n}) = (a^2 - 1)^(-p^(dn) chi) * prod Q_a(zeta_psi)"),
                    format_rational(&direct),
                    format_rational(&factorized),
                ));
            }
            Ok(WalkRow {
                n,
                darts: u.rows(),
                valuation: val_p_rational(&direct, p)?,
                det_direct: Some(direct),
                det_factorized: Some(factorized),
                predicted: None,
            })
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::new();
    for n in 0..=end {
        let v = factorized_valuation(n)?;
        if let Some(row) = table.iter().find(|r| r.n == n) {
            if row.valuation != Valuation::Finite(v.clone()) {
                return Err(Error::mismatch(
                    format!("v_p(det(aI - U_{n})) = sum of v_p over characters"),
                    &row.valuation,
                    format_rational(&v),
                ));
            }
        } else {
            table.push(WalkRow {
                n,
                darts: xw.num_darts() * (p as usize).pow(d as u32 * n),
                det_direct: None,
                det_factorized: None,
                valuation: Valuation::Finite(v.clone()),
                predicted: None,
            });
        }
        points.push((n, v));
    }

    let mu_qa = mu_invariant(&qa)?;
    let lam = lambda_invariant(&qa, opts.box_bound)?;
    let mu = if chi == 0 {
        mu_qa.clone()
    } else {
        &mu_qa - rat(chi) * finite(val_a2_minus_1.clone(), "a^2 - 1")?
    };
    let lambda = rat(lam.lambda_q as i64);
    let mut warnings = Vec::new();
    let stable = stable_fit(&points, p, d, &mu, &lambda);
    if stable.is_none() {
        warnings.push(format!(
            "no stable range on layers 0..={end} matches the closed form with mu = {}, lambda = {}",
            format_rational(&mu),
            lam.lambda_q
        ));
    }
    let (mut secondary, mut full_fit, mut stable_from) = (None, None, None);
    if let Some((s, fit)) = stable {
        for row in table.iter_mut().filter(|r| r.n >= s as u32) {
            row.predicted = Some(predict(&fit, row.n, p));
        }
        stable_from = Some(points[s].0);
        if let Ok(f) = fit_growth(&points[s..], p, d) {
            if f.mu != mu || f.lambda != lambda {
                warnings.push(format!(
                    "full fit gives mu = {}, lambda = {}",
                    format_rational(&f.mu),
                    format_rational(&f.lambda)
                ));
            }
            full_fit = Some(f);
        }
        secondary = Some(fit);
    }
    table.sort_by_key(|r| r.n);
    let provable_stable_from =
        (d == 1).then(|| (0..).find(|&n| phi(p, n) >= lam.lambda_q).expect("phi is unbounded"));
    Ok(GrowthReport {
        a: a.clone(),
        p,
        d,
        chi,
        val_a2_minus_1,
        char_element_a: qa.poly.to_string(),
        mu_qa,
        lambda_qa: lam.lambda_q,
        certificate: lam.certificate,
        mu,
        lambda: lam.lambda_q,
        closed_form_holds: secondary.is_some(),
        secondary,
        full_fit,
        stable_from,
        provable_stable_from,
        table,
        warnings,
    })
}

/// `(a^k - 1)^2`, the closed form of `det(aI - U_n)` on a `k`-cycle.
pub fn cycle_walk_det(a: &Rational, k: usize) -> Rational {
    let v = a.pow(k as i32) - Rational::one();
    &v * &v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::EdgeSpec;
    use proptest::prelude::*;

    fn triangle() -> (WeightedGraph, ZVoltage) {
        fixtures::triangle_tower(rat(1), rat(1), rat(1))
    }

    fn star() -> WeightedGraph {
        let v: Vec<String> = ["c", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let e: Vec<EdgeSpec> = ["x", "y", "z"]
            .iter()
            .enumerate()
            .map(|(i, t)| EdgeSpec::new(&format!("e{i}"), "c", t, rat(1)))
            .collect();
        WeightedGraph::from_edges(v, &e).unwrap()
    }

    #[test]
    fn weights() {
        let (x, _) = triangle();
        let w = qwalk_weights(&x).unwrap();
        assert!(w.darts().iter().all(|d| d.weight == rat(1)));
        assert_eq!(w.degree_matrix(), Matrix::identity(3).scale(&rat(2)));
        // each loop contributes two darts, so B2 is 4-regular
        let b2 = fixtures::bouquet_b2(rat(1), rat(1));
        assert!(qwalk_weights(&b2).unwrap().darts().iter().all(|d| d.weight == ratio(1, 2)));
        assert!(matches!(qwalk_weights(&star()), Err(Error::InvalidGraph(_))));
        assert!(transition_matrix(&star()).is_ok());
    }

    #[test]
    fn transition_examples() {
        let u = transition_matrix(&fixtures::single_edge(rat(1))).unwrap();
        assert_eq!(u.to_rows(), vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]);
        let (x, _) = triangle();
        let u = transition_matrix(&x).unwrap();
        for i in 0..6 {
            assert_eq!(*u.get(i, x.inverse(i)), rat(0));
            assert_eq!((0..6).filter(|&j| *u.get(i, j) == rat(1)).count(), 1);
        }
    }

    #[test]
    fn rows_sum_to_one() {
        for x in [star(), fixtures::cycle(4), fixtures::bouquet_b2(rat(1), rat(1))] {
            let u = transition_matrix(&x).unwrap();
            let ones = vec![rat(1); u.rows()];
            assert_eq!(u.mul_vec(&ones), ones);
        }
    }

    #[test]
    fn spectral_examples() {
        let (x, _) = triangle();
        assert!(spectral_identity_check(&x).unwrap());
        assert!(spectral_identity_check(&fixtures::cycle(4)).unwrap());
        let e = fixtures::single_edge(rat(1));
        let s = spectral_sides(&e).unwrap();
        assert_eq!(s.rhs, u_squared_minus_one().pow(2));
        assert!(spectral_identity_check(&e).unwrap());
        assert!(spectral_identity_check(&star()).unwrap());
    }

    #[test]
    fn charpoly_values() {
        let (x, a) = triangle();
        let u0 = transition_matrix(&x).unwrap();
        assert_eq!(charpoly_at(&u0, &rat(3), 0).unwrap(), rat(676));
        assert!(matches!(charpoly_at(&u0, &rat(1), 0), Err(Error::EigenvalueHit { layer: 0, .. })));
        let u1 = transition_matrix(tower_layer(&x, &a, 2, 1).unwrap().graph()).unwrap();
        assert_eq!(charpoly_at(&u1, &rat(2), 1).unwrap(), rat(3969));
        for n in 0..=3 {
            let un = transition_matrix(tower_layer(&x, &a, 2, n).unwrap().graph()).unwrap();
            for q in [rat(3), rat(2), ratio(1, 2), rat(5)] {
                assert_eq!(charpoly_at(&un, &q, n).unwrap(), cycle_walk_det(&q, 3 << n));
            }
        }
    }

    #[test]
    fn qa_triangle() {
        let (x, a) = triangle();
        let q = qa_char_element(&x, &a, &rat(3), 2).unwrap();
        let expect = LaurentPolynomial::from_terms(
            1,
            [(vec![1], rat(-27)), (vec![0], rat(676 + 54)), (vec![-1], rat(-27))],
        );
        assert_eq!(q.poly, expect);
    }

    #[test]
    fn growth_a3() {
        let (x, a) = triangle();
        let r = qwalk_growth(&x, &a, 2, &rat(3), 4, &TowerOptions::default()).unwrap();
        let v: Vec<_> = r.table.iter().map(|row| row.valuation.clone()).collect();
        let want: Vec<_> = [2, 6, 8, 10, 12].iter().map(|&k| Valuation::from_i64(k)).collect();
        assert_eq!(v, want);
        assert_eq!((r.mu.clone(), r.lambda, r.chi), (rat(0), 2, 0));
        assert_eq!(r.stable_from, Some(1));
        assert_eq!(r.secondary.as_ref().unwrap().nu, rat(4));
        assert_eq!(r.provable_stable_from, Some(2));
        assert!(r.closed_form_holds);
    }

    #[test]
    fn growth_a2_and_half() {
        let (x, a) = triangle();
        let r = qwalk_growth(&x, &a, 2, &rat(2), 3, &TowerOptions::default()).unwrap();
        assert!(r.table.iter().all(|row| row.valuation == Valuation::from_i64(0)));
        assert_eq!((r.mu.clone(), r.lambda, r.stable_from), (rat(0), 0, Some(0)));
        let r = qwalk_growth(&x, &a, 2, &ratio(1, 2), 3, &TowerOptions::default()).unwrap();
        for row in &r.table {
            assert_eq!(row.valuation, Valuation::from_i64(-6 << row.n));
        }
        assert_eq!((r.mu.clone(), r.lambda), (rat(-6), 0));
    }

    #[test]
    fn growth_eigenvalue_hit() {
        let (x, a) = triangle();
        assert!(matches!(
            qwalk_growth(&x, &a, 2, &rat(1), 1, &TowerOptions::default()),
            Err(Error::EigenvalueHit { .. })
        ));
        assert!(matches!(
            qwalk_growth(&x, &a, 2, &rat(-1), 1, &TowerOptions::default()),
            Err(Error::EigenvalueHit { layer: 1, .. })
        ));
    }

    #[test]
    fn growth_with_nonzero_chi() {
        // B2 with alpha = (1, 1): chi = -1, so the (a^2 - 1) factor contributes
        let x = fixtures::bouquet_b2(rat(1), rat(1));
        let alpha = fixtures::voltage(&x, &[&[1], &[1]]);
        let r = qwalk_growth(&x, &alpha, 2, &rat(3), 2, &TowerOptions::default()).unwrap();
        assert_eq!(r.chi, -1);
        assert_eq!(r.val_a2_minus_1, Valuation::from_i64(3));
        assert!(r.closed_form_holds, "{:?}", r.warnings);
    }

    fn regular_graph(n: usize, perms: &[Vec<usize>], matching: Option<&[usize]>) -> WeightedGraph {
        let v: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut e = Vec::new();
        for (k, p) in perms.iter().enumerate() {
            for i in 0..n {
                e.push(EdgeSpec::new(&format!("p{k}_{i}"), &v[i], &v[p[i]], rat(1)));
            }
        }
        if let Some(m) = matching {
            for i in 0..n {
                if i < m[i] {
                    e.push(EdgeSpec::new(&format!("m{i}"), &v[i], &v[m[i]], rat(1)));
                }
            }
        }
        WeightedGraph::from_edges(v, &e).unwrap()
    }

    fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn spectral_identity_on_regular_graphs(
            half in 1usize..=4,
            degree in prop::sample::select(vec![2usize, 3, 4]),
            seeds in (perm(8), perm(8), perm(8)),
        ) {
            let n = 2 * half;
            let shrink = |p: &Vec<usize>| -> Vec<usize> {
                let mut q: Vec<usize> = p.iter().copied().filter(|&i| i < n).collect();
                q.truncate(n);
                q
            };
            let (a, b, c) = (shrink(&seeds.0), shrink(&seeds.1), shrink(&seeds.2));
            let x = match degree {
                2 => regular_graph(n, &[a], None),
                4 => regular_graph(n, &[a, b], None),
                _ => {
                    // perfect matching pairing consecutive entries of c
                    let mut m = vec![0; n];
                    for k in 0..half {
                        m[c[2 * k]] = c[2 * k + 1];
                        m[c[2 * k + 1]] = c[2 * k];
                    }
                    regular_graph(n, &[a], Some(&m))
                }
            };
            prop_assert!((0..n).all(|v| x.degree(v) == degree));
            prop_assert!(spectral_identity_check(&x).unwrap());
        }
    }
}
