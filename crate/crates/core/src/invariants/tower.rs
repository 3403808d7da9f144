//! Layer-by-layer computation of `kappa_n` along a `Z_p^d`-tower and
//! comparison with the Iwasawa-type closed form.

use super::fit::{fit_growth, fit_secondary, predict, GrowthFit};
use super::{
    character_product, lambda_invariant, mu_invariant, valuation_sum, vanishing_exponents,
    LambdaCertificate, DEFAULT_BOX,
};
use crate::algebra::rational::{format_rational, p_power, rat, Rational};
use crate::algebra::valuation::{val_p_rational, Valuation};
use crate::charelem::{char_element_direct, CharElement};
use crate::complexity::kappa_matrix_tree;
use crate::error::{Error, Result};
use crate::graph::{tower_connected, tower_layer, WeightedGraph, ZVoltage};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerOptions {
    /// Half-width of the direction box for `lambda` when `d >= 2`.
    pub box_bound: u32,
    /// Bound on `|V(X)| p^{d nmax}`; `None` disables the check.
    pub size_limit: Option<usize>,
    /// Bound on `p^{dn}` for layers computed from valuation sums alone.
    pub max_characters: usize,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            box_bound: DEFAULT_BOX,
            size_limit: Some(2500),
            max_characters: 1 << 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerRow {
    pub n: u32,
    /// Vertices of `X_n`.
    pub vertices: usize,
    /// Matrix-tree value on the explicit layer; absent for layers computed
    /// from valuation sums only.
    #[serde(with = "crate::algebra::rational::serde_rational::option")]
    pub kappa_direct: Option<Rational>,
    /// `kappa(X) / p^{dn} * prod_{psi != 1} Q(zeta_psi)`.
    #[serde(with = "crate::algebra::rational::serde_rational::option")]
    pub kappa_product: Option<Rational>,
    /// `v_p(kappa_n)`.
    pub valuation: Valuation,
    /// Closed-form prediction, for layers in the stable range.
    #[serde(with = "crate::algebra::rational::serde_rational::option")]
    pub predicted: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IwasawaReport {
    pub p: u64,
    pub d: usize,
    pub char_element: String,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub mu: Rational,
    /// `lambda(Q)`.
    pub lambda_q: u64,
    /// Tower `lambda`: `lambda(Q) - 1` for `d = 1`.
    pub lambda: u64,
    pub certificate: LambdaCertificate,
    /// Empirical secondary coefficients, stable on the computed range.
    pub secondary: Option<GrowthFit>,
    /// All `2d + 1` coefficients refitted from the table, when enough stable
    /// layers were computed.
    pub full_fit: Option<GrowthFit>,
    pub stable_from: Option<u32>,
    /// For `d = 1`, the least `n` with `phi(p^n) >= lambda(Q)`.
    pub provable_stable_from: Option<u32>,
    pub closed_form_holds: bool,
    pub table: Vec<LayerRow>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCaseReport {
    pub p: u64,
    pub d: usize,
    pub char_element: String,
    pub char_element_is_zero: bool,
    /// First layer with `kappa_n = 0`.
    pub first_zero_layer: u32,
    /// Exponent vectors of the nontrivial characters of that layer whose
    /// value vanishes.
    pub vanishing: Vec<Vec<u64>>,
    pub table: Vec<LayerRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TowerOutcome {
    Iwasawa(IwasawaReport),
    ZeroCase(ZeroCaseReport),
}

fn explicit_rows(
    x: &WeightedGraph,
    alpha: &ZVoltage,
    q: &CharElement,
    kappa0: &Rational,
    nmax: u32,
) -> Result<Vec<LayerRow>> {
    let p = q.prime;
    let d = q.dims as i64;
    (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let layer = tower_layer(x, alpha, p, n)?;
            let direct = kappa_matrix_tree(layer.graph());
            let product = kappa0 * p_power(p, -d * n as i64) * character_product(q, n);
            if direct != product {
                return Err(Error::mismatch(
                    format!("kappa_{n} by matrix-tree = kappa_{n} by character product"),
                    format_rational(&direct),
                    format_rational(&product),
                ));
            }
            Ok(LayerRow {
                n,
                vertices: layer.graph().num_vertices(),
                valuation: val_p_rational(&direct, p)?,
                kappa_direct: Some(direct),
                kappa_product: Some(product),
                predicted: None,
            })
        })
        .collect()
}

pub(crate) fn series_end(p: u64, d: usize, nmax: u32, max_characters: usize) -> u32 {
    let want = nmax.max(2 * d as u32 + 2);
    let mut n = nmax;
    while n < want && (p as f64).powi((d * (n as usize + 1)) as i32) <= max_characters as f64 {
        n += 1;
    }
    n
}

/// First `s` from which the secondary fit verifies on every later point.
pub(crate) fn stable_fit(
    points: &[(u32, Rational)],
    p: u64,
    d: usize,
    mu: &Rational,
    lambda: &Rational,
) -> Option<(usize, GrowthFit)> {
    (0..points.len()).find_map(|s| {
        let f = fit_secondary(&points[s..], p, d, mu, lambda).ok()?;
        (f.consistent && !f.verified_on.is_empty()).then_some((s, f))
    })
}

/// Builds the tower report for `X` with `Z^d`-voltage `alpha`.
///
/// `kappa_n` is computed by the matrix-tree theorem on the explicit layer
/// and by the character product for `n <= nmax`; further layers needed for
/// fitting use the chained valuation identity alone.
pub fn tower_report(
    x: &WeightedGraph,
    alpha: &ZVoltage,
    p: u64,
    nmax: u32,
    opts: &TowerOptions,
) -> Result<TowerOutcome> {
    x.require_valid()?;
    let d = alpha.dims();
    if d == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    if !tower_connected(x, alpha, p)? {
        return Err(Error::Disconnected("the tower layers are disconnected".into()));
    }
    if let Some(limit) = opts.size_limit {
        let size = (x.num_vertices() as f64) * (p as f64).powi((d * nmax as usize) as i32);
        if size > limit as f64 {
            return Err(Error::TooLarge {
                vertices: size.min(usize::MAX as f64) as usize,
                limit,
            });
        }
    }
    let q = char_element_direct(x, alpha, p)?;
    let kappa0 = kappa_matrix_tree(x);
    let mut table = explicit_rows(x, alpha, &q, &kappa0, nmax)?;
    let end = series_end(p, d, nmax, opts.max_characters);

    let zero_at = if kappa0.is_zero() {
        Some((0, Vec::new()))
    } else {
        (1..=end).find_map(|n| {
            let v = vanishing_exponents(&q, n);
            (!v.is_empty()).then_some((n, v))
        })
    };
    if let Some((first_zero_layer, vanishing)) = zero_at {
        return Ok(TowerOutcome::ZeroCase(ZeroCaseReport {
            p,
            d,
            char_element: q.poly.to_string(),
            char_element_is_zero: q.is_zero(),
            first_zero_layer,
            vanishing,
            table,
        }));
    }

    let v0 = val_p_rational(&kappa0, p)?.finite().cloned().expect("nonzero kappa");
    let mut points = Vec::new();
    for n in 0..=end {
        let chain = &v0 - rat(d as i64 * n as i64) + valuation_sum(&q, n)?;
        if let Some(row) = table.iter().find(|r| r.n == n) {
            if row.valuation != Valuation::Finite(chain.clone()) {
                return Err(Error::mismatch(
                    format!("v_p(kappa_{n}) = -dn + v_p(kappa_0) + sum of v_p(Q(zeta - 1))"),
                    &row.valuation,
                    format_rational(&chain),
                ));
            }
        } else {
            table.push(LayerRow {
                n,
                vertices: x.num_vertices() * (p as usize).pow(d as u32 * n),
                kappa_direct: None,
                kappa_product: None,
                valuation: Valuation::Finite(chain.clone()),
                predicted: None,
            });
        }
        points.push((n, chain));
    }

    let mu = mu_invariant(&q)?;
    let mut lam = lambda_invariant(&q, opts.box_bound)?;
    let mut warnings = Vec::new();
    let mut stable = stable_fit(&points, p, d, &mu, &rat(lam.tower_lambda as i64));
    if stable.is_none() && d >= 2 {
        let wider = lambda_invariant(&q, opts.box_bound * 2)?;
        if wider.lambda_q != lam.lambda_q {
            warnings.push(format!(
                "lambda changed from {} to {} when the direction box grew from {} to {}",
                lam.lambda_q,
                wider.lambda_q,
                opts.box_bound,
                opts.box_bound * 2
            ));
            lam = wider;
            stable = stable_fit(&points, p, d, &mu, &rat(lam.tower_lambda as i64));
        }
    }
    if stable.is_none() {
        warnings.push(format!(
            "no stable range on layers 0..={end} matches the closed form with mu = {}, lambda = {}",
            format_rational(&mu),
            lam.tower_lambda
        ));
    }

    let mut full_fit = None;
    let mut stable_from = None;
    let mut secondary = None;
    if let Some((s, fit)) = stable {
        for row in table.iter_mut().filter(|r| r.n >= s as u32) {
            row.predicted = Some(predict(&fit, row.n, p));
        }
        stable_from = Some(points[s].0);
        if let Ok(f) = fit_growth(&points[s..], p, d) {
            if f.mu != mu || f.lambda != rat(lam.tower_lambda as i64) {
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

    let provable_stable_from = (d == 1).then(|| {
        (0..)
            .find(|&n| super::phi(p, n) >= lam.lambda_q)
            .expect("phi is unbounded")
    });
    Ok(TowerOutcome::Iwasawa(IwasawaReport {
        p,
        d,
        char_element: q.poly.to_string(),
        mu,
        lambda_q: lam.lambda_q,
        lambda: lam.tower_lambda,
        certificate: lam.certificate,
        closed_form_holds: secondary.is_some(),
        secondary,
        full_fit,
        stable_from,
        provable_stable_from,
        table,
        warnings,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn iwasawa(o: TowerOutcome) -> IwasawaReport {
        match o {
            TowerOutcome::Iwasawa(r) => r,
            TowerOutcome::ZeroCase(z) => panic!("unexpected zero case {z:?}"),
        }
    }

    fn vals(r: &IwasawaReport) -> Vec<Valuation> {
        r.table.iter().map(|row| row.valuation.clone()).collect()
    }

    #[test]
    fn bouquet_d1() {
        let (x, a) = fixtures::bouquet_tower_d1(rat(1), rat(1));
        let r = iwasawa(tower_report(&x, &a, 2, 3, &TowerOptions::default()).unwrap());
        assert_eq!((r.mu.clone(), r.lambda, r.lambda_q), (rat(1), 1, 2));
        let v: Vec<_> = [0, 2, 5, 10, 19].iter().map(|&k| Valuation::from_i64(k)).collect();
        assert_eq!(vals(&r), v);
        assert_eq!(r.stable_from, Some(0));
        assert_eq!(r.secondary.as_ref().unwrap().nu, rat(-1));
        assert!(r.closed_form_holds && r.warnings.is_empty());
        assert_eq!(r.provable_stable_from, Some(2));
        assert!(r.table[4].kappa_direct.is_none());
        assert_eq!(r.table[3].kappa_direct, Some(rat(1024)));
    }

    #[test]
    fn zero_case() {
        let (x, a) = fixtures::bouquet_tower_d1(rat(1), rat(-1));
        match tower_report(&x, &a, 2, 2, &TowerOptions::default()).unwrap() {
            TowerOutcome::ZeroCase(z) => {
                assert!(z.char_element_is_zero);
                assert_eq!(z.first_zero_layer, 1);
                assert_eq!(z.vanishing, vec![vec![1]]);
                assert_eq!(z.table[0].kappa_direct, Some(rat(1)));
                assert_eq!(z.table[1].kappa_direct, Some(rat(0)));
                assert_eq!(z.table[2].kappa_product, Some(rat(0)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triangle_cycle() {
        let (x, a) = fixtures::triangle_tower(rat(1), rat(1), rat(1));
        let r = iwasawa(tower_report(&x, &a, 2, 4, &TowerOptions::default()).unwrap());
        let v: Vec<_> = (0..=4).map(Valuation::from_i64).collect();
        assert_eq!(vals(&r), v);
        assert_eq!((r.mu.clone(), r.lambda), (rat(0), 1));
        assert_eq!(r.table[4].kappa_direct, Some(rat(48)));
    }

    #[test]
    fn torus() {
        let (x, a) = fixtures::bouquet_tower_d2(rat(1), rat(1));
        let r = iwasawa(tower_report(&x, &a, 2, 2, &TowerOptions::default()).unwrap());
        assert_eq!((r.mu.clone(), r.lambda), (rat(0), 2));
        let v: Vec<_> = vals(&r)[..5].to_vec();
        let want: Vec<_> = [0, 5, 19, 61, 167].iter().map(|&k| Valuation::from_i64(k)).collect();
        assert_eq!(v, want);
        assert_eq!(r.stable_from, Some(1));
        let s = r.secondary.as_ref().unwrap();
        assert_eq!((s.mu_i.clone(), s.lambda_i.clone(), s.nu.clone()), (vec![rat(4)], vec![rat(-6)], rat(-1)));
        let f = r.full_fit.as_ref().unwrap();
        assert!(f.consistent);
        assert_eq!((f.mu.clone(), f.lambda.clone()), (rat(0), rat(2)));
    }

    #[test]
    fn size_guard() {
        let (x, a) = fixtures::bouquet_tower_d2(rat(1), rat(1));
        let e = tower_report(&x, &a, 2, 6, &TowerOptions::default()).unwrap_err();
        assert!(matches!(e, Error::TooLarge { limit: 2500, .. }));
    }

    #[test]
    fn disconnected_tower() {
        let (x, _) = fixtures::bouquet_tower_d1(rat(1), rat(1));
        let a = fixtures::voltage(&x, &[&[2], &[4]]);
        assert!(matches!(
            tower_report(&x, &a, 2, 1, &TowerOptions::default()),
            Err(Error::Disconnected(_))
        ));
    }
}
