//! The characteristic element `Q^W = det(D - W_tau)` of a `Z^d`-voltage
//! assignment, in the variables `u_i = 1 + T_i`.

use crate::algebra::cyclotomic::CyclotomicNumber;
use crate::algebra::laurent::LaurentPolynomial;
use crate::algebra::linalg::{berkowitz_det, laplace_det, Matrix};
use crate::algebra::multipoly::MultiPoly;
use crate::algebra::rational::{check_prime, Rational};
use crate::algebra::ring::Ring;
use crate::complexity::{h_value, Character};
use crate::error::{Error, Result};
use crate::graph::{Orientation, WeightedGraph, ZVoltage};
use num_traits::Zero;
use serde::Serialize;

/// Largest matrix handled by memoized cofactor expansion; Berkowitz above.
const LAPLACE_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Direct,
    Orientation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharElement {
    pub prime: u64,
    pub dims: usize,
    pub route: Route,
    pub poly: LaurentPolynomial,
}

impl CharElement {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

pub(crate) fn laurent_det(m: &Matrix<LaurentPolynomial>) -> LaurentPolynomial {
    if m.rows() <= LAPLACE_LIMIT {
        laplace_det(m)
    } else {
        berkowitz_det(m)
    }
}

/// `W_tau[i][j] = sum over darts i -> j of u^{alpha(e)} w(e)`.
pub fn laurent_weight_matrix(x: &WeightedGraph, alpha: &ZVoltage) -> Matrix<LaurentPolynomial> {
    let m = x.num_vertices();
    let d = alpha.dims();
    let mut w = Matrix::filled(m, m, LaurentPolynomial::zero_in(d));
    for (e, dart) in x.darts().iter().enumerate() {
        let term = LaurentPolynomial::monomial(alpha.value(e).to_vec(), dart.weight.clone());
        let cur = w.get(dart.origin, dart.terminus).add(&term);
        w.set(dart.origin, dart.terminus, cur);
    }
    w
}

fn constant_matrix(m: &Matrix<Rational>, dims: usize) -> Matrix<LaurentPolynomial> {
    m.map(|q| LaurentPolynomial::constant(dims, q.clone()))
}

/// `Q^W = det(D - W_tau)` as a Laurent determinant.
pub fn char_element_direct(x: &WeightedGraph, alpha: &ZVoltage, p: u64) -> Result<CharElement> {
    check_prime(p)?;
    let d = alpha.dims();
    let m = constant_matrix(&x.degree_matrix(), d).sub(&laurent_weight_matrix(x, alpha));
    Ok(CharElement {
        prime: p,
        dims: d,
        route: Route::Direct,
        poly: laurent_det(&m).with_dims(d),
    })
}

/// Intermediate data of the orientation route.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationRoute {
    /// Distinct voltage values `b_1 < ... < b_N` on the orientation.
    pub voltages: Vec<Vec<i64>>,
    /// `B[i][j] = sum of w(s)` over oriented `s: v_i -> v_j`.
    pub b_matrix: Matrix<Rational>,
    /// `det(D - B - B^T - P)` in `X_1..X_N, Y_1..Y_N`.
    pub polynomial: MultiPoly,
    pub variable_names: Vec<String>,
    pub char_element: CharElement,
}

/// Computes `Q^W` through the polynomial `det(D - B - B^T - P)` in `2N`
/// indeterminates, where `P[i][j] = sum_k gamma_ij^(k) X_k + gamma_ji^(k) Y_k`,
/// then substitutes `X_k = u^{b_k} - 1`, `Y_k = u^{-b_k} - 1`.
///
/// Requires strongly symmetric weights. The result is compared with
/// [`char_element_direct`]; disagreement is an error.
pub fn char_element_by_orientation(
    x: &WeightedGraph,
    s: &Orientation,
    alpha: &ZVoltage,
    p: u64,
) -> Result<OrientationRoute> {
    check_prime(p)?;
    if !x.is_strongly_symmetric() {
        return Err(Error::InvalidGraph(
            "the orientation route needs every dart to have the weight of its inverse".into(),
        ));
    }
    let m = x.num_vertices();
    let d = alpha.dims();
    let mut voltages: Vec<Vec<i64>> = s.darts().iter().map(|&e| alpha.value(e).to_vec()).collect();
    voltages.sort();
    voltages.dedup();
    let n = voltages.len();
    let var = |sv: &[i64]| voltages.binary_search(&sv.to_vec()).expect("listed voltage");

    let mut b = Matrix::filled(m, m, Rational::zero());
    // gamma[k][i][j]
    let mut gamma = vec![Matrix::filled(m, m, Rational::zero()); n];
    for &e in s.darts() {
        let dart = x.dart(e);
        let (i, j) = (dart.origin, dart.terminus);
        b.set(i, j, b.get(i, j) + &dart.weight);
        let k = var(alpha.value(e));
        let g = gamma[k].get(i, j) + &dart.weight;
        gamma[k].set(i, j, g);
    }
    let nv = 2 * n;
    let dm = x.degree_matrix();
    let mmat = Matrix::from_fn(m, m, |i, j| {
        let c = dm.get(i, j) - b.get(i, j) - b.get(j, i);
        let mut entry = MultiPoly::constant(nv, c);
        for (k, g) in gamma.iter().enumerate() {
            entry = entry
                .sub(&MultiPoly::linear(k, nv, g.get(i, j).clone()))
                .sub(&MultiPoly::linear(n + k, nv, g.get(j, i).clone()));
        }
        entry
    });
    let polynomial = if m <= LAPLACE_LIMIT {
        laplace_det(&mmat)
    } else {
        berkowitz_det(&mmat)
    };
    let one = LaurentPolynomial::constant(d, Rational::from_integer(1.into()));
    let mut values = Vec::with_capacity(nv);
    for bk in &voltages {
        values.push(LaurentPolynomial::monomial(bk.clone(), one.coefficient(&vec![0; d])).sub(&one));
    }
    for bk in &voltages {
        let neg: Vec<i64> = bk.iter().map(|a| -a).collect();
        values.push(LaurentPolynomial::monomial(neg, one.coefficient(&vec![0; d])).sub(&one));
    }
    let poly = if polynomial.nvars() == 0 {
        polynomial.substitute(&[]).with_dims(d)
    } else {
        polynomial.substitute(&values).with_dims(d)
    };
    let direct = char_element_direct(x, alpha, p)?;
    if direct.poly != poly {
        return Err(Error::mismatch(
            "orientation route = direct determinant",
            &poly,
            &direct.poly,
        ));
    }
    let variable_names = (1..=n)
        .map(|k| format!("X{k}"))
        .chain((1..=n).map(|k| format!("Y{k}")))
        .collect();
    Ok(OrientationRoute {
        voltages,
        b_matrix: b,
        polynomial,
        variable_names,
        char_element: CharElement {
            prime: p,
            dims: d,
            route: Route::Orientation,
            poly,
        },
    })
}

/// `Q(zeta_psi)`: each `u_i` replaced by the image of the `i`-th generator
/// of `Gamma_n = (Z/p^n)^d` under `psi`.
pub fn eval_char_element(q: &CharElement, psi: &Character) -> Result<CyclotomicNumber> {
    if psi.images().len() != q.dims {
        return Err(Error::DimensionMismatch {
            expected: q.dims,
            got: psi.images().len(),
        });
    }
    if psi.level() > 0 && psi.prime() != q.prime {
        return Err(Error::UnsupportedGroup(format!(
            "character of a {}-group evaluated on a {}-adic element",
            psi.prime(),
            q.prime
        )));
    }
    Ok(q.poly.eval_roots(q.prime, psi.level(), psi.images()))
}

/// [`eval_char_element`], checked against `h(psi)` on the layer
/// `X(Gamma_n, alpha_n)`.
pub fn eval_char_element_checked(
    q: &CharElement,
    x: &WeightedGraph,
    alpha: &ZVoltage,
    n: u32,
    psi: &Character,
) -> Result<CyclotomicNumber> {
    let value = eval_char_element(q, psi)?;
    let (group, beta) = alpha.reduce(q.prime, n);
    let h = h_value(x, &group, &beta, psi);
    if h != value {
        return Err(Error::mismatch("Q(zeta_psi) = h(psi)", &value, &h));
    }
    Ok(value)
}

/// Whether `Q(u^{-1}) = +-u^c Q(u)` for some monomial `u^c`.
pub fn is_inversion_symmetric(q: &LaurentPolynomial) -> bool {
    let canon = |f: &LaurentPolynomial| {
        let d = f.dims();
        let lo: Vec<i64> = (0..d)
            .map(|i| f.terms().keys().map(|e| e[i]).min().unwrap_or(0))
            .collect();
        f.shift(&lo.iter().map(|a| -a).collect::<Vec<_>>())
    };
    let a = canon(q);
    let b = canon(&q.substitute_inverse());
    a == b || a == b.neg()
}
