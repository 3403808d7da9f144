//! Comparison of Iwasawa invariants along a finite `p`-group cover.

use super::{lambda_invariant, mu_invariant, LambdaCertificate};
use crate::algebra::rational::Rational;
use crate::charelem::char_element_direct;
use crate::error::{Error, Result};
use crate::graph::{
    cover_is_connected, derived_cover, tower_connected, FiniteGroup, FiniteVoltage,
    WeightedGraph, ZVoltage,
};
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KidaHypotheses {
    pub group_is_p_group: bool,
    pub cover_connected: bool,
    pub tower_connected: bool,
    /// The first layer of the pulled-back tower has deck group
    /// `G x Gamma_1`, so no `X_n` sits inside `Y`.
    pub product_structure: bool,
}

impl KidaHypotheses {
    pub fn all(&self) -> bool {
        self.group_is_p_group && self.cover_connected && self.tower_connected && self.product_structure
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KidaReport {
    pub p: u64,
    pub d: usize,
    /// `[Y : X] = |G|`.
    pub degree: usize,
    pub hypotheses: KidaHypotheses,
    pub char_element_x: String,
    pub char_element_y: String,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub mu_x: Rational,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub mu_y: Rational,
    /// Tower `lambda` of `X`.
    pub lambda_x: u64,
    /// Tower `lambda` of `Y`.
    pub lambda_y: u64,
    pub certificate_x: LambdaCertificate,
    pub certificate_y: LambdaCertificate,
    /// `lambda(Y)` predicted from `lambda(X)` and the degree.
    pub lambda_y_predicted: u64,
    /// Both `mu` vanish, so the relation applies.
    pub applicable: bool,
    pub relation_holds: bool,
}

/// Builds `Y = X(G, beta)`, pulls `alpha` back to `Y`, and compares the
/// invariants of both towers: `lambda(Y) = [Y:X] lambda(X)` for `d >= 2` and
/// `lambda(Y) + 1 = [Y:X] (lambda(X) + 1)` for `d = 1`, when `mu = 0`.
///
/// Failed hypotheses are reported as [`Error::Hypothesis`].
pub fn kida_verify(
    x: &WeightedGraph,
    alpha: &ZVoltage,
    group: &FiniteGroup,
    beta: &FiniteVoltage,
    p: u64,
    box_bound: u32,
) -> Result<KidaReport> {
    x.require_valid()?;
    let d = alpha.dims();
    let (gamma1, alpha1) = alpha.reduce(p, 1);
    let product = group.direct_product(&gamma1);
    let joint = FiniteVoltage::from_darts(
        x,
        &product,
        (0..x.num_darts())
            .map(|e| beta.value(e) * gamma1.order() + alpha1.value(e))
            .collect(),
    )?;
    let hypotheses = KidaHypotheses {
        group_is_p_group: group.is_p_group(p),
        cover_connected: cover_is_connected(x, group, beta)?,
        tower_connected: tower_connected(x, alpha, p)?,
        product_structure: cover_is_connected(x, &product, &joint)?,
    };
    if !hypotheses.all() {
        return Err(Error::Hypothesis(format!("{hypotheses:?}")));
    }
    let cover = derived_cover(x, group, beta);
    let y = cover.graph();
    let alpha_y = alpha.pull_back(|e| cover.dart_projection(e), y.num_darts());

    let qx = char_element_direct(x, alpha, p)?;
    let qy = char_element_direct(y, &alpha_y, p)?;
    let mu_x = mu_invariant(&qx)?;
    let mu_y = mu_invariant(&qy)?;
    let lx = lambda_invariant(&qx, box_bound)?;
    let ly = lambda_invariant(&qy, box_bound)?;
    let degree = group.order();
    let lambda_y_predicted = if d == 1 {
        degree as u64 * (lx.tower_lambda + 1) - 1
    } else {
        degree as u64 * lx.tower_lambda
    };
    let applicable = mu_x.is_zero() && mu_y.is_zero();
    Ok(KidaReport {
        p,
        d,
        degree,
        hypotheses,
        char_element_x: qx.poly.to_string(),
        char_element_y: qy.poly.to_string(),
        mu_x,
        mu_y,
        lambda_x: lx.tower_lambda,
        lambda_y: ly.tower_lambda,
        certificate_x: lx.certificate,
        certificate_y: ly.certificate,
        lambda_y_predicted,
        applicable,
        relation_holds: applicable && ly.tower_lambda == lambda_y_predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::fixtures;

    #[test]
    fn quaternion_cover_of_b4() {
        let (x, a) = fixtures::bouquet_b4_tower([rat(1), rat(1), rat(1), rat(2)]);
        let q8 = FiniteGroup::quaternion();
        let (i, j) = (q8.element("i").unwrap(), q8.element("j").unwrap());
        let beta = FiniteVoltage::from_orientation(&x, &x.default_orientation(), &q8, &[0, 0, i, j]).unwrap();
        let r = kida_verify(&x, &a, &q8, &beta, 2, 1).unwrap();
        assert_eq!((r.mu_x.clone(), r.lambda_x, r.mu_y.clone(), r.lambda_y), (rat(0), 2, rat(0), 16));
        assert_eq!(r.degree, 8);
        assert!(r.applicable && r.relation_holds);
        assert!(r.certificate_y.divisors.iter().all(|d| d.multiplicity == 8));
    }

    #[test]
    fn one_variable() {
        let (x, a) = fixtures::bouquet_tower_d1(rat(1), rat(2));
        let g = FiniteGroup::abelian(&[2]).unwrap();
        let beta = FiniteVoltage::from_orientation(&x, &x.default_orientation(), &g, &[0, 1]).unwrap();
        let r = kida_verify(&x, &a, &g, &beta, 2, 1).unwrap();
        assert_eq!((r.lambda_x, r.lambda_y, r.lambda_y_predicted), (1, 3, 3));
        assert!(r.relation_holds);
    }

    #[test]
    fn trivial_group() {
        let (x, a) = fixtures::bouquet_tower_d2(rat(1), rat(3));
        let g = FiniteGroup::trivial();
        let beta = FiniteVoltage::trivial(&x, &g);
        let r = kida_verify(&x, &a, &g, &beta, 2, 2).unwrap();
        assert_eq!((r.mu_x.clone(), r.lambda_x), (r.mu_y.clone(), r.lambda_y));
        assert_eq!(r.char_element_x, r.char_element_y);
    }

    #[test]
    fn hypothesis_failures() {
        let (x, a) = fixtures::bouquet_tower_d1(rat(1), rat(2));
        // beta equal to alpha mod 2: Y is the first layer itself
        let g = FiniteGroup::abelian(&[2]).unwrap();
        let beta = FiniteVoltage::from_orientation(&x, &x.default_orientation(), &g, &[1, 1]).unwrap();
        assert!(matches!(kida_verify(&x, &a, &g, &beta, 2, 1), Err(Error::Hypothesis(_))));
        let g3 = FiniteGroup::abelian(&[3]).unwrap();
        let beta = FiniteVoltage::from_orientation(&x, &x.default_orientation(), &g3, &[0, 1]).unwrap();
        assert!(matches!(kida_verify(&x, &a, &g3, &beta, 2, 1), Err(Error::Hypothesis(_))));
    }
}
