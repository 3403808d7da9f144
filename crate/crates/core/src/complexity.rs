//! Weighted complexities, characters, `h`-values and the determinant
//! identities that relate a graph to its abelian covers.

use crate::algebra::cyclotomic::CyclotomicNumber;
use crate::algebra::linalg::{berkowitz_charpoly, det, det_rational, Matrix};
use crate::algebra::poly::UniPoly;
use crate::algebra::rational::{format_rational, Rational};
use crate::algebra::ring::Ring;
use crate::algebra::valuation::Valuation;
use crate::error::{Error, Result};
use crate::graph::{derived_cover, FiniteGroup, FiniteVoltage, WeightedGraph};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// `det((D - W)(k))` with row and column `k` removed.
pub fn kappa_cofactor(x: &WeightedGraph, k: usize) -> Rational {
    let (w, d) = x.weighted_matrices();
    det_rational(&d.sub(&w).minor(k, k))
}

/// Weighted complexity by the matrix-tree theorem (first cofactor).
pub fn kappa_matrix_tree(x: &WeightedGraph) -> Rational {
    if x.num_vertices() == 0 {
        return Rational::zero();
    }
    kappa_cofactor(x, 0)
}

/// A character of a finite abelian `p`-group `Z/n_1 x ... x Z/n_r`,
/// sending generator `j` to `zeta_{n_j}^{k_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    #[serde(skip)]
    shape: Vec<u64>,
    images: Vec<u64>,
    #[serde(skip)]
    prime: u64,
    #[serde(skip)]
    level: u32,
}

/// The single prime `p` with every `n_j` a power of `p`, and the exponent
/// `L` with `p^L = max n_j`.
fn p_group_shape(shape: &[u64]) -> Result<(u64, u32)> {
    let mut prime = None;
    let mut level = 0u32;
    for &n in shape {
        if n == 1 {
            continue;
        }
        let p = (2..=n).find(|d| n % d == 0).expect("n > 1");
        let mut m = n;
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if m != 1 {
            return Err(Error::UnsupportedGroup(format!(
                "cyclic factor of order {n} is not a prime power"
            )));
        }
        match prime {
            Some(q) if q != p => {
                return Err(Error::UnsupportedGroup(format!(
                    "factors of orders divisible by {q} and {p}; characters need a single prime"
                )))
            }
            _ => prime = Some(p),
        }
        level = level.max(e);
    }
    Ok((prime.unwrap_or(2), level))
}

fn group_shape(group: &FiniteGroup) -> Result<Vec<u64>> {
    group
        .shape()
        .map(<[u64]>::to_vec)
        .ok_or_else(|| Error::UnsupportedGroup("characters need an abelian group given by cyclic factors".into()))
}

impl Character {
    pub fn new(group: &FiniteGroup, images: Vec<u64>) -> Result<Self> {
        let shape = group_shape(group)?;
        if images.len() != shape.len() {
            return Err(Error::DimensionMismatch {
                expected: shape.len(),
                got: images.len(),
            });
        }
        let (prime, level) = p_group_shape(&shape)?;
        let images = images.iter().zip(&shape).map(|(k, n)| k % n).collect();
        Ok(Character {
            shape,
            images,
            prime,
            level,
        })
    }

    pub fn trivial(group: &FiniteGroup) -> Result<Self> {
        let r = group_shape(group)?.len();
        Self::new(group, vec![0; r])
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Level `L` of the field `Q(zeta_{p^L})` containing all values.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&k| k == 0)
    }

    /// `e` with `psi(sigma) = zeta_{p^L}^e` for `sigma` with coordinates `c`.
    pub fn exponent(&self, coords: &[u64]) -> u64 {
        let order = self.prime.pow(self.level);
        coords
            .iter()
            .zip(&self.images)
            .zip(&self.shape)
            .fold(0u64, |acc, ((c, k), n)| {
                (acc + (c * k % n) * (order / n)) % order
            })
    }

    pub fn value(&self, group: &FiniteGroup, sigma: usize) -> CyclotomicNumber {
        let c = group.coords(sigma).expect("abelian group");
        CyclotomicNumber::zeta_power(self.prime, self.level, self.exponent(&c) as i64)
    }

    /// The complex-conjugate character.
    pub fn conjugate(&self) -> Self {
        Character {
            images: self
                .images
                .iter()
                .zip(&self.shape)
                .map(|(k, n)| (n - k) % n)
                .collect(),
            ..self.clone()
        }
    }
}

/// All characters of a finite abelian `p`-group, trivial one first.
pub fn characters(group: &FiniteGroup) -> Result<Vec<Character>> {
    let shape = group_shape(group)?;
    p_group_shape(&shape)?;
    (0..group.order())
        .map(|i| Character::new(group, group.coords(i).expect("abelian")))
        .collect()
}

/// `W_psi[i][j] = sum over darts i -> j of psi(beta(e)) w(e)`.
pub fn character_matrix(
    x: &WeightedGraph,
    group: &FiniteGroup,
    beta: &FiniteVoltage,
    psi: &Character,
) -> Matrix<CyclotomicNumber> {
    let m = x.num_vertices();
    let order = psi.prime.pow(psi.level) as usize;
    let mut acc = vec![vec![Rational::zero(); order]; m * m];
    for (e, d) in x.darts().iter().enumerate() {
        let c = group.coords(beta.value(e)).expect("abelian");
        acc[d.origin * m + d.terminus][psi.exponent(&c) as usize] += &d.weight;
    }
    let entries: Vec<CyclotomicNumber> = acc
        .into_iter()
        .map(|v| CyclotomicNumber::from_cyclic(psi.prime, psi.level, v))
        .collect();
    Matrix::from_fn(m, m, |i, j| entries[i * m + j].clone())
}

fn rational_matrix_to_cyclo(m: &Matrix<Rational>, p: u64) -> Matrix<CyclotomicNumber> {
    m.map(|q| CyclotomicNumber::from_rational(p, q.clone()))
}

/// `h(psi) = det(D - W_psi)`.
pub fn h_value(
    x: &WeightedGraph,
    group: &FiniteGroup,
    beta: &FiniteVoltage,
    psi: &Character,
) -> CyclotomicNumber {
    let wpsi = character_matrix(x, group, beta, psi);
    let d = rational_matrix_to_cyclo(&x.degree_matrix(), psi.prime);
    det(&d.sub(&wpsi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HValue {
    pub character: Character,
    pub value: CyclotomicNumber,
    pub valuation: Valuation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductFormulaReport {
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub kappa_base: Rational,
    pub group_order: usize,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub kappa_direct: Rational,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub kappa_product: Rational,
    pub h_values: Vec<HValue>,
    /// Images of the nontrivial characters whose `h`-value is zero.
    pub vanishing: Vec<Vec<u64>>,
}

/// `kappa(X(G, beta)) = kappa(X) / |G| * prod_{psi != 1} h(psi)`, checked
/// against the matrix-tree theorem on the explicit cover.
pub fn product_formula_kappa(
    x: &WeightedGraph,
    group: &FiniteGroup,
    beta: &FiniteVoltage,
) -> Result<ProductFormulaReport> {
    let chars = characters(group)?;
    let h: Vec<HValue> = chars
        .par_iter()
        .map(|psi| {
            let value = h_value(x, group, beta, psi).simplify();
            let valuation = value.valuation_fast();
            HValue {
                character: psi.clone(),
                value,
                valuation,
            }
        })
        .collect();
    if let Some(t) = h.iter().find(|hv| hv.character.is_trivial()) {
        if !t.value.is_zero() {
            return Err(Error::mismatch("h(trivial character) = 0", &t.value, 0));
        }
    }
    let product = h
        .iter()
        .filter(|hv| !hv.character.is_trivial())
        .fold(CyclotomicNumber::one_elem(), |acc, hv| acc.mul(&hv.value));
    let product = product
        .to_rational()
        .ok_or_else(|| Error::mismatch("product of h-values is rational", &product, "a rational"))?;
    let kappa_base = kappa_matrix_tree(x);
    let kappa_product = &kappa_base * product / Rational::from_integer(group.order().into());
    let kappa_direct = kappa_matrix_tree(derived_cover(x, group, beta).graph());
    if kappa_direct != kappa_product {
        return Err(Error::mismatch(
            "kappa(cover) = kappa(X)/|G| * prod h(psi)",
            format_rational(&kappa_direct),
            format_rational(&kappa_product),
        ));
    }
    let vanishing = h
        .iter()
        .filter(|hv| !hv.character.is_trivial() && hv.value.is_zero())
        .map(|hv| hv.character.images.clone())
        .collect();
    Ok(ProductFormulaReport {
        kappa_base,
        group_order: group.order(),
        kappa_direct,
        kappa_product,
        h_values: h,
        vanishing,
    })
}

/// Both sides of the three-term identity as polynomials in `t`, after
/// clearing powers of `1 - t^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeTermSides {
    /// `det(I - t sum_sigma (B_sigma - C_sigma) psi(sigma))`, times
    /// `(1 - t^2)^chi` when `chi > 0`.
    pub lhs: UniPoly<CyclotomicNumber>,
    /// `det(I - t W_psi + t^2 (D - I))`, times `(1 - t^2)^{-chi}` when
    /// `chi < 0`.
    pub rhs: UniPoly<CyclotomicNumber>,
}

/// The `2l x 2l` matrix `sum_sigma (B_sigma - C_sigma) psi(sigma)`.
pub fn edge_matrix(
    x: &WeightedGraph,
    group: &FiniteGroup,
    beta: &FiniteVoltage,
    psi: &Character,
) -> Matrix<CyclotomicNumber> {
    let n = x.num_darts();
    Matrix::from_fn(n, n, |i, j| {
        let di = x.dart(i);
        let dj = x.dart(j);
        let mut entry = Rational::zero();
        if di.terminus == dj.origin {
            entry += &dj.weight;
        }
        if x.inverse(i) == j {
            entry -= Rational::one();
        }
        if entry.is_zero() {
            return CyclotomicNumber::from_rational(psi.prime, entry);
        }
        psi.value(group, beta.value(i)).scale(&entry)
    })
}

pub fn three_term_sides(
    x: &WeightedGraph,
    group: &FiniteGroup,
    beta: &FiniteVoltage,
    psi: &Character,
) -> ThreeTermSides {
    let p = psi.prime;
    let e = edge_matrix(x, group, beta, psi);
    let n = e.rows();
    // det(I - tE) = t^n charpoly(1/t): reversed characteristic polynomial.
    let mut cp = berkowitz_charpoly(&e);
    cp.reverse();
    let mut lhs = UniPoly::new(cp);
    let m = x.num_vertices();
    let wpsi = character_matrix(x, group, beta, psi);
    let dm = x.degree_matrix();
    let poly_matrix: Matrix<UniPoly<CyclotomicNumber>> = Matrix::from_fn(m, m, |i, j| {
        let c0 = if i == j { Rational::one() } else { Rational::zero() };
        let c2 = if i == j { dm.get(i, i) - Rational::one() } else { Rational::zero() };
        UniPoly::new(vec![
            CyclotomicNumber::from_rational(p, c0),
            wpsi.get(i, j).neg(),
            CyclotomicNumber::from_rational(p, c2),
        ])
    });
    let mut rhs = det(&poly_matrix);
    let one_minus_t2 = UniPoly::new(vec![
        CyclotomicNumber::from_int(p, 1),
        CyclotomicNumber::from_int(p, 0),
        CyclotomicNumber::from_int(p, -1),
    ]);
    let chi = x.euler_characteristic();
    let f = one_minus_t2.pow(chi.unsigned_abs());
    if chi > 0 {
        lhs = lhs.mul(&f);
    } else {
        rhs = rhs.mul(&f);
    }
    debug_assert!(n == 0 || lhs.degree().is_some());
    ThreeTermSides { lhs, rhs }
}

/// `det(I - tE) = (1 - t^2)^{-chi} det(I - t W_psi + t^2 (D - I))`.
pub fn three_term_check(
    x: &WeightedGraph,
    group: &FiniteGroup,
    beta: &FiniteVoltage,
    psi: &Character,
) -> bool {
    let s = three_term_sides(x, group, beta, psi);
    s.lhs == s.rhs
}
