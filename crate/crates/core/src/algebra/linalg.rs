//! Dense matrices and exact determinants.

use crate::algebra::rational::Rational;
use crate::algebra::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for r in 0..self.rows {
            l.entry(&&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        l.finish()
    }
}

impl<R: Clone> Matrix<R> {
    pub fn filled(rows: usize, cols: usize, value: R) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// The submatrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        Matrix::from_fn(rows.len(), cols.len(), |a, b| self.get(rows[a], cols[b]).clone())
    }

    pub fn map<S>(&self, f: impl FnMut(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, R::zero_elem())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { R::one_elem() } else { R::zero_elem() })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| c.mul(x))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = R::zero_elem();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_elem() {
                    continue;
                }
                acc = acc.add(&a.mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero_elem();
                for (k, x) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, k).mul(x));
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Determinant by cofactor expansion, memoized over column subsets.
///
/// Uses no division, so it works over any commutative ring. Cost is
/// `O(2^n n)` ring operations; intended for `n <= 12`.
pub fn laplace_det<R: Ring>(m: &Matrix<R>) -> R {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return R::one_elem();
    }
    assert!(n <= 20, "cofactor expansion is limited to 20x20");
    let full = (1usize << n) - 1;
    let mut memo: Vec<Option<R>> = vec![None; full + 1];
    memo[0] = Some(R::one_elem());
    for mask in 1..=full {
        let k = mask.count_ones() as usize;
        let row = k - 1;
        let mut acc = R::zero_elem();
        let mut pos = 0usize;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let entry = m.get(row, j);
            if !entry.is_zero_elem() {
                let sub = memo[mask & !(1 << j)].as_ref().expect("smaller mask");
                if !sub.is_zero_elem() {
                    let term = entry.mul(sub);
                    acc = if (row + pos).is_multiple_of(2) {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
            }
            pos += 1;
        }
        memo[mask] = Some(acc);
    }
    memo[full].take().expect("full mask")
}

/// Characteristic polynomial `det(xI - A)` by Berkowitz's division-free
/// algorithm. Coefficients are returned lowest degree first.
pub fn berkowitz_charpoly<R: Ring>(a: &Matrix<R>) -> Vec<R> {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    // Highest degree first while building.
    let mut vect: Vec<R> = vec![R::one_elem()];
    for r in 0..n {
        let diag = a.get(r, r);
        let row: Vec<R> = (0..r).map(|j| a.get(r, j).clone()).collect();
        let mut col: Vec<R> = (0..r).map(|i| a.get(i, r).clone()).collect();
        let mut q = Vec::with_capacity(r + 2);
        q.push(R::one_elem());
        q.push(diag.neg());
        for _ in 0..r {
            let mut dot = R::zero_elem();
            for (x, y) in row.iter().zip(&col) {
                if !x.is_zero_elem() && !y.is_zero_elem() {
                    dot = dot.add(&x.mul(y));
                }
            }
            q.push(dot.neg());
            col = (0..r)
                .map(|i| {
                    let mut acc = R::zero_elem();
                    for (k, y) in col.iter().enumerate() {
                        let x = a.get(i, k);
                        if !x.is_zero_elem() && !y.is_zero_elem() {
                            acc = acc.add(&x.mul(y));
                        }
                    }
                    acc
                })
                .collect();
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = R::zero_elem();
            for j in 0..=i.min(r) {
                let t = &q[i - j];
                let v = &vect[j];
                if !t.is_zero_elem() && !v.is_zero_elem() {
                    acc = acc.add(&t.mul(v));
                }
            }
            next.push(acc);
        }
        vect = next;
    }
    vect.reverse();
    vect
}

/// Determinant via the constant term of the Berkowitz characteristic
/// polynomial.
pub fn berkowitz_det<R: Ring>(m: &Matrix<R>) -> R {
    let n = m.rows();
    let c = berkowitz_charpoly(m).swap_remove(0);
    if n.is_multiple_of(2) {
        c
    } else {
        c.neg()
    }
}

/// Cofactor expansion for small matrices, Berkowitz above 8x8.
pub fn det<R: Ring>(m: &Matrix<R>) -> R {
    if m.rows() <= 8 {
        laplace_det(m)
    } else {
        berkowitz_det(m)
    }
}

/// Integer determinant by Bareiss fraction-free elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rational determinant: clears each row's denominators, then Bareiss.
pub fn det_rational(m: &Matrix<Rational>) -> Rational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let l = m
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &l;
            m.row(i)
                .iter()
                .map(|q| q.numer() * (&l / q.denom()))
                .collect()
        })
        .collect();
    Rational::new(bareiss_det(rows), scale)
}

/// Solves `A x = b` over the rationals when `A` is square and invertible.
pub fn solve_rational(a: &Matrix<Rational>, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.rows();
    assert!(a.is_square() && b.len() == n);
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, piv);
        let p = m[k][k].clone();
        for x in m[k].iter_mut() {
            *x /= &p;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in k..=n {
                    let t = &f * &m[k][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Rank of an integer matrix modulo a prime.
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    let p = p as i64;
    let mut m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(p)).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = crate::algebra::rational::inv_mod(m[rank][c] as u64, p as u64) as i64;
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}
