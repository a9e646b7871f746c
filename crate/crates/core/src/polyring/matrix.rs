//! Dense exact matrices and fraction-free (Bareiss) elimination.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::fmt_rational_short;

/// Integral-domain operations needed by Bareiss elimination; `div_exact` is
/// only ever called when the quotient is known to be exact.
pub trait ExactRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn div_exact(&self, other: &Self) -> Result<Self>;
}

impl ExactRing for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        Ok(self - other)
    }
    fn div_exact(&self, other: &Self) -> Result<Self> {
        if Zero::is_zero(other) {
            return Err(Error::NotDivisible);
        }
        Ok(self / other)
    }
}

impl ExactRing for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        self.try_sub(other)
    }
    fn div_exact(&self, other: &Self) -> Result<Self> {
        Poly::div_exact(self, other)
    }
}

/// Determinant by Bareiss elimination with row pivoting.
pub fn bareiss_determinant<R: ExactRing>(mut m: Vec<Vec<R>>) -> Result<R> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NonSquare { rows: n, cols: bad.len() });
    }
    if n == 0 {
        return Ok(R::one());
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(R::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].mul(&m[k][k])?;
                let b = m[i][k].mul(&m[k][j])?;
                m[i][j] = a.sub(&b)?.div_exact(&prev)?;
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

/// Rank by fraction-free row echelon reduction.
pub fn bareiss_rank<R: ExactRing>(mut m: Vec<Vec<R>>) -> Result<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = R::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let a = m[i][j].mul(&m[rank][c])?;
                let b = m[i][c].mul(&m[rank][j])?;
                m[i][j] = a.sub(&b)?.div_exact(&prev)?;
            }
            m[i][c] = R::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    Ok(rank)
}

/// Rectangular matrix over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if r == 0 || c == 0 {
            return Err(Error::EmptyMatrix);
        }
        if let Some(bad) = rows.iter().find(|x| x.len() != c) {
            return Err(Error::RaggedMatrix { expected: c, got: bad.len() });
        }
        Ok(Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigRational) -> Result<Self> {
        Matrix::from_rows((0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect())
    }

    pub fn identity(n: usize) -> Result<Self> {
        Matrix::from_fn(n, n, |i, j| if i == j { One::one() } else { Zero::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::RaggedMatrix { expected: self.cols, got: other.rows });
        }
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(<BigRational as Zero>::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        })
    }

    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        bareiss_determinant(self.to_rows())
    }

    pub fn rank(&self) -> usize {
        bareiss_rank(self.to_rows()).expect("rational division cannot fail")
    }

    /// Entries rendered as `num` or `num/den`, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.to_rows().iter().map(|r| r.iter().map(fmt_rational_short).collect()).collect()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    /// Leibniz expansion, used as an independent oracle.
    fn leibniz(m: &Matrix) -> BigRational {
        fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
            if n == 0 {
                return vec![(vec![], false)];
            }
            let mut out = Vec::new();
            for (p, odd) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push((q, odd ^ ((n - 1 - pos) % 2 == 1)));
                }
            }
            out
        }
        perms(m.rows())
            .into_iter()
            .map(|(p, odd)| {
                let prod = p.iter().enumerate().fold(q(1), |acc, (i, &j)| acc * m.get(i, j));
                if odd {
                    -prod
                } else {
                    prod
                }
            })
            .fold(q(0), |a, b| a + b)
    }

    #[test]
    fn identity_has_unit_determinant() {
        let i3 = Matrix::identity(3).unwrap();
        assert_eq!(i3.determinant().unwrap(), q(1));
        assert_eq!(i3.rank(), 3);
    }

    #[test]
    fn small_vandermonde_product() {
        // rows t_h + l for t = (0, 1), l = (0, 1)
        let m = mat(&[&[0, 1], &[1, 2]]);
        assert_eq!(m.determinant().unwrap(), q(-1));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn vandermonde_determinant() {
        let m = Matrix::from_fn(4, 4, |h, p| q(h as i64).pow(p as i32)).unwrap();
        // prod_{i<j} (t_j - t_i) over t = 0, 1, 2, 3
        assert_eq!(m.determinant().unwrap(), q(12));
        assert_eq!(m.determinant().unwrap(), leibniz(&m));
    }

    #[test]
    fn pivoting_and_rank_deficiency() {
        let m = mat(&[&[0, 0, 1], &[0, 2, 0], &[3, 0, 0]]);
        assert_eq!(m.determinant().unwrap(), leibniz(&m));
        let low = mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(low.rank(), 2);
        assert_eq!(low.determinant().unwrap(), q(0));
        let wide = mat(&[&[0, 1, 2, 3], &[0, 2, 4, 6]]);
        assert_eq!(wide.rank(), 1);
    }

    #[test]
    fn non_square_determinant_is_an_error() {
        let m = mat(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(m.determinant(), Err(Error::NonSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn polynomial_determinant() {
        let p = |s: &str| s.parse::<Poly>().unwrap();
        let m = vec![vec![p("a"), p("b")], vec![p("c"), p("d")]];
        assert_eq!(bareiss_determinant(m).unwrap(), p("a*d - b*c"));
    }

    proptest::proptest! {
        #[test]
        fn determinant_matches_leibniz_and_is_multiplicative(
            a in proptest::collection::vec(-5i64..=5, 16),
            b in proptest::collection::vec(-5i64..=5, 16),
        ) {
            let ma = Matrix::from_fn(4, 4, |i, j| q(a[4 * i + j])).unwrap();
            let mb = Matrix::from_fn(4, 4, |i, j| q(b[4 * i + j])).unwrap();
            let da = ma.determinant().unwrap();
            proptest::prop_assert_eq!(&da, &leibniz(&ma));
            let prod = ma.mul(&mb).unwrap().determinant().unwrap();
            proptest::prop_assert_eq!(prod, da.clone() * mb.determinant().unwrap());
            proptest::prop_assert_eq!(ma.rank() == 4, da != q(0));
        }
    }
}
