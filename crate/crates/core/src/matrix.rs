//! Dense matrices over an exact commutative ring.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::ring::{denominator_lcm, PolyRing, Rational, Ring};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("rows of unequal length".into()));
        }
        Ok(Matrix { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
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

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, R::one())
    }

    pub fn scalar(n: usize, c: R) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c.clone() } else { R::zero() })
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

    pub fn set(&mut self, i: usize, j: usize, value: R) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{op} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sum")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.plus(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "difference")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.minus(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].plus(&a.times(b));
                }
            }
        }
        Ok(out)
    }

    pub fn negated(&self) -> Self {
        self.map(R::negated)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.map(|x| x.scale(q))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "{what} of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> Result<R> {
        self.require_square("trace")?;
        Ok((0..self.rows).fold(R::zero(), |acc, i| acc.plus(self.get(i, i))))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        self.require_square("power")?;
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Exact determinant; the algorithm is chosen by the entry ring.
    pub fn det(&self) -> Result<R> {
        self.require_square("determinant")?;
        Ok(R::determinant(self))
    }

    /// Division-free Laplace expansion, memoized over the set of used columns.
    pub fn det_laplace(&self) -> R {
        let n = self.rows;
        assert!(n <= 24, "Laplace expansion limited to 24x24");
        let full = (1usize << n) - 1;
        let mut dp: Vec<Option<R>> = vec![None; 1 << n];
        dp[0] = Some(R::one());
        for mask in 0..full {
            let Some(v) = dp[mask].take() else { continue };
            if v.is_zero() {
                continue;
            }
            let row = mask.count_ones() as usize;
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let a = self.get(row, j);
                if a.is_zero() {
                    continue;
                }
                let term = a.times(&v);
                let term = if (mask >> (j + 1)).count_ones() % 2 == 1 { term.negated() } else { term };
                let slot = &mut dp[mask | (1 << j)];
                *slot = Some(match slot.take() {
                    Some(acc) => acc.plus(&term),
                    None => term,
                });
            }
        }
        if n == 0 {
            return R::one();
        }
        dp[full].take().unwrap_or_else(R::zero)
    }

    /// Coefficients `[c_0, ..., c_n]` of `det(t·Id − M) = Σ c_k t^{n−k}`,
    /// computed with Berkowitz's division-free algorithm.
    pub fn char_poly_coeffs(&self) -> Result<Vec<R>> {
        self.require_square("characteristic polynomial")?;
        let n = self.rows;
        let mut c = vec![R::one()];
        for r in 0..n {
            let mut q = Vec::with_capacity(r + 2);
            q.push(R::one());
            q.push(self.get(r, r).negated());
            let mut v: Vec<R> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let dot = (0..r).fold(R::zero(), |acc, j| acc.plus(&self.get(r, j).times(&v[j])));
                q.push(dot.negated());
                v = (0..r)
                    .map(|i| (0..r).fold(R::zero(), |acc, j| acc.plus(&self.get(i, j).times(&v[j]))))
                    .collect();
            }
            c = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r)).fold(R::zero(), |acc, j| acc.plus(&q[i - j].times(&c[j])))
                })
                .collect();
        }
        Ok(c)
    }

    /// `[Λ_0, ..., Λ_n]` with `det(t·Id − M) = Σ (−1)^i Λ_i t^{n−i}`.
    pub fn lambdas(&self) -> Result<Vec<R>> {
        Ok(self
            .char_poly_coeffs()?
            .into_iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { c.negated() } else { c })
            .collect())
    }

    /// Sub-block with the given row and column ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows.start + i, cols.start + j).clone())
    }
}

impl<R: PolyRing> Matrix<R> {
    /// `det(t·Id − M)` as an element of the ring with `t` adjoined.
    pub fn char_poly_in(&self, var: &str) -> Result<R> {
        self.require_square("characteristic polynomial")?;
        if self.data.iter().any(|x| x.mentions(var)) {
            return Err(Error::Variable(format!("{var} already occurs in the matrix entries")));
        }
        let t = R::variable(var);
        let shifted = Matrix::scalar(self.rows, t).sub(self)?;
        shifted.det()
    }
}

impl Matrix<Rational> {
    pub fn lift<S: Ring>(&self) -> Matrix<S> {
        self.map(S::from_rational)
    }

    /// Integer Bareiss elimination after clearing the denominators of each row.
    pub fn det_bareiss(&self) -> Rational {
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let l = denominator_lcm(self.row(i));
                scale *= &l;
                self.row(i).iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Rational::zero();
                };
                a.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let det = if n == 0 { BigInt::one() } else { a[n - 1][n - 1].clone() };
        let det = Rational::new(det, scale);
        if negate {
            -det
        } else {
            det
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn row_reduce(&self) -> (Matrix<Rational>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().1.len()
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square("inverse")?;
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (red, pivots) = aug.row_reduce();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular("matrix is not invertible".into()));
        }
        Ok(red.block(0..n, n..2 * n))
    }

    /// `det(t·Id − M)` as a polynomial in `t`, via division-free expansion.
    pub fn char_poly(&self) -> Result<MultiPoly> {
        self.lift::<MultiPoly>().char_poly_in("t")
    }
}

impl<R: fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Rational matrix from integer rows; panics on ragged input.
pub fn int_matrix(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| crate::ring::rat(x)).collect()).collect())
        .expect("rectangular rows")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, ratio};

    #[test]
    fn determinant_examples() {
        let m = int_matrix(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.det().unwrap(), rat(-2));
        assert_eq!(m.det_laplace(), rat(-2));
        assert_eq!(Matrix::<Rational>::identity(5).det().unwrap(), rat(1));
        let j = int_matrix(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]]);
        assert_eq!(j.det().unwrap(), rat(1));
        assert!(int_matrix(&[&[1, 2, 3], &[4, 5, 6]]).det().is_err());
    }

    #[test]
    fn bareiss_handles_pivoting_and_fractions() {
        let m = Matrix::from_rows(vec![
            vec![rat(0), ratio(1, 2), rat(1)],
            vec![ratio(2, 3), rat(0), rat(3)],
            vec![rat(1), rat(1), ratio(-1, 5)],
        ])
        .unwrap();
        assert_eq!(m.det_bareiss(), m.det_laplace());
        let singular = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(singular.det().unwrap(), rat(0));
    }

    #[test]
    fn char_poly_examples() {
        let m = int_matrix(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.char_poly().unwrap(), "t^2 - 5*t - 2".parse().unwrap());
        assert_eq!(m.char_poly_coeffs().unwrap(), vec![rat(1), rat(-5), rat(-2)]);
        assert_eq!(m.lambdas().unwrap(), vec![rat(1), rat(5), rat(-2)]);
        let id = Matrix::<Rational>::identity(2);
        assert_eq!(id.char_poly().unwrap(), "(t-1)^2".parse().unwrap());
        let z = Matrix::<Rational>::zeros(2, 2);
        assert_eq!(z.char_poly().unwrap(), "t^2".parse().unwrap());
    }

    #[test]
    fn inverse_and_rank() {
        let m = int_matrix(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        let s = int_matrix(&[&[1, 2], &[2, 4]]);
        assert!(matches!(s.inverse(), Err(Error::Singular(_))));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn shape_errors() {
        let a = int_matrix(&[&[1, 2]]);
        assert!(a.mul(&a).is_err());
        assert!(a.add(&int_matrix(&[&[1], &[2]])).is_err());
        assert!(Matrix::<Rational>::new(2, 2, vec![rat(1)]).is_err());
    }
}
