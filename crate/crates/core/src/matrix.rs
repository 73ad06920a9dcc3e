//! Dense matrices over an arbitrary field scalar.
//!
//! Vectors are `Vec<S>`; operators act on column vectors, subspace bases are
//! stored as rows. Reduced row echelon form with leftmost pivots is the
//! canonical representative used for all decidable-equality arguments.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{CoreError, Result};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<S: Scalar> {
    nrows: usize,
    ncols: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.nrows, self.ncols)?;
        for r in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols).map(|c| format!("{}", self[(r, c)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.ncols + c]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.ncols + c]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            data: vec![S::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in 0..nrows {
            for c in 0..ncols {
                data.push(f(r, c));
            }
        }
        Self { nrows, ncols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged rows");
        }
        Self {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer matrix literal, mostly for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_fn(rows.len(), rows.first().map_or(0, |r| r.len()), |r, c| {
            S::from_i64(rows[r][c])
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.ncols..(r + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks(self.ncols.max(1))
    }

    pub fn push_row(&mut self, row: Vec<S>) {
        assert_eq!(row.len(), self.ncols);
        self.data.extend(row);
        self.nrows += 1;
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix::from_fn(self.nrows, self.ncols, |r, c| f(&self[(r, c)]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conjugate())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |r, c| self[(c, r)].conjugate())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.ncols, "apply: dimension mismatch");
        (0..self.nrows)
            .map(|r| {
                let mut acc = S::zero();
                for c in 0..self.ncols {
                    acc = acc + self[(r, c)].clone() * v[c].clone();
                }
                acc
            })
            .collect()
    }

    pub fn max_mag_log2(&self) -> Option<f64> {
        self.data
            .iter()
            .filter_map(|x| x.mag_log2())
            .fold(None, |acc, m| Some(acc.map_or(m, |a: f64| a.max(m))))
    }

    /// Scale a row by an exact power of two so its largest magnitude is
    /// near 1. Exact in binary floating point, a no-op row operation for
    /// the row space.
    fn equilibrate_row(&mut self, r: usize) {
        if S::EXACT {
            return;
        }
        let max = (0..self.ncols)
            .filter_map(|c| self[(r, c)].mag_log2())
            .fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() || max.abs() < 16.0 {
            return;
        }
        let k = (-max).round().clamp(-20000.0, 20000.0) as i64;
        let factor = if k >= 0 {
            Rational::new(num_bigint::BigInt::from(1) << k as usize, 1.into())
        } else {
            Rational::new(1.into(), num_bigint::BigInt::from(1) << (-k) as usize)
        };
        let s = S::from_rational(&factor, 64);
        for c in 0..self.ncols {
            self[(r, c)] = self[(r, c)].clone() * s.clone();
        }
    }

    /// Reduced row echelon form together with pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        if !S::EXACT {
            for r in 0..m.nrows {
                m.equilibrate_row(r);
            }
        }
        let scale = m.max_mag_log2();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.ncols {
            if row >= m.nrows {
                break;
            }
            // Select the largest-magnitude usable pivot in this column.
            let mut best: Option<(usize, f64)> = None;
            for r in row..m.nrows {
                if !m[(r, col)].negligible(scale) {
                    let mag = m[(r, col)].mag_log2().unwrap_or(f64::NEG_INFINITY);
                    if best.map_or(true, |(_, bm)| mag > bm) {
                        best = Some((r, mag));
                    }
                }
            }
            let Some((prow, _)) = best else { continue };
            m.swap_rows(row, prow);
            let inv = m[(row, col)].clone().invert().expect("pivot invertible");
            for c in col..m.ncols {
                m[(row, c)] = m[(row, c)].clone() * inv.clone();
            }
            m[(row, col)] = S::one();
            for r in 0..m.nrows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.ncols {
                        let sub = factor.clone() * m[(row, c)].clone();
                        m[(r, c)] = m[(r, c)].clone() - sub;
                    }
                    m[(r, col)] = S::zero();
                    if r > row && !S::EXACT {
                        // Flush cancellation noise before rescaling, so a
                        // numerically dead row cannot be revived as a pivot.
                        for c in col..m.ncols {
                            if m[(r, c)].negligible(scale) {
                                m[(r, c)] = S::zero();
                            }
                        }
                        m.equilibrate_row(r);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        // Flush eliminated noise below the pivot rows.
        for r in pivots.len()..m.nrows {
            for c in 0..m.ncols {
                if m[(r, c)].negligible(scale) {
                    m[(r, c)] = S::zero();
                }
            }
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.ncols {
            self.data.swap(a * self.ncols + c, b * self.ncols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {v : Mv = 0}, one vector per row.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(0, self.ncols);
        for &f in &free {
            let mut v = vec![S::zero(); self.ncols];
            v[f] = S::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            out.push_row(v);
        }
        out
    }

    /// Solve M x = b for one solution.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        assert_eq!(b.len(), self.nrows, "solve: dimension mismatch");
        let mut aug = Self::from_fn(self.nrows, self.ncols + 1, |r, c| {
            if c < self.ncols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let scale = aug.max_mag_log2();
        let (r, pivots) = aug.rref();
        aug = r;
        if pivots.contains(&self.ncols) {
            return Err(CoreError::Singular);
        }
        let mut x = vec![S::zero(); self.ncols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug[(i, self.ncols)].clone();
        }
        let _ = scale;
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(CoreError::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.nrows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).cloned().collect::<Vec<_>>() != (0..n).collect::<Vec<_>>() {
            return Err(CoreError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    pub fn det(&self) -> Result<S> {
        if !self.is_square() {
            return Err(CoreError::DimensionMismatch("det of non-square".into()));
        }
        let mut m = self.clone();
        let scale = m.max_mag_log2();
        let n = m.nrows;
        let mut det = S::one();
        for col in 0..n {
            let mut best: Option<(usize, f64)> = None;
            for r in col..n {
                if !m[(r, col)].negligible(scale) {
                    let mag = m[(r, col)].mag_log2().unwrap_or(f64::NEG_INFINITY);
                    if best.map_or(true, |(_, bm)| mag > bm) {
                        best = Some((r, mag));
                    }
                }
            }
            let Some((prow, _)) = best else {
                return Ok(S::zero());
            };
            if prow != col {
                m.swap_rows(col, prow);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            let inv = pivot.invert()?;
            for r in col + 1..n {
                if !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone() * inv.clone();
                    for c in col..n {
                        let sub = factor.clone() * m[(col, c)].clone();
                        m[(r, c)] = m[(r, c)].clone() - sub;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.nrows);
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    /// Smallest d with M^d = 0, or None if not nilpotent within dim steps.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let n = self.nrows;
        let mut p = Self::identity(n);
        for d in 0..=n {
            if p.is_zero() {
                return Some(d);
            }
            p = p * self.clone();
        }
        if p.is_zero() {
            Some(n)
        } else {
            None
        }
    }

    /// exp(M) for nilpotent M (terminating series). `prec` feeds the 1/k!
    /// coefficients for float scalars.
    pub fn exp_nilpotent(&self, prec: u32) -> Result<Self> {
        let n = self.nrows;
        self.nilpotency_index().ok_or(CoreError::NotNilpotent)?;
        let mut acc = Self::identity(n);
        let mut term = Self::identity(n);
        let mut fact = Rational::from_integer(1.into());
        for k in 1..=n {
            term = term * self.clone();
            if term.is_zero() {
                break;
            }
            fact = fact * Rational::from_integer((k as i64).into());
            let coeff = S::from_rational(&(Rational::from_integer(1.into()) / fact.clone()), prec);
            acc = acc + term.scale(&coeff);
        }
        Ok(acc)
    }

    /// log(M) for unipotent M via the terminating series on N = M - I.
    pub fn log_unipotent(&self, prec: u32) -> Result<Self> {
        let n = self.nrows;
        let nil = self.clone() - Self::identity(n);
        nil.nilpotency_index().ok_or(CoreError::NotNilpotent)?;
        let mut acc = Self::zeros(n, n);
        let mut term = Self::identity(n);
        for k in 1..=n {
            term = term * nil.clone();
            if term.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let coeff = S::from_rational(&crate::scalar::rat(sign, k as i64), prec);
            acc = acc + term.scale(&coeff);
        }
        Ok(acc)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.clone() * other.clone() - other.clone() * self.clone()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.commutator(other).is_zero()
    }

    pub fn trace(&self) -> S {
        let mut acc = S::zero();
        for i in 0..self.nrows.min(self.ncols) {
            acc = acc + self[(i, i)].clone();
        }
        acc
    }

    /// Stack rows of two matrices with equal column counts.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.ncols);
        let mut m = self.clone();
        for r in other.rows() {
            m.push_row(r.to_vec());
        }
        m
    }
}

impl<S: Scalar> Add for Matrix<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self
                .data
                .into_iter()
                .zip(rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for Matrix<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self
                .data
                .into_iter()
                .zip(rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<S: Scalar> Mul for Matrix<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows, "matmul: dimension mismatch");
        let mut out: Matrix<S> = Matrix::zeros(self.nrows, rhs.ncols);
        for r in 0..self.nrows {
            for k in 0..self.ncols {
                if self[(r, k)].is_zero() {
                    continue;
                }
                let a = self[(r, k)].clone();
                for c in 0..rhs.ncols {
                    if !rhs[(k, c)].is_zero() {
                        out[(r, c)] = out[(r, c)].clone() + a.clone() * rhs[(k, c)].clone();
                    }
                }
            }
        }
        out
    }
}

/// Plain coordinate pairing sum_i x_i y_i (no conjugation).
pub fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    assert_eq!(x.len(), y.len());
    let mut acc = S::zero();
    for (a, b) in x.iter().zip(y) {
        acc = acc + a.clone() * b.clone();
    }
    acc
}

pub fn vec_add<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn vec_sub<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn vec_scale<S: Scalar>(x: &[S], s: &S) -> Vec<S> {
    x.iter().map(|a| a.clone() * s.clone()).collect()
}

pub fn vec_conj<S: Scalar>(x: &[S]) -> Vec<S> {
    x.iter().map(|a| a.conjugate()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type M = Matrix<Rational>;

    #[test]
    fn rref_is_idempotent() {
        let m = M::from_i64(&[&[2, 4, -2], &[1, 2, 3], &[3, 6, 1]]);
        let (r1, p1) = m.rref();
        let (r2, p2) = r1.rref();
        assert_eq!(r1, r2);
        assert_eq!(p1, p2);
    }

    #[test]
    fn kernel_of_jordan_block() {
        // N e2 = e1 as column action: N = [[0,1],[0,0]].
        let n = M::from_i64(&[&[0, 1], &[0, 0]]);
        let k = n.kernel();
        assert_eq!(k.nrows(), 1);
        assert_eq!(k.row(0), &[Rational::from_integer(1.into()), Rational::from_integer(0.into())][..]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = M::from_i64(&[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m * inv, M::identity(2));
    }

    #[test]
    fn exp_log_unipotent_roundtrip() {
        let n = M::from_i64(&[&[0, 2, 5], &[0, 0, -3], &[0, 0, 0]]);
        let t = n.exp_nilpotent(64).unwrap();
        let back = t.log_unipotent(64).unwrap();
        assert_eq!(back, n);
    }

    #[test]
    fn det_matches_structure() {
        let m = M::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det().unwrap(), Rational::from_integer(1.into()));
        let s = M::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(s.det().unwrap().is_zero());
    }
}
