//! Subspaces in canonical reduced-echelon form.
//!
//! A subspace is stored as an RREF basis matrix (rows are basis vectors),
//! which makes equality decidable for exact scalars and deterministic for
//! float scalars at a fixed precision.

use crate::error::{CoreError, Result};
use crate::matrix::{dot, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<S: Scalar> {
    ambient: usize,
    basis: Matrix<S>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Matrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Span of the given vectors, canonicalized.
    pub fn span(ambient: usize, vectors: Vec<Vec<S>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        for v in &vectors {
            assert_eq!(v.len(), ambient, "span: vector length mismatch");
        }
        let m = Matrix::from_rows(vectors);
        Self::from_rows_matrix(ambient, m)
    }

    pub fn from_rows_matrix(ambient: usize, m: Matrix<S>) -> Self {
        assert_eq!(m.ncols(), ambient);
        let (r, pivots) = m.rref();
        let basis = Matrix::from_fn(pivots.len(), ambient, |i, j| r[(i, j)].clone());
        Self { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<S>> {
        self.basis.rows().map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.rref().1
    }

    pub fn contains_vector(&self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let stacked = self.basis.vstack(&Matrix::from_rows(vec![v.to_vec()]));
        stacked.rank() == self.dim()
    }

    pub fn contains(&self, other: &Self) -> bool {
        assert_eq!(self.ambient, other.ambient);
        if other.dim() > self.dim() {
            return false;
        }
        let stacked = self.basis.vstack(&other.basis);
        stacked.rank() == self.dim()
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(CoreError::DimensionMismatch(format!(
                "sum: ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(Self::from_rows_matrix(
            self.ambient,
            self.basis.vstack(&other.basis),
        ))
    }

    /// Zassenhaus: one echelon pass yields both sum and intersection.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(CoreError::DimensionMismatch(format!(
                "intersection: ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        let n = self.ambient;
        let da = self.dim();
        let db = other.dim();
        // Block matrix [[A A],[B 0]].
        let mut block = Matrix::zeros(da + db, 2 * n);
        for r in 0..da {
            for c in 0..n {
                block[(r, c)] = self.basis[(r, c)].clone();
                block[(r, n + c)] = self.basis[(r, c)].clone();
            }
        }
        for r in 0..db {
            for c in 0..n {
                block[(da + r, c)] = other.basis[(r, c)].clone();
            }
        }
        let (e, _) = block.rref();
        let mut inter_rows = Vec::new();
        for r in 0..e.nrows() {
            let left_zero = (0..n).all(|c| e[(r, c)].is_zero());
            let right_nonzero = (n..2 * n).any(|c| !e[(r, c)].is_zero());
            if left_zero && right_nonzero {
                inter_rows.push((n..2 * n).map(|c| e[(r, c)].clone()).collect());
            }
        }
        Ok(Self::span(n, inter_rows))
    }

    /// Image of the subspace under an operator (acting on column vectors).
    pub fn image(&self, op: &Matrix<S>) -> Result<Self> {
        if op.ncols() != self.ambient {
            return Err(CoreError::DimensionMismatch(format!(
                "image: operator cols {} vs ambient {}",
                op.ncols(),
                self.ambient
            )));
        }
        let rows: Vec<Vec<S>> = self.basis.rows().map(|v| op.apply(v)).collect();
        Ok(Self::span(op.nrows(), rows))
    }

    /// Preimage {v : op v in self} of the subspace under an operator.
    pub fn preimage(&self, op: &Matrix<S>) -> Result<Self> {
        if op.nrows() != self.ambient {
            return Err(CoreError::DimensionMismatch(format!(
                "preimage: operator rows {} vs ambient {}",
                op.nrows(),
                self.ambient
            )));
        }
        // op v must be orthogonal to the annihilator of self: rows of K where
        // K = kernel-of-basis^T give functionals vanishing on self.
        let ann = self.annihilator();
        if ann.dim() == 0 {
            return Ok(Self::full(op.ncols()));
        }
        // Constraint matrix: (ann basis) * op, kernel is the preimage.
        let constraints = ann.basis.clone() * op.clone();
        let ker = constraints.kernel();
        Ok(Self::from_rows_matrix(op.ncols(), ker))
    }

    /// Functionals vanishing on the subspace, as row vectors under the plain
    /// coordinate pairing.
    pub fn annihilator(&self) -> Self {
        let ker = self.basis.kernel();
        Self::from_rows_matrix(self.ambient, ker)
    }

    /// Canonical complement of `self` inside `larger`.
    ///
    /// First tries the complement orthogonal to `self` under the plain
    /// coordinate pairing; if that pairing is degenerate on the pair (possible
    /// over C), falls back to the coordinate complement filling non-pivot
    /// columns. Both choices are canonical.
    pub fn complement_in(&self, larger: &Self) -> Result<Self> {
        if !larger.contains(self) {
            return Err(CoreError::Structural(
                "complement_in: subspace not contained in larger".into(),
            ));
        }
        let want = larger.dim() - self.dim();
        if want == 0 {
            return Ok(Self::zero(self.ambient));
        }
        // Orthogonal attempt: vectors of larger orthogonal to self.
        if self.dim() > 0 {
            let mut constraints = Matrix::zeros(0, larger.dim());
            for bref in self.basis.rows() {
                let row: Vec<S> = larger.basis.rows().map(|l| dot(l, bref)).collect();
                constraints.push_row(row);
            }
            let coeffs = constraints.kernel();
            if coeffs.nrows() == want {
                let rows: Vec<Vec<S>> = coeffs
                    .rows()
                    .map(|cf| {
                        let mut v = vec![S::zero(); self.ambient];
                        for (i, l) in larger.basis.rows().enumerate() {
                            for (j, x) in l.iter().enumerate() {
                                v[j] = v[j].clone() + cf[i].clone() * x.clone();
                            }
                        }
                        v
                    })
                    .collect();
                let cand = Self::span(self.ambient, rows);
                if cand.dim() == want {
                    let direct = cand.sum(self)?;
                    if direct.dim() == larger.dim() {
                        return Ok(cand);
                    }
                }
            }
        } else {
            return Ok(larger.clone());
        }
        // Coordinate fallback: standard-position vectors of larger whose
        // pivots are not pivots of self.
        let self_pivots = self.pivots();
        let mut rows = Vec::new();
        for (i, p) in larger.pivots().iter().enumerate() {
            if !self_pivots.contains(p) {
                rows.push(larger.basis.row(i).to_vec());
            }
        }
        // Reduce the chosen rows against self to normalize.
        let cand = Self::span(self.ambient, rows);
        if cand.dim() == want && cand.sum(self)?.dim() == larger.dim() {
            return Ok(cand);
        }
        // Last resort: greedy completion.
        let mut acc = self.clone();
        let mut rows = Vec::new();
        for r in larger.basis.rows() {
            if !acc.contains_vector(r) {
                rows.push(r.to_vec());
                acc = acc.sum(&Self::span(self.ambient, vec![r.to_vec()]))?;
            }
        }
        let cand = Self::span(self.ambient, rows);
        if cand.dim() == want {
            Ok(cand)
        } else {
            Err(CoreError::Internal("complement construction failed".into()))
        }
    }

    /// Coordinates of v in this subspace's basis.
    pub fn coordinates(&self, v: &[S]) -> Result<Vec<S>> {
        // basis^T x = v
        self.basis.transpose().solve(v)
    }

    pub fn conj(&self, conjugation: &Matrix<S>) -> Self {
        let rows: Vec<Vec<S>> = self
            .basis
            .rows()
            .map(|r| conjugation.apply(&r.iter().map(|x| x.conjugate()).collect::<Vec<_>>()))
            .collect();
        Self::span(self.ambient, rows)
    }
}

/// Coordinates on a quotient H/V through a canonical complement carrier.
pub struct QuotientSpace<S: Scalar> {
    carrier: Subspace<S>,
    v_basis: Vec<Vec<S>>,
}

impl<S: Scalar> QuotientSpace<S> {
    pub fn new(v: &Subspace<S>) -> Result<Self> {
        let carrier = v.complement_in(&Subspace::full(v.ambient()))?;
        Ok(Self {
            carrier,
            v_basis: v.basis_vectors(),
        })
    }

    /// Quotient of `inside` by `v` (v must be contained in `inside`); the
    /// carrier is a complement of v inside `inside`.
    pub fn of_pair(v: &Subspace<S>, inside: &Subspace<S>) -> Result<Self> {
        let carrier = v.complement_in(inside)?;
        Ok(Self {
            carrier,
            v_basis: v.basis_vectors(),
        })
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn carrier(&self) -> &Subspace<S> {
        &self.carrier
    }

    /// Coordinates of x mod V in the carrier basis (x must lie in V + carrier).
    pub fn project(&self, x: &[S]) -> Result<Vec<S>> {
        let vdim = self.v_basis.len();
        let cdim = self.carrier.dim();
        let n = x.len();
        let mut m = Matrix::zeros(n, vdim + cdim);
        for (c, bv) in self.v_basis.iter().enumerate() {
            for r in 0..n {
                m[(r, c)] = bv[r].clone();
            }
        }
        for (c, cv) in self.carrier.basis_vectors().iter().enumerate() {
            for r in 0..n {
                m[(r, vdim + c)] = cv[r].clone();
            }
        }
        let coords = m.solve(x)?;
        Ok(coords[vdim..].to_vec())
    }

    /// Embed carrier coordinates back into the ambient space.
    pub fn embed(&self, q: &[S]) -> Vec<S> {
        let n = self.carrier.ambient();
        let mut out = vec![S::zero(); n];
        for (c, cv) in self.carrier.basis_vectors().iter().enumerate() {
            for r in 0..n {
                out[r] = out[r].clone() + q[c].clone() * cv[r].clone();
            }
        }
        out
    }

    /// Induced operator on the quotient, in carrier coordinates. The operator
    /// must preserve V and map the carrier into V + carrier.
    pub fn induced(&self, op: &Matrix<S>) -> Result<Matrix<S>> {
        let cdim = self.dim();
        let mut cols = Vec::with_capacity(cdim);
        for cv in self.carrier.basis_vectors() {
            cols.push(self.project(&op.apply(&cv))?);
        }
        Ok(Matrix::from_fn(cdim, cdim, |r, c| cols[c][r].clone()))
    }

    /// Image of an ambient subspace in quotient coordinates.
    pub fn project_subspace(&self, sub: &Subspace<S>) -> Result<Subspace<S>> {
        let rows: Result<Vec<Vec<S>>> = sub
            .basis_vectors()
            .iter()
            .map(|v| self.project(v))
            .collect();
        Ok(Subspace::span(self.dim(), rows?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussRational, Rational};

    type Sub = Subspace<Rational>;

    fn e(n: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![<Rational as Scalar>::zero(); n];
        v[i] = <Rational as Scalar>::one();
        v
    }

    #[test]
    fn sum_of_axes_is_full() {
        let a = Sub::span(2, vec![e(2, 0)]);
        let b = Sub::span(2, vec![e(2, 1)]);
        assert!(a.sum(&b).unwrap().is_full());
    }

    #[test]
    fn intersection_of_transverse_lines_is_zero() {
        let a = Sub::span(2, vec![vec![Scalar::from_i64(1), Scalar::from_i64(1)]]);
        let b = Sub::span(2, vec![vec![Scalar::from_i64(1), Scalar::from_i64(-1)]]);
        assert!(a.intersection(&b).unwrap().is_zero());
    }

    #[test]
    fn grassmann_dimension_identity() {
        let a = Sub::span(
            4,
            vec![
                vec![Scalar::from_i64(1), Scalar::from_i64(2), Scalar::from_i64(0), Scalar::from_i64(0)],
                vec![Scalar::from_i64(0), Scalar::from_i64(1), Scalar::from_i64(1), Scalar::from_i64(0)],
            ],
        );
        let b = Sub::span(
            4,
            vec![
                vec![Scalar::from_i64(0), Scalar::from_i64(1), Scalar::from_i64(0), Scalar::from_i64(3)],
                vec![Scalar::from_i64(0), Scalar::from_i64(0), Scalar::from_i64(1), Scalar::from_i64(1)],
            ],
        );
        let s = a.sum(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        assert!(a.contains(&i) && b.contains(&i));
        assert!(s.contains(&a) && s.contains(&b));
    }

    #[test]
    fn complement_direct_sum() {
        let inner = Sub::span(3, vec![vec![Scalar::from_i64(1), Scalar::from_i64(1), Scalar::from_i64(0)]]);
        let outer = Sub::full(3);
        let c = inner.complement_in(&outer).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(inner.intersection(&c).unwrap().is_zero());
        assert!(inner.sum(&c).unwrap().is_full());
    }

    #[test]
    fn complement_isotropic_over_gauss() {
        // span(e1 + i e2) is isotropic for the plain pairing; the fallback
        // complement must still produce a direct sum.
        type GSub = Subspace<GaussRational>;
        let i = GaussRational::i();
        let one = <GaussRational as Scalar>::one();
        let inner = GSub::span(2, vec![vec![one.clone(), i]]);
        let c = inner.complement_in(&GSub::full(2)).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(inner.intersection(&c).unwrap().is_zero());
    }

    #[test]
    fn preimage_of_jordan_block() {
        // N e2 = e1: preimage of span(e1) is the whole plane, preimage of 0 is ker N.
        let n = Matrix::<Rational>::from_i64(&[&[0, 1], &[0, 0]]);
        let line = Sub::span(2, vec![e(2, 0)]);
        assert!(line.preimage(&n).unwrap().is_full());
        let z = Sub::zero(2);
        let pre = z.preimage(&n).unwrap();
        assert_eq!(pre, Sub::span(2, vec![e(2, 0)]));
    }
}
