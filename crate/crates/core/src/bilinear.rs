//! Nondegenerate bilinear forms with parity bookkeeping.

use crate::error::{CoreError, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Symmetric,
    Skew,
}

impl Parity {
    /// Parity matching a weight: skew for odd weight, symmetric for even.
    pub fn for_weight(k: i64) -> Self {
        if k.rem_euclid(2) == 1 {
            Parity::Skew
        } else {
            Parity::Symmetric
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct BilinearForm<S: Scalar> {
    gram: Matrix<S>,
    parity: Parity,
}

impl<S: Scalar> BilinearForm<S> {
    pub fn new(gram: Matrix<S>, parity: Parity) -> Result<Self> {
        if !gram.is_square() {
            return Err(CoreError::DimensionMismatch("Gram matrix not square".into()));
        }
        let form = Self { gram, parity };
        form.check_parity()?;
        Ok(form)
    }

    /// Standard symplectic form on even-dimensional space: S(e_i, e_{i+n}) = 1.
    pub fn standard_symplectic(n: usize) -> Self {
        let mut gram = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            gram[(i, n + i)] = S::one();
            gram[(n + i, i)] = -S::one();
        }
        Self {
            gram,
            parity: Parity::Skew,
        }
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn check_parity(&self) -> Result<()> {
        let t = self.gram.transpose();
        let ok = match self.parity {
            Parity::Symmetric => t == self.gram,
            Parity::Skew => t == self.gram.scale(&(-S::one())),
        };
        if ok {
            Ok(())
        } else {
            Err(CoreError::Structural("Gram parity mismatch".into()))
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.gram.nrows()
    }

    /// S(v, w), no conjugation.
    pub fn eval(&self, v: &[S], w: &[S]) -> S {
        let gv = self.gram.apply(w);
        crate::matrix::dot(v, &gv)
    }

    /// S(v, conj w) where conj is plain coefficient conjugation.
    ///
    /// Callers with a nonstandard real structure should conjugate through it
    /// before calling.
    pub fn eval_conj(&self, v: &[S], w: &[S]) -> S {
        let wc: Vec<S> = w.iter().map(|x| x.conjugate()).collect();
        self.eval(v, &wc)
    }

    /// Gram matrix restricted to a subspace basis.
    pub fn restrict(&self, sub: &Subspace<S>) -> Matrix<S> {
        let vs = sub.basis_vectors();
        Matrix::from_fn(vs.len(), vs.len(), |i, j| self.eval(&vs[i], &vs[j]))
    }

    /// S-orthogonal complement {v : S(v, w) = 0 for all w in sub}.
    pub fn orthogonal_complement(&self, sub: &Subspace<S>) -> Subspace<S> {
        // Constraints: (basis sub) G^T? S(v,w) = v^T G w; fix w in basis:
        // functional v -> v^T (G w). Rows G w span the annihilating functionals.
        let mut constraints = Matrix::zeros(0, self.dim());
        for w in sub.basis_vectors() {
            constraints.push_row(self.gram.apply(&w));
        }
        Subspace::from_rows_matrix(self.dim(), constraints.kernel())
    }

    /// Whether N is infinitesimally orthogonal: S(N v, w) + S(v, N w) = 0.
    pub fn is_infinitesimally_orthogonal(&self, n: &Matrix<S>) -> bool {
        let a = n.transpose() * self.gram.clone();
        let b = self.gram.clone() * n.clone();
        (a + b).is_zero()
    }

    /// Whether T preserves the form: T^t S T = S (exactly for exact scalars).
    pub fn is_isometry(&self, t: &Matrix<S>) -> bool {
        t.transpose() * self.gram.clone() * t.clone() == self.gram
    }

    /// Twisted form S_l(v, w) = S(v, N^l w).
    pub fn twist(&self, n: &Matrix<S>, l: usize) -> Matrix<S> {
        self.gram.clone() * n.pow(l)
    }

    pub fn scale(&self, s: &S) -> Self {
        Self {
            gram: self.gram.scale(s),
            parity: self.parity,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn symplectic_parity_and_eval() {
        let s = BilinearForm::<Rational>::standard_symplectic(1);
        assert!(s.is_nondegenerate());
        let e1 = vec![Scalar::from_i64(1), Scalar::from_i64(0)];
        let e2 = vec![Scalar::from_i64(0), Scalar::from_i64(1)];
        assert_eq!(s.eval(&e1, &e2), Scalar::from_i64(1));
        assert_eq!(s.eval(&e2, &e1), Scalar::from_i64(-1));
        assert_eq!(s.eval(&e1, &e1), Scalar::from_i64(0));
    }

    #[test]
    fn jordan_block_is_infinitesimally_symplectic() {
        // N e2 = e1 preserves the symplectic form infinitesimally.
        let s = BilinearForm::<Rational>::standard_symplectic(1);
        let n = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(s.is_infinitesimally_orthogonal(&n));
    }

    #[test]
    fn orthogonal_complement_dims() {
        let s = BilinearForm::<Rational>::standard_symplectic(2);
        let line = Subspace::span(
            4,
            vec![vec![
                Scalar::from_i64(1),
                Scalar::from_i64(0),
                Scalar::from_i64(0),
                Scalar::from_i64(0),
            ]],
        );
        let perp = s.orthogonal_complement(&line);
        assert_eq!(perp.dim(), 3);
        // e1 is isotropic so it lies in its own complement.
        assert!(perp.contains(&line));
    }
}
