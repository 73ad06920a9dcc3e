//! The grading operator e(y) = exp(sum_a (1/2) log t_a Y_a(u)) built from
//! Jacobson-Morozov semisimple elements of the cone.

use crate::convert;
use crate::error::{CoreError, Result};
use crate::matrix::Matrix;
use crate::numeric::{BigComplex, BigReal};
use crate::scalar::{GaussRational, Rational, Scalar};
use crate::subspace::Subspace;

use super::cone::NilpotentCone;
use super::jm::jacobson_morozov;

/// e(y) together with its exact spectral data.
#[derive(Clone, Debug)]
pub struct GradingOperator {
    pub matrix: Matrix<BigComplex>,
    pub inverse: Matrix<BigComplex>,
    /// Simultaneous eigenspaces with their integer eigenvalue tuples
    /// (one value per index of the index set).
    pub eigenspaces: Vec<(Vec<i64>, Subspace<GaussRational>)>,
    /// t-coordinates used for the exponents.
    pub t: Vec<BigReal>,
}

/// Build e(y) for the region indexed by `index_set` (1-based, increasing,
/// ending at the cone size) at the positive rational point y.
pub fn grading_operator(
    cone: &NilpotentCone,
    index_set: &[usize],
    y: &[Rational],
    prec: u32,
) -> Result<GradingOperator> {
    let a = cone.size();
    let dim = cone.dim();
    if y.len() != a {
        return Err(CoreError::DimensionMismatch(format!(
            "y has {} entries, cone has {a}",
            y.len()
        )));
    }
    if index_set.is_empty()
        || *index_set.last().unwrap() != a
        || index_set.windows(2).any(|w| w[0] >= w[1])
        || index_set[0] < 1
    {
        return Err(CoreError::Precondition(
            "index set must be increasing, 1-based and end at the cone size".into(),
        ));
    }
    let zero = <Rational as Scalar>::zero();
    if y.iter().any(|v| v <= &zero) {
        return Err(CoreError::Precondition("y must be positive".into()));
    }

    // X_alpha = N_{i_alpha} + sum_{i_{alpha-1} < j < i_alpha} u_alpha^j N_j.
    let r = index_set.len();
    let mut h_partial: Vec<Matrix<GaussRational>> = Vec::with_capacity(r);
    let mut running = Matrix::<GaussRational>::zeros(dim, dim);
    for alpha in 0..r {
        let i_alpha = index_set[alpha];
        let i_prev = if alpha == 0 { 0 } else { index_set[alpha - 1] };
        let mut x = cone.nilpotents()[i_alpha - 1].clone();
        for j in (i_prev + 1)..i_alpha {
            let u = y[j - 1].clone() / y[i_alpha - 1].clone();
            x = x + cone.nilpotents()[j - 1].scale(&GaussRational::from_re(u));
        }
        if x.nilpotency_index().is_none() {
            return Err(CoreError::NotNilpotent);
        }
        let triple = jacobson_morozov(&x)?;
        running = running + triple.h;
        h_partial.push(running.clone());
    }
    for (i, h1) in h_partial.iter().enumerate() {
        for h2 in &h_partial[i + 1..] {
            if !h1.commutes_with(h2) {
                return Err(CoreError::Structural(
                    "partial grading elements do not commute".into(),
                ));
            }
        }
    }

    // t_alpha = y_{i_alpha} / y_{i_{alpha+1}}, t_r = y_a.
    let mut t = Vec::with_capacity(r);
    for alpha in 0..r {
        let q = if alpha + 1 < r {
            y[index_set[alpha] - 1].clone() / y[index_set[alpha + 1] - 1].clone()
        } else {
            y[a - 1].clone()
        };
        t.push(BigReal::from_rational(&q, prec));
    }

    // Simultaneous integer eigenspaces of the commuting semisimple elements.
    let mut spaces: Vec<(Vec<i64>, Subspace<GaussRational>)> =
        vec![(vec![], Subspace::full(dim))];
    let bound = (dim as i64) * (r as i64) + 1;
    for h in &h_partial {
        let mut next = Vec::new();
        for (evs, space) in &spaces {
            let mut covered = 0usize;
            for lambda in -bound..=bound {
                let shifted = h.clone() - Matrix::identity(dim).scale(&Scalar::from_i64(lambda));
                let eig = Subspace::from_rows_matrix(dim, shifted.kernel());
                let inter = eig.intersection(space)?;
                if !inter.is_zero() {
                    let mut e2 = evs.clone();
                    e2.push(lambda);
                    covered += inter.dim();
                    next.push((e2, inter));
                }
            }
            if covered != space.dim() {
                return Err(CoreError::Structural(
                    "grading element is not semisimple with integer spectrum".into(),
                ));
            }
        }
        spaces = next;
    }

    // Assemble e(y) = P D P^{-1} with D = prod_alpha t_alpha^{lambda_alpha/2}.
    let mut cols: Vec<Vec<BigComplex>> = Vec::with_capacity(dim);
    let mut diag: Vec<BigReal> = Vec::with_capacity(dim);
    for (evs, space) in &spaces {
        for b in space.basis_vectors() {
            cols.push(
                b.iter()
                    .map(|g| convert::gauss_to_complex(g, prec))
                    .collect(),
            );
            let mut factor = BigReal::one(prec);
            for (alpha, lambda) in evs.iter().enumerate() {
                let half = Rational::new((*lambda).into(), 2.into());
                factor = factor * t[alpha].pow_rational(&half);
            }
            diag.push(factor);
        }
    }
    if cols.len() != dim {
        return Err(CoreError::Internal("eigenspaces do not fill the space".into()));
    }
    let p = Matrix::from_fn(dim, dim, |rr, cc| cols[cc][rr].clone());
    let p_inv = p.inverse()?;
    let d = Matrix::from_fn(dim, dim, |rr, cc| {
        if rr == cc {
            BigComplex::from_real(diag[rr].clone())
        } else {
            BigComplex::zero(prec)
        }
    });
    let d_inv = Matrix::from_fn(dim, dim, |rr, cc| {
        if rr == cc {
            BigComplex::from_real(BigReal::one(prec) / diag[rr].clone())
        } else {
            BigComplex::zero(prec)
        }
    });
    let matrix = p.clone() * d * p_inv.clone();
    let inverse = p * d_inv * p_inv;
    Ok(GradingOperator {
        matrix,
        inverse,
        eigenspaces: spaces,
        t,
    })
}

impl GradingOperator {
    /// Ad((e^{-1})^t) M = (e^{-1})^t M e^t.
    pub fn ad_inverse_transpose(&self, m: &Matrix<BigComplex>) -> Matrix<BigComplex> {
        self.inverse.transpose() * m.clone() * self.matrix.transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::cone::{elliptic_cone, product_elliptic_cone};
    use crate::scalar::rat_int;

    #[test]
    fn elliptic_grading_is_diagonal_sqrt() {
        let cone = elliptic_cone();
        let y = vec![rat_int(9)];
        let g = grading_operator(&cone, &[1], &y, 128).unwrap();
        // e(y) = diag(3, 1/3) in the (e1, e2) basis.
        assert!((g.matrix[(0, 0)].re.to_f64() - 3.0).abs() < 1e-30);
        assert!((g.matrix[(1, 1)].re.to_f64() - (1.0 / 3.0)).abs() < 1e-30);
        assert!(g.matrix[(0, 1)].re.to_f64().abs() < 1e-30);
        // t = 1 gives the identity.
        let g1 = grading_operator(&cone, &[1], &[rat_int(1)], 128).unwrap();
        assert!((g1.matrix[(0, 0)].re.to_f64() - 1.0).abs() < 1e-30);
        assert!((g1.matrix[(1, 1)].re.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn product_grading_monomials() {
        let cone = product_elliptic_cone();
        // I = {1, 2}, y = (y1, y2) = (16, 4): t1 = 4, t2 = 4.
        let g = grading_operator(&cone, &[1, 2], &[rat_int(16), rat_int(4)], 128).unwrap();
        // H1 weights (chain bottoms get +1): e_{1b} -> +1, e_{2b} -> -1;
        // H1+H2 weights: e_11 -> +2, e_12/e_21 -> 0, e_22 -> -2.
        // e_11: t1^{1/2} t2^{1} = 2 * 4 = 8; e_22: 1/8.
        assert!((g.matrix[(0, 0)].re.to_f64() - 8.0).abs() < 1e-25);
        assert!((g.matrix[(3, 3)].re.to_f64() - 0.125).abs() < 1e-25);
        let m12 = g.matrix[(1, 1)].re.to_f64(); // e_12: H1 = +1, H1+H2 = 0
        let m21 = g.matrix[(2, 2)].re.to_f64(); // e_21: H1 = -1, H1+H2 = 0
        assert!((m12 - 2.0).abs() < 1e-25, "{m12}");
        assert!((m21 - 0.5).abs() < 1e-25, "{m21}");
    }
}
