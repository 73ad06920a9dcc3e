//! Invariance of the weight filtration over the interior of a nilpotent cone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::filtration::Filtration;
use crate::matrix::Matrix;
use crate::scalar::{rat, Rational, Scalar};

use super::weight::weight_filtration;

#[derive(Clone, Debug)]
pub struct ConeInvarianceReport<S: Scalar> {
    pub trials: usize,
    pub all_equal: bool,
    pub baseline: Filtration<S>,
    /// First discrepancy: the coefficient vector and the filtration it gave.
    pub discrepancy: Option<(Vec<Rational>, Filtration<S>)>,
}

/// For `trials` random positive rational coefficient vectors lambda, check
/// that weight_filtration(sum lambda_j N_j) is independent of lambda.
pub fn cone_filtration_invariance<S: Scalar>(
    nilpotents: &[Matrix<S>],
    trials: usize,
    seed: u64,
) -> Result<ConeInvarianceReport<S>> {
    if nilpotents.is_empty() {
        return Err(CoreError::Precondition("empty cone".into()));
    }
    for (i, a) in nilpotents.iter().enumerate() {
        if a.nilpotency_index().is_none() {
            return Err(CoreError::NotNilpotent);
        }
        for b in &nilpotents[i + 1..] {
            if !a.commutes_with(b) {
                return Err(CoreError::NonCommuting);
            }
        }
    }
    let dim = nilpotents[0].nrows();
    let sum = nilpotents
        .iter()
        .fold(Matrix::zeros(dim, dim), |acc, n| acc + n.clone());
    let baseline = weight_filtration(&sum)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let lambda: Vec<Rational> = (0..nilpotents.len())
            .map(|_| rat(rng.gen_range(1..=24), rng.gen_range(1..=12)))
            .collect();
        let mut combo = Matrix::zeros(dim, dim);
        for (l, n) in lambda.iter().zip(nilpotents) {
            combo = combo + n.scale(&S::from_rational(l, 64));
        }
        let w = weight_filtration(&combo)?;
        if w != baseline {
            return Ok(ConeInvarianceReport {
                trials: t + 1,
                all_equal: false,
                baseline,
                discrepancy: Some((lambda, w)),
            });
        }
    }
    Ok(ConeInvarianceReport {
        trials,
        all_equal: true,
        baseline,
        discrepancy: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<Rational>;

    #[test]
    fn single_nilpotent_trivially_invariant() {
        let mut n = M::zeros(2, 2);
        n[(0, 1)] = Scalar::from_i64(1);
        let rep = cone_filtration_invariance(&[n], 5, 7).unwrap();
        assert!(rep.all_equal);
    }

    #[test]
    fn two_commuting_jordan_blocks() {
        let mut n1 = M::zeros(4, 4);
        n1[(0, 2)] = Scalar::from_i64(1);
        n1[(1, 3)] = Scalar::from_i64(1);
        let mut n2 = M::zeros(4, 4);
        n2[(0, 1)] = Scalar::from_i64(1);
        n2[(2, 3)] = Scalar::from_i64(1);
        let rep = cone_filtration_invariance(&[n1, n2], 20, 42).unwrap();
        assert!(rep.all_equal, "{:?}", rep.discrepancy);
    }

    #[test]
    fn non_commuting_pair_rejected() {
        let mut n1 = M::zeros(3, 3);
        n1[(0, 1)] = Scalar::from_i64(1);
        let mut n2 = M::zeros(3, 3);
        n2[(1, 2)] = Scalar::from_i64(1);
        assert!(matches!(
            cone_filtration_invariance(&[n1, n2], 3, 1),
            Err(CoreError::NonCommuting)
        ));
    }
}
