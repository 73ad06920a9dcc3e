//! Verification of the polarized mixed Hodge structure axioms.

use crate::error::{CoreError, Result};
use crate::hodge::{hermitian_non_positive_witness, i_pow};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::QuotientSpace;

use super::splitting::MixedHodgeStructure;
use super::weight::{primitive_decomposition, shifted_weight_filtration, weight_filtration};

#[derive(Clone, Debug)]
pub struct PolarizedMhsReport<S: Scalar> {
    /// Item i: W equals the shifted monodromy weight filtration of (N, k).
    pub weight_filtration_ok: bool,
    /// Item ii: F induces a pure Hodge structure of weight l on every Gr_l.
    pub purity_ok: bool,
    /// Item iii: N F^p inside F^{p-1}.
    pub horizontality_ok: bool,
    /// Item iv: S_s = S(. , N^s .) polarizes the primitive parts.
    pub positivity_ok: bool,
    pub details: Vec<String>,
    /// Witness vectors for positivity failures (ambient coordinates).
    pub witnesses: Vec<(i64, Vec<S>)>,
}

impl<S: Scalar> PolarizedMhsReport<S> {
    pub fn passed(&self) -> bool {
        self.weight_filtration_ok && self.purity_ok && self.horizontality_ok && self.positivity_ok
    }
}

/// Check items i-iv of the polarized MHS axioms for (W, F) with nilpotent N
/// and weight k, where W is expected to be the shifted filtration W(N, k).
pub fn verify_polarized_mhs<S: Scalar>(
    mhs: &MixedHodgeStructure<S>,
    n: &Matrix<S>,
    k: i64,
) -> Result<PolarizedMhsReport<S>> {
    let s_form = mhs
        .polarization()
        .ok_or_else(|| CoreError::Precondition("polarized check needs S".into()))?
        .clone();
    let mut details = Vec::new();
    let mut witnesses = Vec::new();

    // i) weight filtration
    let expected_w = shifted_weight_filtration(n, k)?;
    let weight_filtration_ok = &expected_w == mhs.weight_filtration();
    if !weight_filtration_ok {
        details.push("W differs from the shifted monodromy weight filtration".into());
    }

    // ii) graded purity
    let mut purity_ok = true;
    for l in mhs.weight_filtration().jumps() {
        match graded_purity(mhs, l) {
            Ok(true) => {}
            Ok(false) | Err(_) => {
                purity_ok = false;
                details.push(format!("Gr_{l} does not carry a pure weight-{l} structure"));
            }
        }
    }

    // iii) horizontality
    let mut horizontality_ok = true;
    for p in mhs.hodge_filtration().jumps() {
        let img = mhs.hodge_filtration().piece_at(p).image(n)?;
        if !mhs.hodge_filtration().piece_at(p - 1).contains(&img) {
            horizontality_ok = false;
            details.push(format!("N(F^{p}) not contained in F^{}", p - 1));
        }
    }

    // iv) positivity of S_s on primitives at shifted level l = k + s.
    let mut positivity_ok = true;
    if weight_filtration_ok && purity_ok {
        let centered = weight_filtration(n)?;
        let prims = primitive_decomposition(&centered, n)?;
        for (s, piece) in &prims {
            if piece.primitive.is_zero() {
                continue;
            }
            let l = k + s;
            let w_l = mhs.weight_filtration().piece_at(l);
            let w_lm = mhs.weight_filtration().piece_at(l - 1);
            let q_space = QuotientSpace::of_pair(&w_lm, &w_l)?;
            let p_tilde = q_space.project_subspace(&piece.primitive)?;
            // Hodge pieces of the induced pure structure on Gr_l.
            let n_pow = n.pow(*s as usize);
            for p in mhs.hodge_filtration().jumps() {
                let q = l - p;
                if q < 0 || p < 0 {
                    continue;
                }
                let f_p = q_space.project_subspace(
                    &mhs.hodge_filtration().piece_at(p).intersection(&w_l)?,
                )?;
                let f_q_conj = q_space.project_subspace(
                    &mhs
                        .hodge_filtration()
                        .piece_at(q)
                        .intersection(&w_l)?
                        .conj(mhs.conjugation()),
                )?;
                let h_pq = f_p.intersection(&f_q_conj)?.intersection(&p_tilde)?;
                if h_pq.is_zero() {
                    continue;
                }
                let basis: Vec<Vec<S>> = h_pq
                    .basis_vectors()
                    .iter()
                    .map(|qc| q_space.embed(qc))
                    .collect();
                // Gram conjugate-linear in the first index:
                // G_ij = i^{p-q} S(v_j, N^s conj(v_i)).
                let gram = Matrix::from_fn(basis.len(), basis.len(), |i, j| {
                    let tw = n_pow.apply(&mhs.conj_vector(&basis[i]));
                    i_pow::<S>(p - q) * s_form.eval(&basis[j], &tw)
                });
                if let Some((coords, _value)) = hermitian_non_positive_witness(&gram) {
                    positivity_ok = false;
                    let dim = mhs.dim();
                    let mut vec = vec![S::zero(); dim];
                    for (c, b) in coords.iter().zip(&basis) {
                        for i in 0..dim {
                            vec[i] = vec[i].clone() + c.clone() * b[i].clone();
                        }
                    }
                    details.push(format!(
                        "S_{s} not positive on the ({p},{q}) primitive part at level {l}"
                    ));
                    witnesses.push((l, vec));
                }
            }
        }
    } else {
        positivity_ok = false;
        details.push("positivity skipped: prerequisite items failed".into());
    }

    Ok(PolarizedMhsReport {
        weight_filtration_ok,
        purity_ok,
        horizontality_ok,
        positivity_ok,
        details,
        witnesses,
    })
}

/// Whether F induces a pure Hodge structure of weight l on Gr_l.
fn graded_purity<S: Scalar>(mhs: &MixedHodgeStructure<S>, l: i64) -> Result<bool> {
    let w_l = mhs.weight_filtration().piece_at(l);
    let w_lm = mhs.weight_filtration().piece_at(l - 1);
    if w_l.dim() == w_lm.dim() {
        return Ok(true);
    }
    let q_space = QuotientSpace::of_pair(&w_lm, &w_l)?;
    let total = q_space.dim();
    let fj = mhs.hodge_filtration().jumps();
    let (flo, fhi) = (*fj.first().unwrap(), *fj.last().unwrap());
    for p in flo..=(fhi + 1) {
        let q = l - p + 1;
        let f_p = q_space
            .project_subspace(&mhs.hodge_filtration().piece_at(p).intersection(&w_l)?)?;
        let conj_f = q_space.project_subspace(
            &mhs
                .hodge_filtration()
                .piece_at(q)
                .intersection(&w_l)?
                .conj(mhs.conjugation()),
        )?;
        let sum = f_p.sum(&conj_f)?;
        let inter = f_p.intersection(&conj_f)?;
        if sum.dim() != total || !inter.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::{BilinearForm, Parity};
    use crate::filtration::{Direction, Filtration};
    use std::collections::BTreeMap;

    use crate::scalar::GaussRational;
    use crate::subspace::Subspace;
    type G = GaussRational;

    fn one() -> G {
        <G as Scalar>::one()
    }

    fn e(n: usize, i: usize) -> Vec<G> {
        let mut v = vec![<G as Scalar>::zero(); n];
        v[i] = one();
        v
    }

    /// The weight-1 elliptic limit: N e2 = e1, F = span(e2), W = W(N, 1).
    fn elliptic_limit(sign: i64) -> (MixedHodgeStructure<G>, Matrix<G>) {
        let mut n = Matrix::<G>::zeros(2, 2);
        n[(0, 1)] = one();
        let w = shifted_weight_filtration(&n, 1).unwrap();
        let mut fp = BTreeMap::new();
        fp.insert(0, Subspace::full(2));
        fp.insert(1, Subspace::span(2, vec![e(2, 1)]));
        let f = Filtration::new(Direction::Decreasing, 2, fp).unwrap();
        let gram = Matrix::from_i64(&[&[0, -sign], &[sign, 0]]);
        let s = BilinearForm::new(gram, Parity::Skew).unwrap();
        let mhs =
            MixedHodgeStructure::new(Matrix::identity(2), w, f, Some(s), vec![n.clone()]).unwrap();
        (mhs, n)
    }

    #[test]
    fn elliptic_limit_is_polarized() {
        let (mhs, n) = elliptic_limit(1);
        let report = verify_polarized_mhs(&mhs, &n, 1).unwrap();
        assert!(report.passed(), "{:?}", report.details);
    }

    #[test]
    fn negated_polarization_fails_positivity() {
        let (mhs, n) = elliptic_limit(-1);
        let report = verify_polarized_mhs(&mhs, &n, 1).unwrap();
        assert!(report.weight_filtration_ok && report.purity_ok && report.horizontality_ok);
        assert!(!report.positivity_ok);
        assert!(!report.witnesses.is_empty());
    }

    #[test]
    fn horizontality_violation_detected() {
        // Same W and S, but F = span(e1): N F^1 = 0 is fine, so instead use
        // a 3-dim example where N pushes F^1 outside F^0 jumps... simplest:
        // swap F to span(e1 + e2) so N(F^1) = span(e1) stays in F^0; instead
        // violate with F^2 two steps up.
        let mut n = Matrix::<G>::zeros(2, 2);
        n[(0, 1)] = one();
        let w = shifted_weight_filtration(&n, 1).unwrap();
        let mut fp = BTreeMap::new();
        fp.insert(0, Subspace::full(2));
        // F^1 = F^2 = span(e2): N(F^2) = span(e1) is not inside F^1.
        fp.insert(1, Subspace::span(2, vec![e(2, 1)]));
        fp.insert(2, Subspace::span(2, vec![e(2, 1)]));
        let f = Filtration::new(Direction::Decreasing, 2, fp).unwrap();
        let gram = Matrix::from_i64(&[&[0, -1], &[1, 0]]);
        let s = BilinearForm::new(gram, Parity::Skew).unwrap();
        let mhs =
            MixedHodgeStructure::new(Matrix::identity(2), w, f, Some(s), vec![n.clone()]).unwrap();
        let report = verify_polarized_mhs(&mhs, &n, 1).unwrap();
        assert!(!report.horizontality_ok);
    }
}
