//! Jacobson-Morozov sl2 triples for nilpotent endomorphisms, via exact
//! Jordan chains.

use crate::error::{CoreError, Result};
use crate::matrix::Matrix;
use crate::scalar::{rat_int, Scalar};
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct Sl2Triple<S: Scalar> {
    /// The nilpotent input (raising by -2 ... X lowers chains here).
    pub x: Matrix<S>,
    /// Partner with [X, Y] = H.
    pub y: Matrix<S>,
    /// Semisimple grading element with [H, X] = 2X, [H, Y] = -2Y.
    pub h: Matrix<S>,
}

impl<S: Scalar> Sl2Triple<S> {
    pub fn verify(&self) -> Result<()> {
        let two = S::from_i64(2);
        if self.h.commutator(&self.x) != self.x.scale(&two) {
            return Err(CoreError::Structural("[H,X] != 2X".into()));
        }
        if self.h.commutator(&self.y) != self.y.scale(&-two) {
            return Err(CoreError::Structural("[H,Y] != -2Y".into()));
        }
        if self.x.commutator(&self.y) != self.h {
            return Err(CoreError::Structural("[X,Y] != H".into()));
        }
        Ok(())
    }
}

/// Exact Jordan chain decomposition of a nilpotent operator. Returns chains
/// as vectors ordered bottom-up: chain[i] = X^{m-1-i} (top), so X maps
/// chain[i] -> chain[i-1] and kills chain[0].
pub fn jordan_chains<S: Scalar>(x: &Matrix<S>) -> Result<Vec<Vec<Vec<S>>>> {
    let dim = x.nrows();
    let d = x.nilpotency_index().ok_or(CoreError::NotNilpotent)?;
    if d == 0 {
        return Ok(vec![]);
    }
    let mut powers = vec![Matrix::identity(dim)];
    for _ in 0..d {
        let last = powers.last().unwrap().clone();
        powers.push(last * x.clone());
    }
    let kernels: Vec<Subspace<S>> = powers
        .iter()
        .map(|p| Subspace::from_rows_matrix(dim, p.kernel()))
        .collect();
    let mut chains: Vec<Vec<Vec<S>>> = Vec::new();
    // Tops of length-m chains, processed longest first. `descended[m]` spans
    // X-images of elements of height m+1 from longer chains.
    let mut descended: Vec<Subspace<S>> = vec![Subspace::zero(dim); d + 2];
    for m in (1..=d).rev() {
        let k_m = &kernels[m];
        let blocked = kernels[m - 1].sum(&descended[m])?;
        let tops = blocked.intersection(k_m)?.complement_in(k_m)?;
        for top in tops.basis_vectors() {
            let mut chain = Vec::with_capacity(m);
            let mut cur = top.clone();
            chain.push(cur.clone());
            for _ in 1..m {
                cur = x.apply(&cur);
                chain.push(cur.clone());
            }
            chain.reverse(); // bottom (killed by X) first
            // Record images for shorter-chain bookkeeping.
            for (i, v) in chain.iter().enumerate() {
                // element at height i+1 (X^{i+1} kills it); its X-image has
                // height i.
                if i >= 1 {
                    descended[i] = descended[i]
                        .sum(&Subspace::span(dim, vec![chain[i - 1].clone()]))?;
                }
                let _ = v;
            }
            chains.push(chain);
        }
    }
    // Sanity: total length = dim.
    let total: usize = chains.iter().map(|c| c.len()).sum();
    if total != dim {
        return Err(CoreError::Internal(format!(
            "Jordan chains cover {total} of {dim} dimensions"
        )));
    }
    Ok(chains)
}

/// sl2 triple through X: H acts on a length-m chain with weights
/// m-1, m-3, ..., -(m-1) from bottom to top reversed (chain[i] has weight
/// m-1-2i), and Y e_i = (i+1)(m-1-i) e_{i+1}.
pub fn jacobson_morozov<S: Scalar>(x: &Matrix<S>) -> Result<Sl2Triple<S>> {
    let dim = x.nrows();
    let chains = jordan_chains(x)?;
    if chains.is_empty() {
        return Ok(Sl2Triple {
            x: x.clone(),
            y: Matrix::zeros(dim, dim),
            h: Matrix::zeros(dim, dim),
        });
    }
    // Basis-change matrix: columns are chain vectors.
    let mut cols: Vec<Vec<S>> = Vec::with_capacity(dim);
    let mut h_diag: Vec<i64> = Vec::new();
    let mut y_action: Vec<Option<(usize, S)>> = Vec::new(); // target col, coeff
    for chain in &chains {
        let m = chain.len();
        let base = cols.len();
        for (i, v) in chain.iter().enumerate() {
            cols.push(v.clone());
            h_diag.push(m as i64 - 1 - 2 * i as i64);
            if i + 1 < m {
                let c = (i as i64 + 1) * (m as i64 - 1 - i as i64);
                y_action.push(Some((base + i + 1, S::from_rational(&rat_int(c), 64))));
            } else {
                y_action.push(None);
            }
        }
    }
    let p = Matrix::from_fn(dim, dim, |r, c| cols[c][r].clone());
    let p_inv = p.inverse()?;
    let h_c = Matrix::from_fn(dim, dim, |r, c| {
        if r == c {
            S::from_i64(h_diag[r])
        } else {
            S::zero()
        }
    });
    let mut y_c = Matrix::zeros(dim, dim);
    for (col, act) in y_action.iter().enumerate() {
        if let Some((target, coeff)) = act {
            y_c[(*target, col)] = coeff.clone();
        }
    }
    let h = p.clone() * h_c * p_inv.clone();
    let y = p * y_c * p_inv;
    let triple = Sl2Triple {
        x: x.clone(),
        y,
        h,
    };
    triple.verify()?;
    Ok(triple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixed::weight::weight_filtration;
    use crate::scalar::Rational;

    type M = Matrix<Rational>;

    fn jordan(sizes: &[usize]) -> M {
        let dim: usize = sizes.iter().sum();
        let mut m = M::zeros(dim, dim);
        let mut off = 0;
        for &s in sizes {
            for i in 1..s {
                m[(off + i - 1, off + i)] = Scalar::from_i64(1);
            }
            off += s;
        }
        m
    }

    #[test]
    fn jordan_two_triple() {
        let x = jordan(&[2]);
        let t = jacobson_morozov(&x).unwrap();
        t.verify().unwrap();
        assert_eq!(t.h, M::from_i64(&[&[1, 0], &[0, -1]]));
        // Y e1 = e2.
        let e1 = vec![Scalar::from_i64(1), Scalar::from_i64(0)];
        assert_eq!(t.y.apply(&e1), vec![Scalar::from_i64(0), Scalar::from_i64(1)]);
    }

    #[test]
    fn jordan_three_triple() {
        let x = jordan(&[3]);
        let t = jacobson_morozov(&x).unwrap();
        t.verify().unwrap();
        assert_eq!(t.h, M::from_i64(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]));
    }

    #[test]
    fn zero_gives_zero_triple() {
        let x = M::zeros(3, 3);
        let t = jacobson_morozov(&x).unwrap();
        assert!(t.h.is_zero() && t.y.is_zero());
    }

    #[test]
    fn h_grades_weight_filtration() {
        let x = jordan(&[3, 2]);
        let t = jacobson_morozov(&x).unwrap();
        t.verify().unwrap();
        let w = weight_filtration(&x).unwrap();
        // With [H, X] = 2X the eigenvalue-l space of H sits inside W_{-l}
        // and meets W_{-l-1} trivially.
        for l in -2i64..=2 {
            let shifted = t.h.clone() - M::identity(5).scale(&Scalar::from_i64(l));
            let eig = Subspace::from_rows_matrix(5, shifted.kernel());
            if !eig.is_zero() {
                assert!(w.piece_at(-l).contains(&eig), "eigenvalue {l}");
                assert!(eig.intersection(&w.piece_at(-l - 1)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn mixed_blocks_chain_count() {
        let x = jordan(&[4, 2, 1]);
        let chains = jordan_chains(&x).unwrap();
        let mut lens: Vec<usize> = chains.iter().map(|c| c.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![1, 2, 4]);
    }
}
