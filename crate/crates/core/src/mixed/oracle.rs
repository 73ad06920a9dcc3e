//! Brute-force flag-search oracle for weight filtrations.
//!
//! Independent of the production construction: candidate pieces are drawn
//! from the sum-closure of the kernel/image lattice of N and assembled level
//! by level under the defining constraints, with the full verification at
//! each leaf. Deliberately slow and simple; used by tests and the acceptance
//! suite only.

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::filtration::{Direction, Filtration};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

use super::weight::verify_weight_filtration;

pub fn weight_filtration_flag_search<S: Scalar>(n: &Matrix<S>) -> Result<Filtration<S>> {
    let dim = n.nrows();
    let d = n.nilpotency_index().ok_or(CoreError::NotNilpotent)?;
    if d <= 1 {
        let mut m = BTreeMap::new();
        m.insert(0, Subspace::full(dim));
        return Filtration::new(Direction::Increasing, dim, m);
    }
    // Basic lattice: ker N^a cap im N^b.
    let mut powers = vec![Matrix::identity(dim)];
    for _ in 0..d {
        let last = powers.last().unwrap().clone();
        powers.push(last * n.clone());
    }
    let full = Subspace::full(dim);
    let mut basics: Vec<Subspace<S>> = Vec::new();
    for a in 0..=d {
        let ker = Subspace::from_rows_matrix(dim, powers[a].kernel());
        for b in 0..=d {
            let im = full.image(&powers[b])?;
            let piece = ker.intersection(&im)?;
            if !basics.contains(&piece) {
                basics.push(piece);
            }
        }
    }
    // Close under sums.
    let mut lattice = basics.clone();
    let mut changed = true;
    while changed {
        changed = false;
        let snapshot = lattice.clone();
        for (i, a) in snapshot.iter().enumerate() {
            for b in &snapshot[i + 1..] {
                let s = a.sum(b)?;
                if !lattice.contains(&s) {
                    lattice.push(s);
                    changed = true;
                    if lattice.len() > 4096 {
                        return Err(CoreError::Internal("oracle lattice too large".into()));
                    }
                }
            }
        }
    }
    lattice.sort_by_key(|s| s.dim());

    let lmax = (d - 1) as i64;
    let levels: Vec<i64> = (-lmax..=lmax).collect();
    let mut chosen: Vec<Subspace<S>> = Vec::new();
    if search(n, &lattice, &levels, dim, lmax, &mut chosen)? {
        let mut pieces = BTreeMap::new();
        for (idx, l) in levels.iter().enumerate() {
            pieces.insert(*l, chosen[idx].clone());
        }
        pieces.insert(lmax, Subspace::full(dim));
        let w = Filtration::new(Direction::Increasing, dim, pieces)?;
        verify_weight_filtration(n, &w, 0)?;
        return Ok(w);
    }
    Err(CoreError::Internal("flag search found no weight filtration".into()))
}

fn search<S: Scalar>(
    n: &Matrix<S>,
    lattice: &[Subspace<S>],
    levels: &[i64],
    dim: usize,
    lmax: i64,
    chosen: &mut Vec<Subspace<S>>,
) -> Result<bool> {
    let idx = chosen.len();
    if idx == levels.len() {
        // Assemble and verify fully.
        let mut pieces = BTreeMap::new();
        for (i, l) in levels.iter().enumerate() {
            pieces.insert(*l, chosen[i].clone());
        }
        pieces.insert(lmax, Subspace::full(dim));
        let Ok(w) = Filtration::new(Direction::Increasing, dim, pieces) else {
            return Ok(false);
        };
        return Ok(verify_weight_filtration(n, &w, 0).is_ok());
    }
    let level = levels[idx];
    // Constraints known at this point of the search.
    let prev = if idx == 0 {
        Subspace::zero(dim)
    } else {
        chosen[idx - 1].clone()
    };
    let n_constraint: Option<Subspace<S>> = if idx >= 2 {
        Some(chosen[idx - 2].preimage(n)?)
    } else {
        None
    };
    // Duality forces the dimension of W_l once W_{-l-1} is fixed.
    let forced_dim: Option<usize> = if level >= 0 {
        let mirror = -level - 1;
        let mpos = levels.iter().position(|&l| l == mirror);
        mpos.map(|i| dim - chosen[i].dim())
    } else {
        None
    };
    for cand in lattice {
        if let Some(fd) = forced_dim {
            if cand.dim() != fd {
                continue;
            }
        }
        if !cand.contains(&prev) {
            continue;
        }
        if level == lmax - 1 || level == lmax {
            // handled by full-space cap at the end
        }
        if let Some(pre) = &n_constraint {
            if !pre.contains(cand) {
                continue;
            }
        } else {
            // W_l for the two lowest levels must satisfy N W_l = 0 drop rule
            // only via later checks.
        }
        chosen.push(cand.clone());
        if search(n, lattice, levels, dim, lmax, chosen)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixed::weight::weight_filtration;
    use crate::scalar::Rational;

    fn jordan(sizes: &[usize]) -> Matrix<Rational> {
        let dim: usize = sizes.iter().sum();
        let mut m = Matrix::zeros(dim, dim);
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
    fn oracle_matches_construction_small() {
        for sizes in [vec![2usize], vec![3], vec![2, 1], vec![2, 2], vec![3, 2]] {
            let n = jordan(&sizes);
            let fast = weight_filtration(&n).unwrap();
            let slow = weight_filtration_flag_search(&n).unwrap();
            assert_eq!(fast, slow, "sizes {sizes:?}");
        }
    }
}
