//! Monodromy weight filtrations: absolute, shifted and relative, plus the
//! Lefschetz primitive decomposition.
//!
//! The absolute filtration is built from the closed formula
//!
//!   W_l = sum_{j >= max(0, -l)}  ker(N^{l+j+1})  intersect  im(N^j)
//!
//! and re-verified against both defining properties before being returned.
//! The relative filtration follows Deligne's inductive construction (top
//! graded piece of W0, primitive-string lifting with corrections, recursion on
//! the rest), again with a final exact verification.

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::filtration::{Direction, Filtration};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// Unique increasing filtration centered at 0 with N(W_l) in W_{l-2} and
/// N^l : Gr_l -> Gr_{-l} an isomorphism.
pub fn weight_filtration<S: Scalar>(n: &Matrix<S>) -> Result<Filtration<S>> {
    if !n.is_square() {
        return Err(CoreError::DimensionMismatch(
            "weight_filtration: non-square".into(),
        ));
    }
    let dim = n.nrows();
    let d = n.nilpotency_index().ok_or(CoreError::NotNilpotent)?;
    if d == 0 || dim == 0 {
        let mut m = BTreeMap::new();
        m.insert(0, Subspace::full(dim));
        return Filtration::new(Direction::Increasing, dim, m);
    }
    let mut powers = Vec::with_capacity(d + 1);
    powers.push(Matrix::identity(dim));
    for _ in 0..d {
        let last = powers.last().unwrap().clone();
        powers.push(last * n.clone());
    }
    let kernels: Vec<Subspace<S>> = powers
        .iter()
        .map(|p| Subspace::from_rows_matrix(dim, p.kernel()))
        .collect();
    let full = Subspace::full(dim);
    let images: Vec<Subspace<S>> = powers
        .iter()
        .map(|p| full.image(p))
        .collect::<Result<_>>()?;

    let lmax = (d - 1) as i64;
    let mut pieces = BTreeMap::new();
    for l in -lmax..=lmax {
        let mut acc = Subspace::zero(dim);
        let j0 = 0.max(-l) as usize;
        for j in j0..d {
            let ker_idx = l + j as i64 + 1;
            if ker_idx <= 0 {
                continue;
            }
            let ker = &kernels[(ker_idx as usize).min(d)];
            let piece = ker.intersection(&images[j])?;
            acc = acc.sum(&piece)?;
        }
        pieces.insert(l, acc);
    }
    pieces.insert(lmax.max(0), Subspace::full(dim));
    let w = Filtration::new(Direction::Increasing, dim, pieces)?;
    verify_weight_filtration(n, &w, 0)?;
    Ok(w)
}

/// Check the two defining properties of a monodromy weight filtration
/// centered at `center`, exactly.
pub fn verify_weight_filtration<S: Scalar>(
    n: &Matrix<S>,
    w: &Filtration<S>,
    center: i64,
) -> Result<()> {
    if w.direction() != Direction::Increasing {
        return Err(CoreError::InvalidFiltration(
            "weight filtration must be increasing".into(),
        ));
    }
    let jumps = w.jumps();
    let lo = *jumps.first().unwrap();
    let hi = *jumps.last().unwrap();
    // (i) N W_l in W_{l-2}
    for l in lo..=hi {
        let img = w.piece_at(l).image(n)?;
        if !w.piece_at(l - 2).contains(&img) {
            return Err(CoreError::InvalidFiltration(format!(
                "N(W_{l}) not contained in W_{}",
                l - 2
            )));
        }
    }
    // (ii) N^l : Gr_{center+l} -> Gr_{center-l} isomorphism for l >= 0
    let span = (hi - center).max(center - lo);
    for l in 0..=span {
        let up = center + l;
        let down = center - l;
        let dim_up = w.graded_dim(up);
        let dim_down = w.graded_dim(down);
        if dim_up != dim_down {
            return Err(CoreError::InvalidFiltration(format!(
                "dim Gr_{up} = {dim_up} differs from dim Gr_{down} = {dim_down}"
            )));
        }
        if l == 0 || dim_up == 0 {
            continue;
        }
        // Rank of N^l from W_up modulo W_{down-1} must be dim_up.
        let carrier = w.graded_piece(up)?;
        let nl = n.pow(l as usize);
        let image = carrier.image(&nl)?;
        if !w.piece_at(down).contains(&image) {
            return Err(CoreError::InvalidFiltration(format!(
                "N^{l}(carrier at {up}) leaves W_{down}"
            )));
        }
        let mod_space = w.piece_at(down - 1);
        let rank = image.sum(&mod_space)?.dim() - mod_space.dim();
        if rank != dim_up {
            return Err(CoreError::InvalidFiltration(format!(
                "N^{l}: Gr_{up} -> Gr_{down} has rank {rank}, expected {dim_up}"
            )));
        }
    }
    Ok(())
}

/// W_l(N, k) = W_{l+k}(N); requires N^{k+1} = 0.
pub fn shifted_weight_filtration<S: Scalar>(n: &Matrix<S>, k: i64) -> Result<Filtration<S>> {
    let d = n.nilpotency_index().ok_or(CoreError::NotNilpotent)? as i64;
    if k < 0 || d > k + 1 {
        return Err(CoreError::Precondition(format!(
            "shift k = {k} requires N^(k+1) = 0 (nilpotency index {d})"
        )));
    }
    Ok(weight_filtration(n)?.shift(-k))
}

/// Relative monodromy weight filtration W(N, W0), or None when none exists.
pub fn relative_weight_filtration<S: Scalar>(
    n: &Matrix<S>,
    w0: &Filtration<S>,
) -> Result<Option<Filtration<S>>> {
    if w0.direction() != Direction::Increasing {
        return Err(CoreError::InvalidFiltration("W0 must be increasing".into()));
    }
    n.nilpotency_index().ok_or(CoreError::NotNilpotent)?;
    for l in w0.jumps() {
        let img = w0.piece_at(l).image(n)?;
        if !w0.piece_at(l).contains(&img) {
            return Err(CoreError::Precondition(format!(
                "N does not preserve W0 at level {l}"
            )));
        }
    }
    // Fast paths: pure W0, and W0 already relative (forces N-purity, e.g. N = 0).
    let jumps = w0.jumps();
    if jumps.len() == 1 {
        let m = jumps[0];
        let w = weight_filtration(n)?.shift(-m);
        return Ok(Some(w));
    }
    if verify_relative_weight_filtration(n, w0, w0).is_ok() {
        return Ok(Some(w0.clone()));
    }
    match deligne_glued_candidate(n, w0)? {
        Some(w) => {
            if verify_relative_weight_filtration(n, w0, &w).is_ok() {
                Ok(Some(w))
            } else {
                Ok(None)
            }
        }
        None => Ok(None),
    }
}

/// Both Deligne conditions for a candidate relative filtration, exactly.
pub fn verify_relative_weight_filtration<S: Scalar>(
    n: &Matrix<S>,
    w0: &Filtration<S>,
    w: &Filtration<S>,
) -> Result<()> {
    let wj = w.jumps();
    let lo = *wj.first().unwrap();
    let hi = *wj.last().unwrap();
    for l in lo..=hi {
        let img = w.piece_at(l).image(n)?;
        if !w.piece_at(l - 2).contains(&img) {
            return Err(CoreError::InvalidFiltration(format!(
                "N(W_{l}) not in W_{}",
                l - 2
            )));
        }
    }
    // N^l : Gr^W_{j+l} Gr^{W0}_j -> Gr^W_{j-l} Gr^{W0}_j isomorphisms.
    for j in w0.jumps() {
        let v0 = w0.piece_at(j);
        let v0m = w0.piece_at(j - 1);
        for l in 0..=(hi - lo) {
            let gr = |a: i64| -> Result<usize> {
                let up = w.piece_at(a).intersection(&v0)?.sum(&v0m)?.dim();
                let dn = w.piece_at(a - 1).intersection(&v0)?.sum(&v0m)?.dim();
                Ok(up - dn)
            };
            let da = gr(j + l)?;
            let db = gr(j - l)?;
            if da != db {
                return Err(CoreError::InvalidFiltration(format!(
                    "bigraded dims differ at (j={j}, l={l}): {da} vs {db}"
                )));
            }
            if l == 0 || da == 0 {
                continue;
            }
            // Rank of N^l: (W_{j+l} cap V0) modulo (W_{j+l-1} cap V0 on the
            // source, and W_{j-l-1} cap V0 + V0m on the target).
            let nl = n.pow(l as usize);
            let source = w.piece_at(j + l).intersection(&v0)?;
            let img = source.image(&nl)?;
            let modsp = w
                .piece_at(j - l - 1)
                .intersection(&v0)?
                .sum(&v0m)?
                .sum(&w.piece_at(j + l - 1).intersection(&v0)?.image(&nl)?)?;
            let rank = img.sum(&modsp)?.dim() - modsp.dim();
            if rank != da {
                return Err(CoreError::InvalidFiltration(format!(
                    "N^{l} on Gr^W Gr^{{W0}}_{j} has rank {rank}, expected {da}"
                )));
            }
        }
    }
    Ok(())
}

use crate::subspace::QuotientSpace;

/// Deligne's construction: centered absolute filtration on the top
/// W0-graded quotient, primitive strings lifted with corrections, recursion
/// below.
fn deligne_glued_candidate<S: Scalar>(
    n: &Matrix<S>,
    w0: &Filtration<S>,
) -> Result<Option<Filtration<S>>> {
    let dim = w0.ambient();
    let jumps = w0.jumps();
    let m = *jumps.last().unwrap();
    let v = w0.piece_at(m - 1);

    // Recurse on V with induced data, keeping V's basis for re-embedding.
    let sub_result: Option<(Vec<Vec<S>>, Filtration<S>)> = if v.is_zero() {
        None
    } else {
        let vb = v.basis_vectors();
        let vdim = vb.len();
        let mut cols = Vec::with_capacity(vdim);
        for bv in &vb {
            cols.push(v.coordinates(&n.apply(bv))?);
        }
        let n_v = Matrix::from_fn(vdim, vdim, |r, c| cols[c][r].clone());
        let mut pieces = BTreeMap::new();
        for j in jumps.iter().filter(|&&j| j < m) {
            let inter = w0.piece_at(*j).intersection(&v)?;
            let rows: Result<Vec<Vec<S>>> = inter
                .basis_vectors()
                .iter()
                .map(|x| v.coordinates(x))
                .collect();
            pieces.insert(*j, Subspace::span(vdim, rows?));
        }
        pieces.insert(m - 1, Subspace::full(vdim));
        let w0_v = Filtration::new(Direction::Increasing, vdim, pieces)?;
        match relative_weight_filtration(&n_v, &w0_v)? {
            None => return Ok(None),
            Some(wv) => Some((vb, wv)),
        }
    };

    let w_prime_at = |l: i64| -> Result<Subspace<S>> {
        match &sub_result {
            None => Ok(Subspace::zero(dim)),
            Some((vb, wv)) => {
                let piece = wv.piece_at(l);
                let rows: Vec<Vec<S>> = piece
                    .basis_vectors()
                    .iter()
                    .map(|coords| {
                        let mut out = vec![S::zero(); dim];
                        for (c, bv) in vb.iter().enumerate() {
                            for r in 0..dim {
                                out[r] = out[r].clone() + coords[c].clone() * bv[r].clone();
                            }
                        }
                        out
                    })
                    .collect();
                Ok(Subspace::span(dim, rows))
            }
        }
    };

    // Quotient side: absolute weight filtration of the induced operator.
    let q = QuotientSpace::new(&v)?;
    let n_bar = q.induced(n)?;
    let m_bar = weight_filtration(&n_bar)?;
    let t_max = *m_bar.jumps().last().unwrap();

    // Lift primitive strings, longest first. Entries: (t, j, N^j of lifts at t).
    let mut lifted: Vec<(i64, i64, Subspace<S>)> = Vec::new();
    for t in (0..=t_max).rev() {
        let k_t = {
            let pre = m_bar
                .piece_at(-t - 3)
                .preimage(&n_bar.pow((t + 1) as usize))?;
            m_bar.piece_at(t).intersection(&pre)?
        };
        let lower = k_t.intersection(&m_bar.piece_at(t - 1))?;
        let prim_carrier = lower.complement_in(&k_t)?;
        if prim_carrier.is_zero() {
            continue;
        }
        // Corrections live in V plus already-lifted pieces of quotient level
        // <= t-1; the N^{t+1}-image must land in W'_{m-t-2} plus lifted pieces
        // of level <= -t-2.
        let mut corr = v.clone();
        let mut target = w_prime_at(m - t - 2)?;
        for (t2, j2, sp) in &lifted {
            let level = t2 - 2 * j2;
            if level <= t - 1 {
                corr = corr.sum(sp)?;
            }
            if level <= -t - 2 {
                target = target.sum(sp)?;
            }
        }
        let n_pow = n.pow((t + 1) as usize);
        let mut lift_rows = Vec::new();
        for ybar in prim_carrier.basis_vectors() {
            let y0 = q.embed(&ybar);
            let d_vec = n_pow.apply(&y0);
            let corr_images: Vec<Vec<S>> = corr
                .basis_vectors()
                .iter()
                .map(|u| n_pow.apply(u))
                .collect();
            let target_basis = target.basis_vectors();
            let cols: Vec<Vec<S>> = corr_images
                .iter()
                .cloned()
                .chain(target_basis.iter().cloned())
                .collect();
            if cols.is_empty() {
                if d_vec.iter().all(|x| x.is_zero()) {
                    lift_rows.push(y0);
                    continue;
                }
                return Ok(None);
            }
            let a = Matrix::from_fn(dim, cols.len(), |r, c| cols[c][r].clone());
            let Ok(sol) = a.solve(&d_vec) else {
                return Ok(None);
            };
            let mut y = y0;
            for (c, u) in corr.basis_vectors().iter().enumerate() {
                for r in 0..dim {
                    let sub = sol[c].clone() * u[r].clone();
                    y[r] = y[r].clone() - sub;
                }
            }
            lift_rows.push(y);
        }
        let y_t = Subspace::span(dim, lift_rows);
        for j in 0..=t {
            let img = y_t.image(&n.pow(j as usize))?;
            lifted.push((t, j, img));
        }
    }

    // W_l = W'_l + pieces with m + (t - 2j) <= l.
    let lo = m - 3 * t_max - 2;
    let hi = t_max + m;
    let mut pieces = BTreeMap::new();
    for l in lo..=hi {
        let mut acc = w_prime_at(l)?;
        for (t2, j2, sp) in &lifted {
            if m + t2 - 2 * j2 <= l {
                acc = acc.sum(sp)?;
            }
        }
        pieces.insert(l, acc);
    }
    pieces.insert(hi, Subspace::full(dim));
    match Filtration::new(Direction::Increasing, dim, pieces) {
        Ok(f) => Ok(Some(f)),
        Err(_) => Ok(None),
    }
}

/// Primitive subspaces and their Lefschetz strings for W = weight_filtration(N).
#[derive(Clone, Debug)]
pub struct LefschetzPiece<S: Scalar> {
    /// Carrier of P_l at level l (a complement representative inside W_l).
    pub primitive: Subspace<S>,
    /// Carriers of N^j(P_l) for j = 0..=l.
    pub strings: Vec<Subspace<S>>,
}

pub fn primitive_decomposition<S: Scalar>(
    w: &Filtration<S>,
    n: &Matrix<S>,
) -> Result<BTreeMap<i64, LefschetzPiece<S>>> {
    verify_weight_filtration(n, w, 0).map_err(|e| {
        CoreError::Precondition(format!("W is not the weight filtration of N: {e}"))
    })?;
    let jumps = w.jumps();
    let hi = *jumps.last().unwrap();
    let mut out = BTreeMap::new();
    for l in 0..=hi {
        if w.graded_dim(l) == 0 {
            continue;
        }
        // P_l = ker(N^{l+1}: Gr_l -> Gr_{-l-2}); on carriers this means the
        // N^{l+1}-image drops into W_{-l-3}.
        let n_pow = n.pow((l + 1) as usize);
        let pre = w.piece_at(-l - 3).preimage(&n_pow)?;
        let k_l = w.piece_at(l).intersection(&pre)?;
        let lower = k_l.intersection(&w.piece_at(l - 1))?;
        let primitive = lower.complement_in(&k_l)?;
        let mut strings = Vec::new();
        for j in 0..=l {
            strings.push(primitive.image(&n.pow(j as usize))?);
        }
        out.insert(l, LefschetzPiece { primitive, strings });
    }
    // Verify W_l = W_{l-1} + sum_j N^j(P_{l+2j}) for every level.
    let lo = *jumps.first().unwrap();
    for l in lo..=hi {
        let mut acc = w.piece_at(l - 1);
        let expect = acc.dim() + w.graded_dim(l);
        let mut j = 0i64;
        loop {
            let src = l + 2 * j;
            if src > hi {
                break;
            }
            if let Some(piece) = out.get(&src) {
                if j <= src {
                    acc = acc.sum(&piece.strings[j as usize])?;
                }
            }
            j += 1;
        }
        if acc.dim() != expect || acc != w.piece_at(l) {
            return Err(CoreError::Internal(format!(
                "Lefschetz decomposition failed to fill Gr_{l}"
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type M = Matrix<Rational>;

    pub fn jordan(sizes: &[usize]) -> M {
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

    fn e(n: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![<Rational as Scalar>::zero(); n];
        v[i] = <Rational as Scalar>::one();
        v
    }

    #[test]
    fn zero_operator() {
        let n = M::zeros(2, 2);
        let w = weight_filtration(&n).unwrap();
        assert_eq!(w.piece_at(-1).dim(), 0);
        assert_eq!(w.piece_at(0).dim(), 2);
    }

    #[test]
    fn jordan_two() {
        let n = jordan(&[2]);
        let w = weight_filtration(&n).unwrap();
        assert_eq!(w.piece_at(-2).dim(), 0);
        assert_eq!(w.piece_at(-1), Subspace::span(2, vec![e(2, 0)]));
        assert_eq!(w.piece_at(0), Subspace::span(2, vec![e(2, 0)]));
        assert!(w.piece_at(1).is_full());
    }

    #[test]
    fn jordan_three() {
        let n = jordan(&[3]);
        let w = weight_filtration(&n).unwrap();
        assert_eq!(w.piece_at(-2), Subspace::span(3, vec![e(3, 0)]));
        assert_eq!(w.piece_at(-1), Subspace::span(3, vec![e(3, 0)]));
        assert_eq!(w.piece_at(0), Subspace::span(3, vec![e(3, 0), e(3, 1)]));
        assert_eq!(w.piece_at(1), w.piece_at(0));
        assert!(w.piece_at(2).is_full());
        let dims: Vec<usize> = (-2..=2).map(|l| w.graded_dim(l)).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn scaling_invariance() {
        let n = jordan(&[3, 2]);
        let w1 = weight_filtration(&n).unwrap();
        let w2 = weight_filtration(&n.scale(&crate::scalar::rat(7, 3))).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn shifted_examples() {
        let n = jordan(&[2]);
        let w = shifted_weight_filtration(&n, 1).unwrap();
        assert_eq!(w.piece_at(-1).dim(), 0);
        assert_eq!(w.piece_at(0), Subspace::span(2, vec![e(2, 0)]));
        assert_eq!(w.piece_at(1), Subspace::span(2, vec![e(2, 0)]));
        assert!(w.piece_at(2).is_full());

        let z = M::zeros(3, 3);
        let w0 = shifted_weight_filtration(&z, 0).unwrap();
        assert!(w0.piece_at(0).is_full());
        assert_eq!(w0.piece_at(-1).dim(), 0);

        let n4 = jordan(&[4]);
        let w4 = shifted_weight_filtration(&n4, 3).unwrap();
        for (l, d) in [(0, 1usize), (1, 1), (2, 2), (3, 2), (4, 3), (5, 3), (6, 4)] {
            assert_eq!(w4.piece_at(l).dim(), d, "level {l}");
        }
        assert_eq!(w4.piece_at(-1).dim(), 0);
    }

    #[test]
    fn shift_requires_nilpotency_bound() {
        let n = jordan(&[3]);
        assert!(shifted_weight_filtration(&n, 1).is_err());
    }

    #[test]
    fn relative_with_zero_n_is_w0() {
        let n = M::zeros(3, 3);
        let mut pieces = BTreeMap::new();
        pieces.insert(0, Subspace::span(3, vec![e(3, 0)]));
        pieces.insert(2, Subspace::full(3));
        let w0 = Filtration::new(Direction::Increasing, 3, pieces).unwrap();
        let w = relative_weight_filtration(&n, &w0).unwrap().unwrap();
        assert_eq!(w, w0);
    }

    #[test]
    fn relative_single_jump_is_shifted() {
        let n = jordan(&[2]);
        let w0 = Filtration::trivial(Direction::Increasing, 2, 1);
        let w = relative_weight_filtration(&n, &w0).unwrap().unwrap();
        assert_eq!(w, shifted_weight_filtration(&n, 1).unwrap());
    }

    #[test]
    fn relative_two_commuting_jordan_blocks() {
        // H = Q^2 (x) Q^2 with N1 = J2 (x) I and N2 = I (x) J2; the relative
        // filtration of N2 over W(N1) is W(N1 + N2).
        let mut n1 = M::zeros(4, 4);
        n1[(0, 2)] = Scalar::from_i64(1);
        n1[(1, 3)] = Scalar::from_i64(1);
        let mut n2 = M::zeros(4, 4);
        n2[(0, 1)] = Scalar::from_i64(1);
        n2[(2, 3)] = Scalar::from_i64(1);
        assert!(n1.commutes_with(&n2));
        let w0 = weight_filtration(&n1).unwrap();
        let w = relative_weight_filtration(&n2, &w0).unwrap().unwrap();
        let sum = weight_filtration(&(n1.clone() + n2.clone())).unwrap();
        assert_eq!(w, sum);
        verify_relative_weight_filtration(&n2, &w0, &w).unwrap();
    }

    #[test]
    fn primitive_decomposition_examples() {
        let n = jordan(&[2]);
        let w = weight_filtration(&n).unwrap();
        let prim = primitive_decomposition(&w, &n).unwrap();
        assert_eq!(prim[&1].primitive.dim(), 1);
        assert!(prim.get(&0).map_or(true, |p| p.primitive.is_zero()));

        let z = M::zeros(2, 2);
        let wz = weight_filtration(&z).unwrap();
        let pz = primitive_decomposition(&wz, &z).unwrap();
        assert_eq!(pz[&0].primitive.dim(), 2);

        let n31 = jordan(&[3, 1]);
        let w31 = weight_filtration(&n31).unwrap();
        let p31 = primitive_decomposition(&w31, &n31).unwrap();
        assert_eq!(p31[&2].primitive.dim(), 1);
        assert_eq!(p31[&0].primitive.dim(), 1);
    }

    #[test]
    fn duality_of_graded_dims() {
        for sizes in [vec![2usize], vec![3, 1], vec![4, 2, 1], vec![3, 3]] {
            let n = jordan(&sizes);
            let w = weight_filtration(&n).unwrap();
            let hi = *w.jumps().last().unwrap();
            for l in 0..=hi {
                assert_eq!(w.graded_dim(l), w.graded_dim(-l));
            }
            assert_eq!(w.sum_of_graded_dims(), n.nrows());
        }
    }
}
