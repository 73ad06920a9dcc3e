//! Mixed Hodge structures, the canonical Deligne bigrading and the delta
//! operator making (W, e^{-i delta} F) split over R.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::bilinear::{BilinearForm, Parity};
use crate::error::{CoreError, Result};
use crate::filtration::{Direction, Filtration};
use crate::hodge::imaginary_unit;
use crate::io;
use crate::matrix::{vec_conj, Matrix};
use crate::scalar::{GaussRational, Scalar};
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct MixedHodgeStructure<S: Scalar> {
    conjugation: Matrix<S>,
    weight: Filtration<S>,
    hodge: Filtration<S>,
    polarization: Option<BilinearForm<S>>,
    nilpotents: Vec<Matrix<S>>,
}

#[derive(Clone, Debug)]
pub struct DeligneSplitting<S: Scalar> {
    pub pieces: BTreeMap<(i64, i64), Subspace<S>>,
    pub delta: Option<Matrix<S>>,
}

impl<S: Scalar> MixedHodgeStructure<S> {
    pub fn new(
        conjugation: Matrix<S>,
        weight: Filtration<S>,
        hodge: Filtration<S>,
        polarization: Option<BilinearForm<S>>,
        nilpotents: Vec<Matrix<S>>,
    ) -> Result<Self> {
        if weight.direction() != Direction::Increasing
            || hodge.direction() != Direction::Decreasing
        {
            return Err(CoreError::Structural(
                "W must be increasing and F decreasing".into(),
            ));
        }
        let n = weight.ambient();
        if hodge.ambient() != n || conjugation.nrows() != n {
            return Err(CoreError::DimensionMismatch("MHS component sizes".into()));
        }
        let cc = conjugation.clone() * conjugation.conj();
        if S::EXACT && cc != Matrix::identity(n) {
            return Err(CoreError::Structural("conjugation is not involutive".into()));
        }
        // W must be defined over R.
        for l in weight.jumps() {
            let piece = weight.piece_at(l);
            if piece.conj(&conjugation) != piece {
                return Err(CoreError::Structural(format!(
                    "weight filtration not real at level {l}"
                )));
            }
        }
        Ok(Self {
            conjugation,
            weight,
            hodge,
            polarization,
            nilpotents,
        })
    }

    pub fn dim(&self) -> usize {
        self.weight.ambient()
    }

    pub fn weight_filtration(&self) -> &Filtration<S> {
        &self.weight
    }

    pub fn hodge_filtration(&self) -> &Filtration<S> {
        &self.hodge
    }

    pub fn polarization(&self) -> Option<&BilinearForm<S>> {
        self.polarization.as_ref()
    }

    pub fn nilpotents(&self) -> &[Matrix<S>] {
        &self.nilpotents
    }

    pub fn conjugation(&self) -> &Matrix<S> {
        &self.conjugation
    }

    pub fn conj_vector(&self, v: &[S]) -> Vec<S> {
        self.conjugation.apply(&vec_conj(v))
    }

    /// Same structure with F replaced by g F.
    pub fn transform_hodge(&self, g: &Matrix<S>) -> Result<Self> {
        Ok(Self {
            conjugation: self.conjugation.clone(),
            weight: self.weight.clone(),
            hodge: self.hodge.transform(g)?,
            polarization: self.polarization.clone(),
            nilpotents: self.nilpotents.clone(),
        })
    }

    /// Canonical Deligne bigrading
    /// I^{p,q} = F^p cap W_{p+q} cap (conj F^q cap W_{p+q}
    ///            + sum_{j>=1} conj F^{q-j} cap W_{p+q-j-1}).
    pub fn deligne_bigrading(&self) -> Result<DeligneSplitting<S>> {
        let n = self.dim();
        let wj = self.weight.jumps();
        let fj = self.hodge.jumps();
        let (wlo, whi) = (*wj.first().unwrap(), *wj.last().unwrap());
        let (flo, fhi) = (*fj.first().unwrap(), *fj.last().unwrap());
        let mut pieces = BTreeMap::new();
        for l in wlo..=whi {
            let p_min = flo.min(l - fhi) - 1;
            let p_max = fhi.max(l - flo) + 1;
            for p in p_min..=p_max {
                let q = l - p;
                let f_p = self.hodge.piece_at(p);
                let w_l = self.weight.piece_at(l);
                let mut rhs = self
                    .hodge
                    .piece_at(q)
                    .conj(&self.conjugation)
                    .intersection(&w_l)?;
                let mut j = 1i64;
                loop {
                    let w_piece = self.weight.piece_at(l - j - 1);
                    if w_piece.is_zero() {
                        break;
                    }
                    let cf = self.hodge.piece_at(q - j).conj(&self.conjugation);
                    rhs = rhs.sum(&cf.intersection(&w_piece)?)?;
                    j += 1;
                }
                let piece = f_p.intersection(&w_l)?.intersection(&rhs)?;
                if !piece.is_zero() {
                    pieces.insert((p, q), piece);
                }
            }
        }
        // Verify the splitting axioms; failure means (W, F) is not an MHS.
        let mut total = Subspace::zero(n);
        let mut dims = 0usize;
        for piece in pieces.values() {
            dims += piece.dim();
            total = total.sum(piece)?;
        }
        if dims != n || total.dim() != n {
            return Err(CoreError::Structural(
                "(W,F) is not a mixed Hodge structure: bigrading does not split H".into(),
            ));
        }
        for l in wlo..=whi {
            let mut acc = Subspace::zero(n);
            for ((p, q), piece) in &pieces {
                if p + q <= l {
                    acc = acc.sum(piece)?;
                }
            }
            if acc != self.weight.piece_at(l) {
                return Err(CoreError::Structural(format!(
                    "bigrading does not reassemble W_{l}"
                )));
            }
        }
        for p in flo..=fhi {
            let mut acc = Subspace::zero(n);
            for ((r, _), piece) in &pieces {
                if *r >= p {
                    acc = acc.sum(piece)?;
                }
            }
            if acc != self.hodge.piece_at(p) {
                return Err(CoreError::Structural(format!(
                    "bigrading does not reassemble F^{p}"
                )));
            }
        }
        Ok(DeligneSplitting {
            pieces,
            delta: None,
        })
    }

    /// Whether the bigrading satisfies conj(I^{p,q}) = I^{q,p} exactly.
    pub fn is_r_split(&self, split: &DeligneSplitting<S>) -> bool {
        split.pieces.iter().all(|((p, q), piece)| {
            match split.pieces.get(&(*q, *p)) {
                Some(other) => piece.conj(&self.conjugation) == *other,
                None => false,
            }
        })
    }

    /// The unique real delta in L^{-1,-1}(W,F) such that (W, e^{-i delta} F)
    /// splits over R. Solved degree by degree from
    /// e^{2 i delta} conj(I^{p,q}) = I^{q,p}.
    pub fn compute_delta(&self) -> Result<DeligneSplitting<S>> {
        let n = self.dim();
        let split = self.deligne_bigrading()?;
        let frame = BigradingFrame::new(&split)?;
        let i_s = imaginary_unit::<S>();
        let two = S::from_i64(2);
        let half_i = i_s.clone() * S::from_i64(1) / two.clone();

        let mut delta = Matrix::<S>::zeros(n, n);
        let max_rounds = frame.max_depth() + 2;
        let mut last_depth = 1i64;
        for _round in 0..max_rounds {
            let a = delta.scale(&(two.clone() * i_s.clone())).exp_nilpotent(64)?;
            // Defect of e^{2i delta} conj on each piece.
            let mut lead_cols: Vec<Vec<S>> = Vec::with_capacity(n);
            let mut rhs_cols: Vec<Vec<S>> = Vec::with_capacity(n);
            let mut min_depth: Option<i64> = None;
            for ((p, q), piece) in &split.pieces {
                for x in piece.basis_vectors() {
                    let y = a.apply(&self.conj_vector(&x));
                    let comps = frame.components(&y)?;
                    let mut lead = vec![S::zero(); n];
                    for ((r, s), part) in &comps {
                        if (*r, *s) == (*q, *p) {
                            lead = part.clone();
                        } else {
                            let depth = (q - r) + (p - s);
                            if depth <= 0 || *r > q - 1 || *s > p - 1 {
                                return Err(CoreError::Internal(format!(
                                    "conjugation defect at illegal bidegree ({r},{s}) from ({p},{q})"
                                )));
                            }
                            min_depth = Some(min_depth.map_or(depth, |m: i64| m.min(depth)));
                        }
                    }
                    lead_cols.push(lead);
                    rhs_cols.push(y);
                }
            }
            let Some(t) = min_depth else {
                // Split: done.
                break;
            };
            if t <= last_depth {
                return Err(CoreError::Internal(format!(
                    "delta iteration stalled at depth {t}"
                )));
            }
            last_depth = t;
            // epsilon(lead(x)) = (i/2) * (depth-t defect of x).
            let mut eps_rhs: Vec<Vec<S>> = Vec::with_capacity(n);
            let mut idx = 0usize;
            for ((p, q), piece) in &split.pieces {
                for x in piece.basis_vectors() {
                    let y = &rhs_cols[idx];
                    let comps = frame.components(y)?;
                    let mut d_t = vec![S::zero(); n];
                    for ((r, s), part) in &comps {
                        if (*r, *s) != (*q, *p) && (q - r) + (p - s) == t {
                            for i in 0..n {
                                d_t[i] = d_t[i].clone() + part[i].clone();
                            }
                        }
                    }
                    let col: Vec<S> = d_t.into_iter().map(|v| v * half_i.clone()).collect();
                    eps_rhs.push(col);
                    let _ = x;
                    idx += 1;
                }
            }
            let lead_mat = Matrix::from_fn(n, n, |r, c| lead_cols[c][r].clone());
            let rhs_mat = Matrix::from_fn(n, n, |r, c| eps_rhs[c][r].clone());
            let eps = rhs_mat * lead_mat.inverse().map_err(|_| {
                CoreError::Internal("leading conjugation components not invertible".into())
            })?;
            // Real part w.r.t. the real structure: (E + C conj(E) conj(C)) / 2.
            let c = &self.conjugation;
            let eps_conj = c.clone() * eps.conj() * c.conj();
            let eps_real =
                (eps + eps_conj).scale(&(S::one() / two.clone()));
            delta = delta + eps_real;
        }

        // delta must be real and in L^{-1,-1}.
        let c = &self.conjugation;
        let delta_conj = c.clone() * delta.conj() * c.conj();
        if S::EXACT && delta_conj != delta {
            return Err(CoreError::Internal("delta is not real".into()));
        }
        for ((p, q), piece) in &split.pieces {
            for x in piece.basis_vectors() {
                let y = delta.apply(&x);
                for ((r, s), part) in frame.components(&y)? {
                    if part.iter().all(|v| v.is_zero()) {
                        continue;
                    }
                    if r > p - 1 || s > q - 1 {
                        return Err(CoreError::Internal(format!(
                            "delta leaves L^(-1,-1): ({p},{q}) -> ({r},{s})"
                        )));
                    }
                }
            }
        }
        // Final contract: (W, e^{-i delta} F) must be R-split.
        let g = delta.scale(&(-i_s)).exp_nilpotent(64)?;
        let transformed = self.transform_hodge(&g)?;
        let new_split = transformed.deligne_bigrading()?;
        if !transformed.is_r_split(&new_split) {
            return Err(CoreError::Internal(
                "computed delta does not R-split the structure".into(),
            ));
        }
        Ok(DeligneSplitting {
            pieces: split.pieces,
            delta: Some(delta),
        })
    }
}

/// Column frame for decomposing vectors over a bigrading.
struct BigradingFrame<S: Scalar> {
    keys: Vec<(i64, i64)>,
    ranges: Vec<std::ops::Range<usize>>,
    basis: Matrix<S>,
    inverse: Matrix<S>,
}

impl<S: Scalar> BigradingFrame<S> {
    fn new(split: &DeligneSplitting<S>) -> Result<Self> {
        let n = split
            .pieces
            .values()
            .map(|p| p.ambient())
            .next()
            .unwrap_or(0);
        let mut cols: Vec<Vec<S>> = Vec::new();
        let mut keys = Vec::new();
        let mut ranges = Vec::new();
        for ((p, q), piece) in &split.pieces {
            let start = cols.len();
            for b in piece.basis_vectors() {
                cols.push(b);
            }
            keys.push((*p, *q));
            ranges.push(start..cols.len());
        }
        let basis = Matrix::from_fn(n, n, |r, c| cols[c][r].clone());
        let inverse = basis.inverse()?;
        Ok(Self {
            keys,
            ranges,
            basis,
            inverse,
        })
    }

    fn max_depth(&self) -> i64 {
        let ps: Vec<i64> = self.keys.iter().map(|(p, _)| *p).collect();
        let qs: Vec<i64> = self.keys.iter().map(|(_, q)| *q).collect();
        (ps.iter().max().unwrap() - ps.iter().min().unwrap())
            + (qs.iter().max().unwrap() - qs.iter().min().unwrap())
    }

    /// Nonzero components of v in each bigraded piece, as ambient vectors.
    fn components(&self, v: &[S]) -> Result<Vec<((i64, i64), Vec<S>)>> {
        let coords = self.inverse.apply(v);
        let n = v.len();
        let mut out = Vec::new();
        for (key, range) in self.keys.iter().zip(&self.ranges) {
            let mut part = vec![S::zero(); n];
            let mut nonzero = false;
            let scale = self.basis.max_mag_log2();
            for c in range.clone() {
                if coords[c].negligible(scale) {
                    continue;
                }
                nonzero = true;
                for r in 0..n {
                    part[r] = part[r].clone() + coords[c].clone() * self.basis[(r, c)].clone();
                }
            }
            if nonzero {
                out.push((*key, part));
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// JSON file format
// ---------------------------------------------------------------------------

pub fn mhs_to_json(mhs: &MixedHodgeStructure<GaussRational>) -> Value {
    let mut w = serde_json::Map::new();
    for (l, sub) in mhs.weight.pieces() {
        w.insert(l.to_string(), io::gauss_matrix_to_value(sub.basis()));
    }
    let mut f = serde_json::Map::new();
    for (p, sub) in mhs.hodge.pieces() {
        f.insert(p.to_string(), io::gauss_matrix_to_value(sub.basis()));
    }
    let mut fields = vec![
        ("dimension", Value::from(mhs.dim() as i64)),
        ("conjugation", io::gauss_matrix_to_value(&mhs.conjugation)),
        ("w", Value::Object(w)),
        ("f", Value::Object(f)),
    ];
    if let Some(s) = &mhs.polarization {
        fields.push(("polarization", io::gauss_matrix_to_value(s.gram())));
        fields.push((
            "parity",
            Value::String(
                match s.parity() {
                    Parity::Skew => "skew",
                    Parity::Symmetric => "symmetric",
                }
                .into(),
            ),
        ));
    }
    if !mhs.nilpotents.is_empty() {
        fields.push((
            "nilpotents",
            Value::Array(
                mhs.nilpotents
                    .iter()
                    .map(io::gauss_matrix_to_value)
                    .collect(),
            ),
        ));
    }
    io::object(fields)
}

pub fn mhs_from_json(v: &Value) -> Result<MixedHodgeStructure<GaussRational>> {
    let dim = io::get_i64(v, "dimension")? as usize;
    let conjugation = match v.get("conjugation") {
        Some(c) => io::gauss_matrix_from_value(c)?,
        None => Matrix::identity(dim),
    };
    let parse_filtration = |key: &str, dir: Direction| -> Result<Filtration<GaussRational>> {
        let obj = io::get(v, key)?
            .as_object()
            .ok_or_else(|| CoreError::Parse(format!("field {key:?} must be an object")))?;
        let mut pieces = BTreeMap::new();
        for (k, basis) in obj {
            let idx: i64 = k
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad filtration index {k:?}")))?;
            let m = io::gauss_matrix_from_value(basis)?;
            pieces.insert(idx, Subspace::from_rows_matrix(dim, m));
        }
        if dir == Direction::Decreasing {
            let min_key = *pieces.keys().next().unwrap();
            if !pieces[&min_key].is_full() {
                pieces.insert(min_key - 1, Subspace::full(dim));
            }
        }
        Filtration::new(dir, dim, pieces)
    };
    let weight = parse_filtration("w", Direction::Increasing)?;
    let hodge = parse_filtration("f", Direction::Decreasing)?;
    let polarization = match v.get("polarization") {
        Some(g) => {
            let gram = io::gauss_matrix_from_value(g)?;
            let parity = match v.get("parity").and_then(|p| p.as_str()) {
                Some("symmetric") => Parity::Symmetric,
                _ => Parity::Skew,
            };
            Some(BilinearForm::new(gram, parity)?)
        }
        None => None,
    };
    let nilpotents = match v.get("nilpotents") {
        Some(Value::Array(items)) => items
            .iter()
            .map(io::gauss_matrix_from_value)
            .collect::<Result<Vec<_>>>()?,
        _ => Vec::new(),
    };
    MixedHodgeStructure::new(conjugation, weight, hodge, polarization, nilpotents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, GaussRational};

    type G = GaussRational;

    fn one() -> G {
        <G as Scalar>::one()
    }

    fn e(n: usize, i: usize) -> Vec<G> {
        let mut v = vec![<G as Scalar>::zero(); n];
        v[i] = one();
        v
    }

    /// W_0 = span(e1) inside W_2 = H, F^1 = span(e2 + i e1): the basic
    /// non-split rank-2 example.
    fn rank2_example() -> MixedHodgeStructure<G> {
        let mut wp = BTreeMap::new();
        wp.insert(0, Subspace::span(2, vec![e(2, 0)]));
        wp.insert(2, Subspace::full(2));
        let w = Filtration::new(Direction::Increasing, 2, wp).unwrap();
        let mut fp = BTreeMap::new();
        fp.insert(0, Subspace::full(2));
        fp.insert(
            1,
            Subspace::span(2, vec![vec![G::i(), one()]]),
        );
        let f = Filtration::new(Direction::Decreasing, 2, fp).unwrap();
        MixedHodgeStructure::new(Matrix::identity(2), w, f, None, vec![]).unwrap()
    }

    #[test]
    fn pure_structure_bigrading_is_hodge_decomposition() {
        // Elliptic weight-1 structure viewed as an MHS with W_1 = H.
        let tau = G::i();
        let mut wp = BTreeMap::new();
        wp.insert(1, Subspace::full(2));
        let w = Filtration::new(Direction::Increasing, 2, wp).unwrap();
        let mut fp = BTreeMap::new();
        fp.insert(0, Subspace::full(2));
        fp.insert(1, Subspace::span(2, vec![vec![one(), tau]]));
        let f = Filtration::new(Direction::Decreasing, 2, fp).unwrap();
        let mhs = MixedHodgeStructure::new(Matrix::identity(2), w, f, None, vec![]).unwrap();
        let split = mhs.deligne_bigrading().unwrap();
        assert_eq!(split.pieces.len(), 2);
        assert!(split.pieces.contains_key(&(1, 0)));
        assert!(split.pieces.contains_key(&(0, 1)));
        assert!(mhs.is_r_split(&split));
    }

    #[test]
    fn rank2_bigrading() {
        let mhs = rank2_example();
        let split = mhs.deligne_bigrading().unwrap();
        // I^{1,1} = F^1, I^{0,0} = span(e1).
        assert_eq!(
            split.pieces[&(1, 1)],
            Subspace::span(2, vec![vec![G::i(), one()]])
        );
        assert_eq!(split.pieces[&(0, 0)], Subspace::span(2, vec![e(2, 0)]));
        assert!(!mhs.is_r_split(&split));
    }

    #[test]
    fn delta_on_rank2_example() {
        let mhs = rank2_example();
        let split = mhs.compute_delta().unwrap();
        let delta = split.delta.unwrap();
        // delta maps e2 -> e1 with coefficient 1 and kills e1.
        let mut expected = Matrix::<G>::zeros(2, 2);
        expected[(0, 1)] = one();
        assert_eq!(delta, expected);
    }

    #[test]
    fn delta_zero_on_split_input() {
        let tau = G::i();
        let mut wp = BTreeMap::new();
        wp.insert(1, Subspace::full(2));
        let w = Filtration::new(Direction::Increasing, 2, wp).unwrap();
        let mut fp = BTreeMap::new();
        fp.insert(0, Subspace::full(2));
        fp.insert(1, Subspace::span(2, vec![vec![one(), tau]]));
        let f = Filtration::new(Direction::Decreasing, 2, fp).unwrap();
        let mhs = MixedHodgeStructure::new(Matrix::identity(2), w, f, None, vec![]).unwrap();
        let split = mhs.compute_delta().unwrap();
        assert!(split.delta.unwrap().is_zero());
    }

    #[test]
    fn delta_block_diagonal_on_direct_sum() {
        // Two copies of the rank-2 example in block form.
        let mut wp = BTreeMap::new();
        wp.insert(0, Subspace::span(4, vec![e(4, 0), e(4, 2)]));
        wp.insert(2, Subspace::full(4));
        let w = Filtration::new(Direction::Increasing, 4, wp).unwrap();
        let mut fp = BTreeMap::new();
        fp.insert(0, Subspace::full(4));
        fp.insert(
            1,
            Subspace::span(
                4,
                vec![
                    vec![G::i(), one(), <G as Scalar>::zero(), <G as Scalar>::zero()],
                    vec![<G as Scalar>::zero(), <G as Scalar>::zero(), G::i(), one()],
                ],
            ),
        );
        let f = Filtration::new(Direction::Decreasing, 4, fp).unwrap();
        let mhs = MixedHodgeStructure::new(Matrix::identity(4), w, f, None, vec![]).unwrap();
        let split = mhs.compute_delta().unwrap();
        let delta = split.delta.unwrap();
        for (r, c) in [(0, 3), (1, 2), (2, 1), (3, 0), (0, 2), (2, 0)] {
            assert!(delta[(r, c)].is_zero(), "off-block entry ({r},{c})");
        }
        assert_eq!(delta[(0, 1)], one());
        assert_eq!(delta[(2, 3)], one());
    }

    #[test]
    fn delta_is_zero_after_transform() {
        let mhs = rank2_example();
        let split = mhs.compute_delta().unwrap();
        let delta = split.delta.unwrap();
        let g = delta
            .scale(&-G::i())
            .exp_nilpotent(64)
            .unwrap();
        let transformed = mhs.transform_hodge(&g).unwrap();
        let split2 = transformed.compute_delta().unwrap();
        assert!(split2.delta.unwrap().is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let mhs = rank2_example();
        let v = mhs_to_json(&mhs);
        let back = mhs_from_json(&v).unwrap();
        assert_eq!(back.weight_filtration(), mhs.weight_filtration());
        assert_eq!(back.hodge_filtration(), mhs.hodge_filtration());
    }

    #[test]
    fn non_mhs_rejected() {
        // F incompatible with W: F^1 = span(e1) inside W_0 while Gr_2 needs
        // a (p,q) with p+q = 2.
        let mut wp = BTreeMap::new();
        wp.insert(0, Subspace::span(2, vec![e(2, 0)]));
        wp.insert(2, Subspace::full(2));
        let w = Filtration::new(Direction::Increasing, 2, wp).unwrap();
        let mut fp = BTreeMap::new();
        fp.insert(0, Subspace::full(2));
        fp.insert(1, Subspace::span(2, vec![e(2, 0)]));
        let f = Filtration::new(Direction::Decreasing, 2, fp).unwrap();
        let mhs = MixedHodgeStructure::new(Matrix::identity(2), w, f, None, vec![]).unwrap();
        assert!(mhs.deligne_bigrading().is_err());
        let _ = rat_int(0);
    }
}
