//! Pure polarized Hodge structures.
//!
//! A structure of weight k is stored as a decreasing filtration together with
//! an explicit real structure (an antilinear conjugation v -> C conj(v)) and a
//! polarization form whose parity matches the weight. The two Hodge-Riemann
//! relations are checked mechanically; the positivity pairing used throughout
//! the crate is
//!
//!   h(phi, psi) = (sqrt-1)^{p-q} S(phi, conj(psi)),   phi, psi in H^{p,q},
//!
//! and shipped model files carry the Gram matrix that makes the classical
//! elliptic witness 2 Im(tau) come out positive under this pairing.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::bilinear::{BilinearForm, Parity};
use crate::error::{CoreError, Result};
use crate::filtration::{Direction, Filtration};
use crate::io;
use crate::matrix::{vec_conj, vec_sub, Matrix};
use crate::scalar::{GaussRational, Scalar};
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct PureHodgeStructure<S: Scalar> {
    weight: i64,
    conjugation: Matrix<S>,
    filtration: Filtration<S>,
    polarization: BilinearForm<S>,
}

#[derive(Clone, Debug)]
pub struct HodgeDecomposition<S: Scalar> {
    weight: i64,
    pieces: BTreeMap<(i64, i64), Subspace<S>>,
}

#[derive(Clone, Debug)]
pub struct WeilOperator<S: Scalar> {
    pub matrix: Matrix<S>,
}

/// Outcome of the Hodge-Riemann checks with explicit witnesses on failure.
#[derive(Clone, Debug)]
pub struct HodgeRiemannReport<S: Scalar> {
    pub relation1: bool,
    pub relation2: bool,
    pub witnesses: Vec<HodgeRiemannWitness<S>>,
}

#[derive(Clone, Debug)]
pub struct HodgeRiemannWitness<S: Scalar> {
    pub relation: u8,
    pub piece: (i64, i64),
    pub vector: Vec<S>,
    pub value: S,
}

impl<S: Scalar> HodgeRiemannReport<S> {
    pub fn passed(&self) -> bool {
        self.relation1 && self.relation2
    }
}

pub(crate) fn i_pow<S: Scalar>(k: i64) -> S {
    let g = GaussRational::i_pow(k);
    // re/im are each 0 or +-1, so embedding through rationals is exact.
    let re = S::from_rational(&g.re, 64);
    if g.im == crate::scalar::rat_int(0) {
        re
    } else {
        let im = S::from_rational(&g.im, 64);
        re + im * imaginary_unit::<S>()
    }
}

pub(crate) fn imaginary_unit<S: Scalar>() -> S {
    S::imaginary_unit().expect("scalar field has no imaginary unit (use GaussRational or BigComplex)")
}

impl<S: Scalar> PureHodgeStructure<S> {
    pub fn new(
        weight: i64,
        conjugation: Matrix<S>,
        filtration: Filtration<S>,
        polarization: BilinearForm<S>,
    ) -> Result<Self> {
        if filtration.direction() != Direction::Decreasing {
            return Err(CoreError::Structural(
                "Hodge filtration must be decreasing".into(),
            ));
        }
        let n = filtration.ambient();
        if conjugation.nrows() != n || conjugation.ncols() != n || polarization.dim() != n {
            return Err(CoreError::DimensionMismatch(
                "conjugation/polarization size mismatch".into(),
            ));
        }
        // Involutivity C conj(C) = I.
        let cc = conjugation.clone() * conjugation.conj();
        if !exact_or_close_to_identity(&cc) {
            return Err(CoreError::Structural("conjugation is not involutive".into()));
        }
        if polarization.parity() != Parity::for_weight(weight) {
            return Err(CoreError::Structural(
                "polarization parity does not match weight".into(),
            ));
        }
        polarization.check_parity()?;
        // S defined over R: C^t G C = conj(G).
        let g = polarization.gram().clone();
        let real_check =
            conjugation.transpose() * g.clone() * conjugation.clone() - g.conj();
        if !matrix_negligible(&real_check, polarization.gram().max_mag_log2()) {
            return Err(CoreError::Structural(
                "polarization is not defined over the real structure".into(),
            ));
        }
        let hs = Self {
            weight,
            conjugation,
            filtration,
            polarization,
        };
        hs.check_opposed()?;
        Ok(hs)
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.filtration.ambient()
    }

    pub fn filtration(&self) -> &Filtration<S> {
        &self.filtration
    }

    pub fn polarization(&self) -> &BilinearForm<S> {
        &self.polarization
    }

    pub fn conjugation(&self) -> &Matrix<S> {
        &self.conjugation
    }

    pub fn conj_vector(&self, v: &[S]) -> Vec<S> {
        self.conjugation.apply(&vec_conj(v))
    }

    pub fn conj_subspace(&self, sub: &Subspace<S>) -> Subspace<S> {
        sub.conj(&self.conjugation)
    }

    /// F^p + conj(F^{k-p+1}) = H with zero intersection, for all p.
    fn check_opposed(&self) -> Result<()> {
        let k = self.weight;
        for p in self.filtration.jumps() {
            let f_p = self.filtration.piece_at(p);
            let other = self.conj_subspace(&self.filtration.piece_at(k - p + 1));
            let sum = f_p.sum(&other)?;
            let inter = f_p.intersection(&other)?;
            if !sum.is_full() || !inter.is_zero() {
                return Err(CoreError::Structural(format!(
                    "filtration not opposed to its conjugate at p = {p}"
                )));
            }
        }
        Ok(())
    }

    /// H^{p,q} = F^p  intersect  conj(F^q), p + q = k.
    pub fn decompose(&self) -> Result<HodgeDecomposition<S>> {
        let k = self.weight;
        let jumps = self.filtration.jumps();
        let p_hi = *jumps.last().expect("nonempty filtration");
        let p_lo = k - p_hi;
        let mut pieces = BTreeMap::new();
        let mut total = 0usize;
        let mut running = Subspace::zero(self.dim());
        for p in p_lo..=p_hi {
            let q = k - p;
            let f_p = self.filtration.piece_at(p);
            let conj_f_q = self.conj_subspace(&self.filtration.piece_at(q));
            let piece = f_p.intersection(&conj_f_q)?;
            total += piece.dim();
            running = running.sum(&piece)?;
            if !piece.is_zero() {
                pieces.insert((p, q), piece);
            }
        }
        if total != self.dim() || running.dim() != self.dim() {
            return Err(CoreError::Structural(
                "Hodge pieces do not sum directly to the ambient space".into(),
            ));
        }
        // H^{p,q} = conj(H^{q,p}).
        for ((p, q), piece) in &pieces {
            if let Some(other) = pieces.get(&(*q, *p)) {
                if S::EXACT && self.conj_subspace(other) != *piece {
                    return Err(CoreError::Structural(format!(
                        "H^({p},{q}) is not the conjugate of H^({q},{p})"
                    )));
                }
            } else {
                return Err(CoreError::Structural(format!(
                    "missing conjugate piece for H^({p},{q})"
                )));
            }
        }
        Ok(HodgeDecomposition { weight: k, pieces })
    }

    /// Weil operator acting as (sqrt-1)^{p-q} on H^{p,q}.
    pub fn weil_operator(&self, decomp: &HodgeDecomposition<S>) -> Result<WeilOperator<S>> {
        let n = self.dim();
        let mut cols: Vec<Vec<S>> = Vec::new();
        let mut diag: Vec<S> = Vec::new();
        for ((p, q), piece) in &decomp.pieces {
            for b in piece.basis_vectors() {
                cols.push(b);
                diag.push(i_pow::<S>(p - q));
            }
        }
        let pmat = Matrix::from_fn(n, n, |r, c| cols[c][r].clone());
        let pinv = pmat.inverse()?;
        let d = Matrix::from_fn(n, n, |r, c| {
            if r == c {
                diag[r].clone()
            } else {
                S::zero()
            }
        });
        Ok(WeilOperator {
            matrix: pmat * d * pinv,
        })
    }

    /// Positivity pairing h(v, w) = i^{p-q} S(v, conj w) on a (p,q)-piece.
    pub fn positivity_pairing(&self, p: i64, q: i64, v: &[S], w: &[S]) -> S {
        let factor = i_pow::<S>(p - q);
        factor * self.polarization.eval(v, &self.conj_vector(w))
    }

    pub fn verify_hodge_riemann(&self) -> Result<HodgeRiemannReport<S>> {
        let decomp = self.decompose()?;
        let k = self.weight;
        let scale = self.polarization.gram().max_mag_log2();
        let mut relation1 = true;
        let mut relation2 = true;
        let mut witnesses = Vec::new();

        let keys: Vec<(i64, i64)> = decomp.pieces.keys().cloned().collect();
        for &(p, q) in &keys {
            for &(p2, q2) in &keys {
                if p2 == k - p && q2 == k - q {
                    continue;
                }
                let a = &decomp.pieces[&(p, q)];
                let b = &decomp.pieces[&(p2, q2)];
                for va in a.basis_vectors() {
                    for vb in b.basis_vectors() {
                        let s = self.polarization.eval(&va, &vb);
                        if !s.negligible(scale) {
                            relation1 = false;
                            witnesses.push(HodgeRiemannWitness {
                                relation: 1,
                                piece: (p, q),
                                vector: va.clone(),
                                value: s,
                            });
                        }
                    }
                }
            }
        }

        for &(p, q) in &keys {
            let piece = &decomp.pieces[&(p, q)];
            let basis = piece.basis_vectors();
            // Index so the Gram is conjugate-linear in its first index, as the
            // definiteness routine expects: G_ij = h(v_j, v_i).
            let gram = Matrix::from_fn(basis.len(), basis.len(), |i, j| {
                self.positivity_pairing(p, q, &basis[j], &basis[i])
            });
            if let Some((coords, value)) = hermitian_non_positive_witness(&gram) {
                relation2 = false;
                let mut vec = vec![S::zero(); self.dim()];
                for (c, b) in coords.iter().zip(&basis) {
                    for (i, x) in b.iter().enumerate() {
                        vec[i] = vec[i].clone() + c.clone() * x.clone();
                    }
                }
                witnesses.push(HodgeRiemannWitness {
                    relation: 2,
                    piece: (p, q),
                    vector: vec,
                    value,
                });
            }
        }

        Ok(HodgeRiemannReport {
            relation1,
            relation2,
            witnesses,
        })
    }

    /// Hodge metric on the quotient bundle F^p / F^q (p < q):
    /// h(v, w) = S(pi_{p,q}(C_phi v), conj w) with pi the S-orthogonal
    /// projection killing F^q.
    pub fn hodge_inner_product(&self, p: i64, q: i64, v: &[S], w: &[S]) -> Result<S> {
        if p >= q {
            return Err(CoreError::Precondition("hodge_inner_product needs p < q".into()));
        }
        let decomp = self.decompose()?;
        let weil = self.weil_operator(&decomp)?;
        let cv = weil.matrix.apply(v);
        let pcv = self.project_killing(&cv, q)?;
        Ok(self.polarization.eval(&pcv, &self.conj_vector(w)))
    }

    /// S-orthogonal projection of x modulo F^q: returns x - u with u in F^q
    /// and S(x - u, conj w') = 0 for all w' in F^q.
    pub fn project_killing(&self, x: &[S], q: i64) -> Result<Vec<S>> {
        let fq = self.filtration.piece_at(q);
        if fq.is_zero() {
            return Ok(x.to_vec());
        }
        let basis = fq.basis_vectors();
        let m = basis.len();
        let a = Matrix::from_fn(m, m, |j, k| {
            self.polarization
                .eval(&basis[k], &self.conj_vector(&basis[j]))
        });
        let b: Vec<S> = (0..m)
            .map(|j| self.polarization.eval(x, &self.conj_vector(&basis[j])))
            .collect();
        let coeffs = a
            .solve(&b)
            .map_err(|_| CoreError::Degenerate("projection system singular (S degenerate on F^q)".into()))?;
        let mut u = vec![S::zero(); x.len()];
        for (c, bv) in coeffs.iter().zip(&basis) {
            for (i, s) in bv.iter().enumerate() {
                u[i] = u[i].clone() + c.clone() * s.clone();
            }
        }
        Ok(vec_sub(x, &u))
    }
}

impl<S: Scalar> HodgeDecomposition<S> {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn pieces(&self) -> &BTreeMap<(i64, i64), Subspace<S>> {
        &self.pieces
    }

    pub fn piece(&self, p: i64, q: i64) -> Option<&Subspace<S>> {
        self.pieces.get(&(p, q))
    }

    /// Rebuild the decreasing Hodge filtration F^p = sum_{r >= p} H^{r, k-r}.
    pub fn rebuild_filtration(&self) -> Result<Filtration<S>> {
        let ambient = self
            .pieces
            .values()
            .next()
            .map(|s| s.ambient())
            .unwrap_or(0);
        let mut map = BTreeMap::new();
        let ps: Vec<i64> = self.pieces.keys().map(|(p, _)| *p).collect();
        let p_lo = *ps.iter().min().unwrap();
        let p_hi = *ps.iter().max().unwrap();
        for p in p_lo..=p_hi {
            let mut acc = Subspace::zero(ambient);
            for ((r, _), piece) in &self.pieces {
                if *r >= p {
                    acc = acc.sum(piece)?;
                }
            }
            map.insert(p, acc);
        }
        Filtration::new(Direction::Decreasing, ambient, map)
    }
}

fn exact_or_close_to_identity<S: Scalar>(m: &Matrix<S>) -> bool {
    let id = Matrix::identity(m.nrows());
    let diff = m.clone() - id;
    matrix_negligible(&diff, Some(1.0))
}

fn matrix_negligible<S: Scalar>(m: &Matrix<S>, scale: Option<f64>) -> bool {
    if S::EXACT {
        m.is_zero()
    } else {
        m.rows().all(|r| r.iter().all(|x| x.negligible(scale)))
    }
}

/// LDL-style positive-definiteness test for a Hermitian Gram matrix
/// (conjugate-linear in the first index). Returns a non-positive witness
/// (coordinates in the Gram's basis and the pairing value) or None when the
/// matrix is positive definite.
pub fn hermitian_non_positive_witness<S: Scalar>(g: &Matrix<S>) -> Option<(Vec<S>, S)> {
    let n = g.nrows();
    if n == 0 {
        return None;
    }
    let scale = g.max_mag_log2();
    let mut g = g.clone();
    // vecs[i]: coordinates of the i-th G-orthogonalized vector.
    let mut vecs: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut v = vec![S::zero(); n];
            v[i] = S::one();
            v
        })
        .collect();
    for i in 0..n {
        // Symmetric pivoting: bring a usable diagonal entry to position i.
        if g[(i, i)].negligible(scale) {
            if let Some(j) = (i + 1..n).find(|&j| !g[(j, j)].negligible(scale)) {
                swap_sym(&mut g, &mut vecs, i, j);
            } else {
                // All remaining diagonals vanish.
                if let Some((a, b)) = (i..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .find(|&(a, b)| !g[(a, b)].negligible(scale))
                {
                    // h(v_a + mu v_b) = 2 Re(mu h_ab) with mu = -conj(h_ab).
                    let mu = -g[(a, b)].conjugate();
                    let w: Vec<S> = vecs[a]
                        .iter()
                        .zip(&vecs[b])
                        .map(|(x, y)| x.clone() + mu.clone() * y.clone())
                        .collect();
                    let minus = g[(a, b)].clone() * g[(a, b)].conjugate();
                    let value = -(minus.clone() + minus);
                    return Some((w, value));
                }
                // Remaining block is zero: the i-th vector pairs to zero.
                return Some((vecs[i].clone(), S::zero()));
            }
        }
        let d = g[(i, i)].clone();
        if !d.re_positive() {
            return Some((vecs[i].clone(), d));
        }
        let dinv = d.invert().ok()?;
        // Eliminate row/column i from the trailing block and update vectors.
        for j in i + 1..n {
            // mu = h(v_i, v_j) / d: subtract mu * v_i from v_j so that the
            // new v_j is h-orthogonal to v_i.
            let mu = g[(i, j)].clone() * dinv.clone();
            if Scalar::is_zero(&mu) {
                continue;
            }
            for c in 0..n {
                let sub = mu.clone() * vecs[i][c].clone();
                vecs[j][c] = vecs[j][c].clone() - sub;
            }
            for c in i + 1..n {
                let sub = mu.conjugate() * g[(i, c)].clone();
                g[(j, c)] = g[(j, c)].clone() - sub;
            }
        }
    }
    None
}

fn swap_sym<S: Scalar>(g: &mut Matrix<S>, vecs: &mut [Vec<S>], i: usize, j: usize) {
    vecs.swap(i, j);
    let n = g.nrows();
    for c in 0..n {
        let a = g[(i, c)].clone();
        let b = g[(j, c)].clone();
        g[(i, c)] = b;
        g[(j, c)] = a;
    }
    for r in 0..n {
        let a = g[(r, i)].clone();
        let b = g[(r, j)].clone();
        g[(r, i)] = b;
        g[(r, j)] = a;
    }
}

// ---------------------------------------------------------------------------
// JSON file format
// ---------------------------------------------------------------------------

pub fn hodge_structure_to_json(hs: &PureHodgeStructure<GaussRational>) -> Value {
    let mut f = serde_json::Map::new();
    for (p, sub) in hs.filtration.pieces() {
        f.insert(p.to_string(), io::gauss_matrix_to_value(sub.basis()));
    }
    io::object(vec![
        ("weight", Value::from(hs.weight)),
        ("dimension", Value::from(hs.dim() as i64)),
        ("conjugation", io::gauss_matrix_to_value(&hs.conjugation)),
        ("f", Value::Object(f)),
        (
            "polarization",
            io::gauss_matrix_to_value(hs.polarization.gram()),
        ),
    ])
}

pub fn hodge_structure_from_json(v: &Value) -> Result<PureHodgeStructure<GaussRational>> {
    let weight = io::get_i64(v, "weight")?;
    let dim = io::get_i64(v, "dimension")? as usize;
    let conjugation = match v.get("conjugation") {
        Some(c) => io::gauss_matrix_from_value(c)?,
        None => Matrix::identity(dim),
    };
    let gram = io::gauss_matrix_from_value(io::get(v, "polarization")?)?;
    let parity = Parity::for_weight(weight);
    let polarization = BilinearForm::new(gram, parity)?;
    let f_obj = io::get(v, "f")?
        .as_object()
        .ok_or_else(|| CoreError::Parse("field \"f\" must be an object".into()))?;
    let mut pieces = BTreeMap::new();
    for (key, basis) in f_obj {
        let p: i64 = key
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad filtration index {key:?}")))?;
        let m = io::gauss_matrix_from_value(basis)?;
        pieces.insert(p, Subspace::from_rows_matrix(dim, m));
    }
    // Ensure the filtration exhausts H at the bottom index.
    let min_key = *pieces.keys().next().ok_or_else(|| {
        CoreError::Parse("filtration must have at least one piece".into())
    })?;
    if !pieces[&min_key].is_full() {
        pieces.insert(min_key - 1, Subspace::full(dim));
    }
    let filtration = Filtration::new(Direction::Decreasing, dim, pieces)?;
    PureHodgeStructure::new(weight, conjugation, filtration, polarization)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, rat_int, GaussRational};

    type G = GaussRational;

    pub(crate) fn elliptic(tau: G) -> PureHodgeStructure<G> {
        let one = <G as Scalar>::one();
        let omega = vec![one.clone(), tau];
        let mut pieces = BTreeMap::new();
        pieces.insert(0, Subspace::full(2));
        pieces.insert(1, Subspace::span(2, vec![omega]));
        let f = Filtration::new(Direction::Decreasing, 2, pieces).unwrap();
        // Geometric cup-product convention in the (1, tau) frame.
        let gram = Matrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let s = BilinearForm::new(gram, Parity::Skew).unwrap();
        PureHodgeStructure::new(1, Matrix::identity(2), f, s).unwrap()
    }

    #[test]
    fn elliptic_decomposition_and_positivity() {
        let hs = elliptic(G::i());
        let d = hs.decompose().unwrap();
        assert_eq!(d.pieces().len(), 2);
        let h10 = d.piece(1, 0).unwrap();
        assert!(h10.contains_vector(&[<G as Scalar>::one(), G::i()]));
        let report = hs.verify_hodge_riemann().unwrap();
        assert!(report.relation1 && report.relation2, "{:?}", report.witnesses);
        // The witness value is 2 Im(tau) = 2.
        let omega = vec![<G as Scalar>::one(), G::i()];
        let h = hs.positivity_pairing(1, 0, &omega, &omega);
        assert_eq!(h, G::from_re(rat_int(2)));
    }

    #[test]
    fn elliptic_negative_imaginary_part_fails_with_witness() {
        let hs = elliptic(-G::i());
        let report = hs.verify_hodge_riemann().unwrap();
        assert!(report.relation1);
        assert!(!report.relation2);
        let w = &report.witnesses[0];
        assert_eq!(w.relation, 2);
        assert!(!w.value.re_positive());
    }

    #[test]
    fn weight_zero_trivial() {
        let f = Filtration::trivial(Direction::Decreasing, 2, 0);
        let gram = Matrix::identity(2);
        let s = BilinearForm::new(gram, Parity::Symmetric).unwrap();
        let hs = PureHodgeStructure::<G>::new(0, Matrix::identity(2), f, s).unwrap();
        let d = hs.decompose().unwrap();
        assert_eq!(d.piece(0, 0).unwrap().dim(), 2);
    }

    #[test]
    fn weight_two_block_model_passes() {
        // H = C^3 with H^{2,0} = span(e1 + i e2), H^{1,1} = span(e3) and
        // S = diag(-1,-1,1): i^2 S(v, conj v) = 2 on the (2,0) line.
        let one = <G as Scalar>::one();
        let i = G::i();
        let v20 = vec![one.clone(), i.clone(), <G as Scalar>::zero()];
        let v11 = vec![<G as Scalar>::zero(), <G as Scalar>::zero(), one.clone()];
        let mut pieces = BTreeMap::new();
        pieces.insert(2, Subspace::span(3, vec![v20.clone()]));
        pieces.insert(1, Subspace::span(3, vec![v20.clone(), v11.clone()]));
        pieces.insert(0, Subspace::full(3));
        let f = Filtration::new(Direction::Decreasing, 3, pieces).unwrap();
        let gram = Matrix::from_i64(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]]);
        let s = BilinearForm::new(gram, Parity::Symmetric).unwrap();
        let hs = PureHodgeStructure::new(2, Matrix::identity(3), f, s).unwrap();
        let report = hs.verify_hodge_riemann().unwrap();
        assert!(report.passed(), "{:?}", report.witnesses);
        let weil = hs.weil_operator(&hs.decompose().unwrap()).unwrap();
        // C^2 = (-1)^k = identity for k = 2.
        assert_eq!(weil.matrix.pow(2), Matrix::identity(3));
    }

    #[test]
    fn weil_squares_to_minus_one_weight_one() {
        let hs = elliptic(G::i());
        let weil = hs.weil_operator(&hs.decompose().unwrap()).unwrap();
        let sq = weil.matrix.pow(2);
        assert_eq!(sq, Matrix::identity(2).scale(&-<G as Scalar>::one()));
    }

    #[test]
    fn inner_product_examples() {
        let tau = gauss(1, 3, 2, 1); // 1/3 + 2i
        let hs = elliptic(tau.clone());
        let omega = vec![<G as Scalar>::one(), tau];
        // q = p + 1 on the (1,0) line: norm = 2 Im tau = 4.
        let norm = hs.hodge_inner_product(1, 2, &omega, &omega).unwrap();
        assert_eq!(norm, G::from_re(rat_int(4)));
        // Hermitian symmetry on a second vector.
        let v = vec![<G as Scalar>::one(), <G as Scalar>::zero()];
        let a = hs.hodge_inner_product(0, 1, &v, &omega).unwrap();
        let b = hs.hodge_inner_product(0, 1, &omega, &v).unwrap();
        assert_eq!(a, b.conjugate());
        // Vectors in F^q project to zero: pairing with anything vanishes.
        // p = 0, q = 1, v in F^1.
        let omega2 = vec![<G as Scalar>::one(), gauss(1, 3, 2, 1)];
        let z = hs.hodge_inner_product(0, 1, &omega2, &omega2);
        // pi_{0,1} kills F^1 so the pairing vanishes identically.
        assert_eq!(z.unwrap(), <G as Scalar>::zero());
    }

    #[test]
    fn decompose_rebuild_roundtrip() {
        let hs = elliptic(G::i());
        let d = hs.decompose().unwrap();
        let f = d.rebuild_filtration().unwrap();
        assert_eq!(&f, hs.filtration());
    }

    #[test]
    fn json_roundtrip() {
        let hs = elliptic(G::i());
        let v = hodge_structure_to_json(&hs);
        let back = hodge_structure_from_json(&v).unwrap();
        assert_eq!(back.filtration(), hs.filtration());
        assert_eq!(back.polarization().gram(), hs.polarization().gram());
    }

    #[test]
    fn hermitian_witness_detects_indefinite() {
        // diag(1, -3) with a mixing term.
        let g = Matrix::<G>::from_i64(&[&[1, 2], &[2, -3]]);
        let (w, val) = hermitian_non_positive_witness(&g).unwrap();
        assert!(!val.re_positive());
        // Verify the witness value: w^* G w = val.
        let mut acc = <G as Scalar>::zero();
        for i in 0..2 {
            for j in 0..2 {
                acc = acc + w[i].conjugate() * g[(i, j)].clone() * w[j].clone();
            }
        }
        assert_eq!(acc, val);
        // Positive definite passes.
        let pd = Matrix::<G>::from_i64(&[&[2, 1], &[1, 2]]);
        assert!(hermitian_non_positive_witness(&pd).is_none());
    }
}
