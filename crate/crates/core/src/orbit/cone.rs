//! Nilpotent cones with limit filtration, orbit points and orbit frames.

use serde_json::Value;

use crate::bilinear::{BilinearForm, Parity};
use crate::convert;
use crate::error::{CoreError, Result};
use crate::filtration::{Direction, Filtration};
use crate::hodge::PureHodgeStructure;
use crate::io;
use crate::matrix::Matrix;
use crate::numeric::BigComplex;
use crate::scalar::{GaussRational, Scalar};
use crate::subspace::Subspace;

/// Commuting nilpotent operators together with the limit Hodge filtration,
/// weight and polarization.
#[derive(Clone, Debug)]
pub struct NilpotentCone {
    pub weight: i64,
    nilpotents: Vec<Matrix<GaussRational>>,
    limit: Filtration<GaussRational>,
    polarization: BilinearForm<GaussRational>,
    conjugation: Matrix<GaussRational>,
}

impl NilpotentCone {
    pub fn new(
        weight: i64,
        nilpotents: Vec<Matrix<GaussRational>>,
        limit: Filtration<GaussRational>,
        polarization: BilinearForm<GaussRational>,
        conjugation: Matrix<GaussRational>,
    ) -> Result<Self> {
        if nilpotents.is_empty() {
            return Err(CoreError::Precondition("cone needs at least one nilpotent".into()));
        }
        let dim = limit.ambient();
        for (i, n) in nilpotents.iter().enumerate() {
            if n.nrows() != dim {
                return Err(CoreError::DimensionMismatch("nilpotent size".into()));
            }
            if n.nilpotency_index().is_none() {
                return Err(CoreError::NotNilpotent);
            }
            for m in &nilpotents[i + 1..] {
                if !n.commutes_with(m) {
                    return Err(CoreError::NonCommuting);
                }
            }
            // Horizontality: N F^p inside F^{p-1}.
            for p in limit.jumps() {
                let img = limit.piece_at(p).image(n)?;
                if !limit.piece_at(p - 1).contains(&img) {
                    return Err(CoreError::Structural(format!(
                        "nilpotent {i} violates horizontality at p = {p}"
                    )));
                }
            }
            // Infinitesimal isotropy.
            if !polarization.is_infinitesimally_orthogonal(n) {
                return Err(CoreError::Structural(format!(
                    "nilpotent {i} is not in the Lie algebra of the S-orthogonal group"
                )));
            }
        }
        Ok(Self {
            weight,
            nilpotents,
            limit,
            polarization,
            conjugation,
        })
    }

    pub fn size(&self) -> usize {
        self.nilpotents.len()
    }

    pub fn dim(&self) -> usize {
        self.limit.ambient()
    }

    pub fn nilpotents(&self) -> &[Matrix<GaussRational>] {
        &self.nilpotents
    }

    pub fn limit_filtration(&self) -> &Filtration<GaussRational> {
        &self.limit
    }

    pub fn polarization(&self) -> &BilinearForm<GaussRational> {
        &self.polarization
    }

    pub fn conjugation(&self) -> &Matrix<GaussRational> {
        &self.conjugation
    }

    /// sum_j z_j N_j as a float matrix.
    pub fn combination(&self, z: &[BigComplex]) -> Result<Matrix<BigComplex>> {
        if z.len() != self.nilpotents.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "cone has {} nilpotents, got {} coordinates",
                self.nilpotents.len(),
                z.len()
            )));
        }
        let prec = z.iter().map(|c| c.prec()).max().unwrap_or(64);
        let dim = self.dim();
        let mut acc = Matrix::<BigComplex>::zeros(dim, dim);
        for (zj, n) in z.iter().zip(&self.nilpotents) {
            let nf = convert::matrix_to_complex(n, prec);
            acc = acc + nf.scale(zj);
        }
        Ok(acc)
    }

    /// theta(z) = exp(sum z_j N_j) . F as a float filtration.
    pub fn orbit_point(&self, z: &[BigComplex]) -> Result<Filtration<BigComplex>> {
        let prec = z.iter().map(|c| c.prec()).max().unwrap_or(64);
        let g = self.combination(z)?.exp_nilpotent(prec)?;
        let f = convert::filtration_to_complex(&self.limit, prec);
        f.transform(&g)
    }

    /// The polarized Hodge structure at theta(z); positivity is not asserted
    /// here (callers check Hodge-Riemann when they need it).
    pub fn hodge_structure_at(&self, z: &[BigComplex]) -> Result<PureHodgeStructure<BigComplex>> {
        let prec = z.iter().map(|c| c.prec()).max().unwrap_or(64);
        PureHodgeStructure::new(
            self.weight,
            convert::matrix_to_complex(&self.conjugation, prec),
            self.orbit_point(z)?,
            convert::form_to_complex(&self.polarization, prec),
        )
    }
}

/// gamma(z) = exp(i delta) exp(sum z_j N_j) exp(V); V = 0 for pure orbits.
#[derive(Clone, Debug)]
pub struct OrbitFrame {
    /// Real delta of the limit mixed Hodge structure (often zero).
    pub delta: Matrix<GaussRational>,
}

impl OrbitFrame {
    pub fn pure() -> Self {
        Self {
            delta: Matrix::zeros(0, 0),
        }
    }

    pub fn with_delta(delta: Matrix<GaussRational>) -> Self {
        Self { delta }
    }

    /// Frame matrix at z for the given cone.
    pub fn matrix(&self, cone: &NilpotentCone, z: &[BigComplex]) -> Result<Matrix<BigComplex>> {
        let prec = z.iter().map(|c| c.prec()).max().unwrap_or(64);
        let dim = cone.dim();
        let nil_part = cone.combination(z)?.exp_nilpotent(prec)?;
        if self.delta.nrows() == 0 || self.delta.is_zero() {
            return Ok(nil_part);
        }
        if self.delta.nrows() != dim {
            return Err(CoreError::DimensionMismatch("delta size".into()));
        }
        let i = BigComplex::i(prec);
        let delta_f = convert::matrix_to_complex(&self.delta, prec).scale(&i);
        let exp_delta = delta_f.exp_nilpotent(prec)?;
        Ok(exp_delta * nil_part)
    }
}

// ---------------------------------------------------------------------------
// JSON cone files
// ---------------------------------------------------------------------------

pub fn cone_to_json(cone: &NilpotentCone) -> Value {
    let mut f = serde_json::Map::new();
    for (p, sub) in cone.limit.pieces() {
        f.insert(p.to_string(), io::gauss_matrix_to_value(sub.basis()));
    }
    io::object(vec![
        ("weight", Value::from(cone.weight)),
        ("dimension", Value::from(cone.dim() as i64)),
        (
            "nilpotents",
            Value::Array(cone.nilpotents.iter().map(io::gauss_matrix_to_value).collect()),
        ),
        ("f", Value::Object(f)),
        ("polarization", io::gauss_matrix_to_value(cone.polarization.gram())),
        ("conjugation", io::gauss_matrix_to_value(&cone.conjugation)),
    ])
}

pub fn cone_from_json(v: &Value) -> Result<NilpotentCone> {
    let weight = io::get_i64(v, "weight")?;
    let dim = io::get_i64(v, "dimension")? as usize;
    let nils = io::get(v, "nilpotents")?
        .as_array()
        .ok_or_else(|| CoreError::Parse("nilpotents must be an array".into()))?
        .iter()
        .map(io::gauss_matrix_from_value)
        .collect::<Result<Vec<_>>>()?;
    let f_obj = io::get(v, "f")?
        .as_object()
        .ok_or_else(|| CoreError::Parse("field \"f\" must be an object".into()))?;
    let mut pieces = std::collections::BTreeMap::new();
    for (key, basis) in f_obj {
        let p: i64 = key
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad filtration index {key:?}")))?;
        pieces.insert(p, Subspace::from_rows_matrix(dim, io::gauss_matrix_from_value(basis)?));
    }
    let min_key = *pieces.keys().next().ok_or_else(|| CoreError::Parse("empty f".into()))?;
    if !pieces[&min_key].is_full() {
        pieces.insert(min_key - 1, Subspace::full(dim));
    }
    let limit = Filtration::new(Direction::Decreasing, dim, pieces)?;
    let gram = io::gauss_matrix_from_value(io::get(v, "polarization")?)?;
    let polarization = BilinearForm::new(gram, Parity::for_weight(weight))?;
    let conjugation = match v.get("conjugation") {
        Some(c) => io::gauss_matrix_from_value(c)?,
        None => Matrix::identity(dim),
    };
    NilpotentCone::new(weight, nils, limit, polarization, conjugation)
}

/// The weight-1 elliptic model: N e2 = e1, F^1 = span(e2), S(e2, e1) = 1.
pub fn elliptic_cone() -> NilpotentCone {
    let mut n = Matrix::<GaussRational>::zeros(2, 2);
    n[(0, 1)] = Scalar::from_i64(1);
    let mut pieces = std::collections::BTreeMap::new();
    pieces.insert(0, Subspace::full(2));
    pieces.insert(
        1,
        Subspace::span(2, vec![vec![Scalar::from_i64(0), Scalar::from_i64(1)]]),
    );
    let f = Filtration::new(Direction::Decreasing, 2, pieces).unwrap();
    let gram = Matrix::from_i64(&[&[0, -1], &[1, 0]]);
    let s = BilinearForm::new(gram, Parity::Skew).unwrap();
    NilpotentCone::new(1, vec![n], f, s, Matrix::identity(2)).unwrap()
}

/// Tensor square of the elliptic model: two commuting nilpotents on C^4,
/// weight 2, the product of two degenerating elliptic factors.
pub fn product_elliptic_cone() -> NilpotentCone {
    // Basis e_{ab} = e_a (x) e_b ordered (11, 12, 21, 22) with indices 1 = bottom.
    // N1 acts on the first factor: e_{2b} -> e_{1b}; N2 on the second.
    let mut n1 = Matrix::<GaussRational>::zeros(4, 4);
    n1[(0, 2)] = Scalar::from_i64(1);
    n1[(1, 3)] = Scalar::from_i64(1);
    let mut n2 = Matrix::<GaussRational>::zeros(4, 4);
    n2[(0, 1)] = Scalar::from_i64(1);
    n2[(2, 3)] = Scalar::from_i64(1);
    // Limit filtration F^2 = span(e22), F^1 = span(e22, e21, e12), F^0 = all.
    let e = |i: usize| {
        let mut v = vec![<GaussRational as Scalar>::zero(); 4];
        v[i] = Scalar::from_i64(1);
        v
    };
    let mut pieces = std::collections::BTreeMap::new();
    pieces.insert(0, Subspace::full(4));
    pieces.insert(1, Subspace::span(4, vec![e(3), e(2), e(1)]));
    pieces.insert(2, Subspace::span(4, vec![e(3)]));
    let f = Filtration::new(Direction::Decreasing, 4, pieces).unwrap();
    // S = S1 (x) S2 with S(e2, e1) = 1 on each factor: symmetric for weight 2.
    // S(e_{ab}, e_{cd}) = S1(a,c) S2(b,d).
    let s1 = [[0i64, -1], [1, 0]];
    let mut gram = Matrix::<GaussRational>::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let v = s1[a][c] * s1[b][d];
                    if v != 0 {
                        gram[(2 * a + b, 2 * c + d)] = Scalar::from_i64(v);
                    }
                }
            }
        }
    }
    let s = BilinearForm::new(gram, Parity::Symmetric).unwrap();
    NilpotentCone::new(2, vec![n1, n2], f, s, Matrix::identity(4)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::BigReal;

    #[test]
    fn elliptic_orbit_point_is_elliptic_structure() {
        let cone = elliptic_cone();
        let z = vec![BigComplex::from_f64(0.3, 2.0, 128)];
        let f = cone.orbit_point(&z).unwrap();
        // F^1 = span(e2 + z e1).
        let f1 = f.piece_at(1);
        assert_eq!(f1.dim(), 1);
        let v = vec![BigComplex::from_f64(0.3, 2.0, 128), BigComplex::one(128)];
        assert!(f1.contains_vector(&v));
        // At z = 0 the filtration is unchanged.
        let f0 = cone.orbit_point(&[BigComplex::zero(128)]).unwrap();
        assert!(f0
            .piece_at(1)
            .contains_vector(&[BigComplex::zero(128), BigComplex::one(128)]));
    }

    #[test]
    fn elliptic_positivity_sign() {
        let cone = elliptic_cone();
        let up = cone
            .hodge_structure_at(&[BigComplex::from_f64(0.0, 3.0, 128)])
            .unwrap();
        assert!(up.verify_hodge_riemann().unwrap().passed());
        let down = cone
            .hodge_structure_at(&[BigComplex::from_f64(0.0, -1.0, 128)])
            .unwrap();
        assert!(!down.verify_hodge_riemann().unwrap().relation2);
    }

    #[test]
    fn product_cone_valid_and_positive_high_up() {
        let cone = product_elliptic_cone();
        let z = vec![
            BigComplex::from_f64(0.0, 5.0, 128),
            BigComplex::from_f64(0.1, 7.0, 128),
        ];
        let hs = cone.hodge_structure_at(&z).unwrap();
        let rep = hs.verify_hodge_riemann().unwrap();
        assert!(rep.passed(), "{:?}", rep.witnesses.len());
    }

    #[test]
    fn json_roundtrip() {
        let cone = elliptic_cone();
        let v = cone_to_json(&cone);
        let back = cone_from_json(&v).unwrap();
        assert_eq!(back.weight, 1);
        assert_eq!(back.nilpotents()[0], cone.nilpotents()[0]);
        let _ = BigReal::zero(64);
    }
}
