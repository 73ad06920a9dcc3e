//! Hodge norms along nilpotent orbits and growth-exponent fits against the
//! norm-growth theorem.

use crate::convert;
use crate::error::{CoreError, Result};
use crate::matrix::Matrix;
use crate::mixed::weight::weight_filtration;
use crate::numeric::{BigComplex, BigReal};
use crate::scalar::{GaussRational, Scalar};
use crate::subspace::QuotientSpace;

use super::cone::NilpotentCone;

/// Hodge norm squared of the flat vector v at the orbit point theta(z):
/// ||v||^2 = S(C_phi v, conj v) with C_phi the Weil operator at theta(z).
pub fn hodge_norm_sq(cone: &NilpotentCone, v: &[BigComplex], z: &[BigComplex]) -> Result<BigReal> {
    let prec = z.iter().map(|c| c.prec()).max().unwrap_or(64);
    let hs = cone.hodge_structure_at(z)?;
    let decomp = hs.decompose()?;
    let weil = hs.weil_operator(&decomp)?;
    let cv = weil.matrix.apply(v);
    let value = hs.polarization().eval(&cv, &hs.conj_vector(v));
    let scale = value.mag_log2();
    if !value.im_negligible(scale.map(|s| s + 8.0)) {
        return Err(CoreError::Degenerate(format!(
            "Hodge norm not real: {value}"
        )));
    }
    if !value.re.is_positive() {
        return Err(CoreError::Degenerate(
            "positivity fails at this orbit point".into(),
        ));
    }
    let _ = prec;
    Ok(value.re)
}

pub fn hodge_norm(cone: &NilpotentCone, v: &[BigComplex], z: &[BigComplex]) -> Result<BigReal> {
    Ok(hodge_norm_sq(cone, v, z)?.sqrt())
}

/// Sampling protocol for growth fits: geometric grids in the ray parameter.
#[derive(Clone, Debug)]
pub struct RaySpec {
    /// Exponent vectors b (one per ray): y_j = t^{b_j} along the ray.
    pub rays: Vec<Vec<f64>>,
    /// log10 range of the ray parameter t.
    pub decade_start: f64,
    pub decade_end: f64,
    pub samples_per_decade: usize,
    /// Fit uses only the top `fit_decades` decades.
    pub fit_decades: f64,
}

impl RaySpec {
    /// Default protocol: 20 samples per decade over [10^2, 10^6], fitting the
    /// top three decades; rays chosen to make the exponent regression
    /// full-rank for `a` variables.
    pub fn standard(a: usize) -> Self {
        let rays = match a {
            1 => vec![vec![1.0]],
            _ => {
                // b-vectors decreasing and pairwise independent.
                let mut rays = Vec::new();
                for k in 0..a {
                    let b: Vec<f64> = (0..a).map(|j| (a - j) as f64 + k as f64 * 0.5).collect();
                    rays.push(b);
                }
                rays
            }
        };
        Self {
            rays,
            decade_start: 2.0,
            decade_end: 6.0,
            samples_per_decade: 20,
            fit_decades: 3.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GrowthFit {
    /// Minimal levels l_j with v in W^{(j)}_{l_j} (0-centered convention).
    pub levels: Vec<i64>,
    /// Predicted exponents of ||v|| in the y_j coordinates.
    pub predicted_y: Vec<f64>,
    /// Least-squares exponents in the y_j coordinates.
    pub fitted_y: Vec<f64>,
    /// Predicted exponents l_j/2 in the t coordinates of the full index set.
    pub predicted_t: Vec<f64>,
    /// Fitted t-exponents (partial sums of fitted_y).
    pub fitted_t: Vec<f64>,
    pub samples: usize,
}

/// Fit the Hodge-norm growth of the exact flat vector v along rays
/// y(t) = (t^{b_1}, ..., t^{b_a}) and compare with the weight-filtration
/// prediction. `levels` overrides the minimal-membership levels, in which
/// case the graded part of v must be nonzero at those levels.
pub fn norm_growth_exponents(
    cone: &NilpotentCone,
    v: &[GaussRational],
    levels: Option<Vec<i64>>,
    spec: &RaySpec,
    prec: u32,
) -> Result<GrowthFit> {
    let a = cone.size();
    let dim = cone.dim();
    if v.len() != dim {
        return Err(CoreError::DimensionMismatch("vector length".into()));
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(CoreError::Precondition("zero vector has no growth".into()));
    }
    // Partial-sum weight filtrations W^{(j)} = W(N_1 + ... + N_j), centered.
    let mut partial = Matrix::<GaussRational>::zeros(dim, dim);
    let mut filtrations = Vec::with_capacity(a);
    for n in cone.nilpotents() {
        partial = partial + n.clone();
        filtrations.push(weight_filtration(&partial)?);
    }
    // Minimal membership levels, with a successive graded-nonvanishing check.
    let mut min_levels = Vec::with_capacity(a);
    {
        // Work down the flag of quotients: v stays nonzero by minimality at
        // each step, which is exactly Gr(v) != 0.
        let mut current_vec = v.to_vec();
        let mut carrier_stack: Vec<QuotientSpace<GaussRational>> = Vec::new();
        for w in &filtrations {
            // Project the filtration through the quotients taken so far.
            let mut member_level = None;
            let jumps = w.jumps();
            for l in jumps.first().cloned().unwrap()..=jumps.last().cloned().unwrap() {
                let mut piece = w.piece_at(l);
                for q in &carrier_stack {
                    piece = q.project_subspace(&piece)?;
                }
                if piece.contains_vector(&current_vec) {
                    member_level = Some(l);
                    break;
                }
            }
            let l = member_level.ok_or_else(|| {
                CoreError::Internal("vector not contained in the top filtration piece".into())
            })?;
            min_levels.push(l);
            // Pass to Gr_l: quotient by the projected W_{l-1} inside W_l.
            let mut below = w.piece_at(l - 1);
            let mut at = w.piece_at(l);
            for q in &carrier_stack {
                below = q.project_subspace(&below)?;
                at = q.project_subspace(&at)?;
            }
            let q = QuotientSpace::of_pair(&below, &at)?;
            current_vec = q.project(&current_vec)?;
            if current_vec.iter().all(|x| x.is_zero()) {
                return Err(CoreError::Precondition(
                    "graded part of v vanishes; growth theorem does not apply".into(),
                ));
            }
            carrier_stack.push(q);
        }
    }
    let levels = match levels {
        Some(explicit) => {
            if explicit != min_levels {
                return Err(CoreError::Precondition(format!(
                    "graded part of v vanishes at levels {explicit:?}; minimal levels are {min_levels:?}"
                )));
            }
            explicit
        }
        None => min_levels,
    };

    // Predicted exponents: ||v|| ~ prod t_alpha^{l_alpha/2} translates to
    // y-exponents mu_1 = l_1/2, mu_j = (l_j - l_{j-1})/2.
    let predicted_t: Vec<f64> = levels.iter().map(|l| *l as f64 / 2.0).collect();
    let mut predicted_y = Vec::with_capacity(a);
    for j in 0..a {
        let prev = if j == 0 { 0 } else { levels[j - 1] };
        predicted_y.push((levels[j] - prev) as f64 / 2.0);
    }

    // Sample ln ||v|| across the rays and regress on ln y_j.
    let vf: Vec<BigComplex> = v.iter().map(|g| convert::gauss_to_complex(g, prec)).collect();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let fit_start = spec.decade_end - spec.fit_decades;
    let total = ((spec.decade_end - spec.decade_start) * spec.samples_per_decade as f64) as usize;
    for b in &spec.rays {
        if b.len() != a {
            return Err(CoreError::DimensionMismatch("ray exponent length".into()));
        }
        for s in 0..=total {
            let d10 =
                spec.decade_start + (spec.decade_end - spec.decade_start) * s as f64 / total as f64;
            if d10 < fit_start {
                continue;
            }
            let t = 10f64.powf(d10);
            let y: Vec<f64> = b.iter().map(|e| t.powf(*e)).collect();
            let z: Vec<BigComplex> = y
                .iter()
                .map(|v| BigComplex::new(BigReal::zero(prec), BigReal::from_f64(*v, prec)))
                .collect();
            let norm_sq = hodge_norm_sq(cone, &vf, &z)?;
            let ln_norm = norm_sq.ln().to_f64() / 2.0;
            let mut row: Vec<f64> = y.iter().map(|v| v.ln()).collect();
            row.push(1.0);
            rows.push(row);
            rhs.push(ln_norm);
        }
    }
    let fitted_full = least_squares(&rows, &rhs)?;
    let fitted_y = fitted_full[..a].to_vec();
    let mut fitted_t = Vec::with_capacity(a);
    let mut acc = 0.0;
    for m in &fitted_y {
        acc += *m;
        fitted_t.push(acc);
    }
    Ok(GrowthFit {
        levels,
        predicted_y,
        fitted_y,
        predicted_t,
        fitted_t,
        samples: rhs.len(),
    })
}

/// Ordinary least squares via normal equations (f64; the fit tolerances are
/// far looser than double precision).
fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    if m < n {
        return Err(CoreError::Precondition("underdetermined fit".into()));
    }
    let mut ata = vec![vec![0.0; n]; n];
    let mut atb = vec![0.0; n];
    for (row, b) in rows.iter().zip(rhs) {
        for i in 0..n {
            atb[i] += row[i] * b;
            for j in 0..n {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    // Gaussian elimination with partial pivoting.
    let mut a = ata;
    let mut b = atb;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| a[p][col].abs().partial_cmp(&a[q][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < 1e-12 {
            return Err(CoreError::Degenerate("singular fit matrix".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
        }
        b[col] /= d;
        for r in 0..n {
            if r != col && a[r][col] != 0.0 {
                let f = a[r][col];
                for j in 0..n {
                    a[r][j] -= f * a[col][j];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::cone::{elliptic_cone, product_elliptic_cone};
    use crate::scalar::rat_int;

    fn eg(i: usize, n: usize) -> Vec<GaussRational> {
        let mut v = vec![<GaussRational as Scalar>::zero(); n];
        v[i] = GaussRational::from_re(rat_int(1));
        v
    }

    #[test]
    fn elliptic_norms_closed_form() {
        let cone = elliptic_cone();
        let y = 50.0;
        let z = vec![BigComplex::from_f64(0.0, y, 192)];
        let e1 = vec![BigComplex::one(192), BigComplex::zero(192)];
        let e2 = vec![BigComplex::zero(192), BigComplex::one(192)];
        let n1 = hodge_norm_sq(&cone, &e1, &z).unwrap().to_f64();
        let n2 = hodge_norm_sq(&cone, &e2, &z).unwrap().to_f64();
        assert!((n1 - 1.0 / y).abs() < 1e-12, "{n1}");
        assert!((n2 - y).abs() < 1e-9, "{n2}");
        // Scaling: ||c v|| = |c| ||v||.
        let cv: Vec<BigComplex> = e1
            .iter()
            .map(|x| x.clone() * BigComplex::from_f64(3.0, 4.0, 192))
            .collect();
        let nc = hodge_norm_sq(&cone, &cv, &z).unwrap().to_f64();
        assert!((nc - 25.0 * n1).abs() < 1e-10);
    }

    #[test]
    fn positivity_domain_error_below_axis() {
        let cone = elliptic_cone();
        let z = vec![BigComplex::from_f64(0.0, -1.0, 128)];
        let e1 = vec![BigComplex::one(128), BigComplex::zero(128)];
        assert!(hodge_norm_sq(&cone, &e1, &z).is_err());
    }

    #[test]
    fn elliptic_growth_exponents() {
        let cone = elliptic_cone();
        let mut spec = RaySpec::standard(1);
        spec.samples_per_decade = 8;
        let fit = norm_growth_exponents(&cone, &eg(0, 2), None, &spec, 160).unwrap();
        assert_eq!(fit.levels, vec![-1]);
        assert!((fit.fitted_y[0] - (-0.5)).abs() < 1e-3, "{:?}", fit.fitted_y);
        let fit2 = norm_growth_exponents(&cone, &eg(1, 2), None, &spec, 160).unwrap();
        assert!((fit2.fitted_y[0] - 0.5).abs() < 1e-3);
    }

    #[test]
    fn product_growth_exponents() {
        let cone = product_elliptic_cone();
        let mut spec = RaySpec::standard(2);
        spec.samples_per_decade = 6;
        spec.decade_start = 1.0;
        spec.decade_end = 4.0;
        spec.fit_decades = 2.0;
        let fit = norm_growth_exponents(&cone, &eg(0, 4), None, &spec, 192).unwrap();
        assert_eq!(fit.levels, vec![-1, -2]);
        assert!((fit.fitted_y[0] + 0.5).abs() < 1e-2, "{:?}", fit.fitted_y);
        assert!((fit.fitted_y[1] + 0.5).abs() < 1e-2, "{:?}", fit.fitted_y);
    }

    #[test]
    fn wrong_levels_rejected() {
        let cone = elliptic_cone();
        let spec = RaySpec::standard(1);
        let err = norm_growth_exponents(&cone, &eg(0, 2), Some(vec![1]), &spec, 96);
        assert!(err.is_err());
    }
}
