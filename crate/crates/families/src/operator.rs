//! Picard-Fuchs operators in theta form: L = sum_j q_j(z) theta^j with
//! theta = z d/dz and exact rational polynomial coefficients.

use hodge_moduli_core::error::{CoreError, Result};
use hodge_moduli_core::numeric::BigComplex;
use hodge_moduli_core::scalar::{rat_int, Rational, Scalar};

/// Polynomial with exact rational coefficients, dense in ascending powers.
pub type Poly = Vec<Rational>;

pub fn poly_eval_complex(p: &[Rational], z: &BigComplex, prec: u32) -> BigComplex {
    let mut acc = BigComplex::zero(prec);
    for c in p.iter().rev() {
        acc = acc * z.clone() + BigComplex::from_real(
            hodge_moduli_core::convert::rational_to_real(c, prec),
        );
    }
    acc
}

pub fn poly_eval_rational(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = rat_int(0);
    for c in p.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

fn poly_trim(p: &mut Poly) {
    while p.len() > 1 && p.last().map_or(false, |c| Scalar::is_zero(c)) {
        p.pop();
    }
}

pub fn poly_add(a: &[Rational], b: &[Rational]) -> Poly {
    let n = a.len().max(b.len());
    let zero = rat_int(0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).unwrap_or(&zero).clone() + b.get(i).unwrap_or(&zero).clone();
        out.push(x);
    }
    poly_trim(&mut out);
    out
}

pub fn poly_scale(a: &[Rational], s: &Rational) -> Poly {
    a.iter().map(|c| c.clone() * s.clone()).collect()
}

pub fn poly_mul(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![rat_int(0)];
    }
    let mut out = vec![rat_int(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if Scalar::is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    poly_trim(&mut out);
    out
}

/// Stirling numbers of the second kind S(n, k).
pub fn stirling2(n: usize, k: usize) -> Rational {
    let mut table = vec![vec![rat_int(0); n + 1]; n + 1];
    table[0][0] = rat_int(1);
    for i in 1..=n {
        for j in 1..=i {
            let t = table[i - 1][j].clone() * rat_int(j as i64) + table[i - 1][j - 1].clone();
            table[i][j] = t;
        }
    }
    table[n][k].clone()
}

/// Signed Stirling numbers of the first kind s(n, k):
/// x(x-1)...(x-n+1) = sum_k s(n,k) x^k.
pub fn stirling1(n: usize, k: usize) -> Rational {
    let mut table = vec![vec![rat_int(0); n + 1]; n + 1];
    table[0][0] = rat_int(1);
    for i in 1..=n {
        for j in 0..=i {
            let mut t = -table[i - 1][j].clone() * rat_int(i as i64 - 1);
            if j >= 1 {
                t = t + table[i - 1][j - 1].clone();
            }
            table[i][j] = t;
        }
    }
    table[n][k].clone()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaOperator {
    /// coeffs[j] = q_j(z), so that L = sum_j q_j(z) theta^j.
    pub coeffs: Vec<Poly>,
}

impl ThetaOperator {
    pub fn new(coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(CoreError::Precondition("operator order must be >= 1".into()));
        }
        if coeffs.last().unwrap().iter().all(|c| Scalar::is_zero(c)) {
            return Err(CoreError::Precondition("leading coefficient vanishes".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// P_i(x) = sum_j q_{j,i} x^j: the coefficient of z^{m} in L(z^{m-i+...})
    /// bookkeeping polynomial. P_0 is the indicial polynomial at z = 0.
    pub fn level_poly(&self, i: usize) -> Poly {
        let zero = rat_int(0);
        let mut out: Poly = self
            .coeffs
            .iter()
            .map(|q| q.get(i).unwrap_or(&zero).clone())
            .collect();
        poly_trim(&mut out);
        out
    }

    pub fn max_z_degree(&self) -> usize {
        self.coeffs.iter().map(|q| q.len().saturating_sub(1)).max().unwrap_or(0)
    }

    /// Whether z = 0 is a point of maximally unipotent type: the indicial
    /// polynomial is c x^r.
    pub fn is_mum_at_zero(&self) -> bool {
        let p0 = self.level_poly(0);
        let r = self.order();
        p0.len() == r + 1
            && !Scalar::is_zero(&p0[r])
            && p0[..r].iter().all(|c| Scalar::is_zero(c))
    }

    /// D-form coefficients: L = sum_k c_k(z) D^k with theta^j expanded via
    /// theta^j = sum_k S2(j, k) z^k D^k.
    pub fn d_form(&self) -> Vec<Poly> {
        let r = self.order();
        let mut c: Vec<Poly> = vec![vec![rat_int(0)]; r + 1];
        for (j, q) in self.coeffs.iter().enumerate() {
            for k in 0..=j {
                let s = stirling2(j, k);
                if Scalar::is_zero(&s) {
                    continue;
                }
                // q_j(z) * S2(j,k) * z^k contributes to c_k.
                let mut term = poly_scale(q, &s);
                let mut shifted = vec![rat_int(0); k];
                shifted.extend(term.drain(..));
                c[k] = poly_add(&c[k], &shifted);
            }
        }
        c
    }

    /// The polynomial whose roots (together with z = 0) are the finite
    /// singular points: the leading D-form coefficient divided by z^r.
    pub fn leading_coefficient(&self) -> Poly {
        self.coeffs.last().unwrap().clone()
    }

    /// Apply the operator to a truncated power series (no log terms),
    /// returning the series of L(f) up to the same order. Exact.
    pub fn apply_to_series(&self, f: &[Rational]) -> Vec<Rational> {
        let n = f.len();
        let mut out = vec![rat_int(0); n];
        for (m, slot) in out.iter_mut().enumerate() {
            // coefficient of z^m in sum_i P_i(m - i) f_{m-i}
            let mut acc = rat_int(0);
            for i in 0..=m.min(self.max_z_degree()) {
                let p = self.level_poly(i);
                let x = rat_int(m as i64 - i as i64);
                acc = acc + poly_eval_rational(&p, &x) * f[m - i].clone();
            }
            *slot = acc;
        }
        out
    }
}

/// theta^j u = sum_k S2(j,k) z^k D^k u: convert a theta-derivative state to
/// the D-derivative state at the point z.
pub fn theta_state_to_d(
    theta_vals: &[BigComplex],
    z: &BigComplex,
    prec: u32,
) -> Vec<BigComplex> {
    let r = theta_vals.len();
    // Invert the triangular relation: D^k u = z^{-k} sum_j s1(k, j) theta^j u.
    let mut out = Vec::with_capacity(r);
    let z_inv = BigComplex::one(prec) / z.clone();
    for k in 0..r {
        let mut acc = BigComplex::zero(prec);
        for (j, tv) in theta_vals.iter().enumerate().take(k + 1) {
            let s = stirling1(k, j);
            if Scalar::is_zero(&s) {
                continue;
            }
            let c = hodge_moduli_core::convert::rational_to_real(&s, prec);
            acc = acc + tv.clone().scale(&c);
        }
        out.push(acc * z_inv.powi(k as i32));
    }
    out
}

/// Inverse of [`theta_state_to_d`].
pub fn d_state_to_theta(d_vals: &[BigComplex], z: &BigComplex, prec: u32) -> Vec<BigComplex> {
    let r = d_vals.len();
    let mut out = Vec::with_capacity(r);
    for j in 0..r {
        let mut acc = BigComplex::zero(prec);
        for (k, dv) in d_vals.iter().enumerate().take(j + 1) {
            let s = stirling2(j, k);
            if Scalar::is_zero(&s) {
                continue;
            }
            let c = hodge_moduli_core::convert::rational_to_real(&s, prec);
            acc = acc + dv.clone().scale(&c) * z.powi(k as i32);
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hodge_moduli_core::scalar::rat;

    /// theta^2 - z (theta + 1/2)^2: the Legendre operator.
    pub fn legendre_op() -> ThetaOperator {
        // q_0 = -z/4, q_1 = -z, q_2 = 1 - z.
        ThetaOperator::new(vec![
            vec![rat_int(0), rat(-1, 4)],
            vec![rat_int(0), rat_int(-1)],
            vec![rat_int(1), rat_int(-1)],
        ])
        .unwrap()
    }

    #[test]
    fn stirling_tables() {
        assert_eq!(stirling2(3, 2), rat_int(3));
        assert_eq!(stirling2(4, 2), rat_int(7));
        assert_eq!(stirling1(3, 1), rat_int(2));
        assert_eq!(stirling1(3, 2), rat_int(-3));
        // theta^3 = z^3 D^3 + 3 z^2 D^2 + z D.
        assert_eq!(stirling2(3, 1), rat_int(1));
        assert_eq!(stirling2(3, 3), rat_int(1));
    }

    #[test]
    fn legendre_is_mum() {
        let op = legendre_op();
        assert!(op.is_mum_at_zero());
        assert_eq!(op.order(), 2);
        // D-form leading coefficient z^2 (1 - z).
        let d = op.d_form();
        assert_eq!(d[2], vec![rat_int(0), rat_int(0), rat_int(1), rat_int(-1)]);
    }

    #[test]
    fn hypergeometric_series_annihilated() {
        // Holomorphic solution sum ((1/2)_n / n!)^2 z^n.
        let op = legendre_op();
        let mut f = vec![rat_int(1)];
        for n in 1..12usize {
            let prev = f[n - 1].clone();
            let half = rat(2 * n as i64 - 1, 2 * n as i64);
            f.push(prev * half.clone() * half);
        }
        let lf = op.apply_to_series(&f);
        for (m, c) in lf.iter().enumerate().take(11) {
            assert!(Scalar::is_zero(c), "L(f) coefficient {m} = {c}");
        }
    }

    #[test]
    fn state_conversions_roundtrip() {
        let z = BigComplex::from_f64(0.3, -0.2, 128);
        let theta = vec![
            BigComplex::from_f64(1.0, 2.0, 128),
            BigComplex::from_f64(-0.5, 0.1, 128),
            BigComplex::from_f64(0.7, 0.0, 128),
        ];
        let d = theta_state_to_d(&theta, &z, 128);
        let back = d_state_to_theta(&d, &z, 128);
        for (a, b) in theta.iter().zip(&back) {
            let err = (a.clone() - b.clone()).abs().to_f64();
            assert!(err < 1e-30, "{err}");
        }
    }
}
