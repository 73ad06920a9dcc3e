//! Analytic continuation by truncated Taylor re-expansion: transport of the
//! D-derivative state along polylines, with step size at most half the
//! distance to the nearest singularity.

use hodge_moduli_core::convert::rational_to_real;
use hodge_moduli_core::error::{CoreError, Result};
use hodge_moduli_core::matrix::Matrix;
use hodge_moduli_core::numeric::{BigComplex, BigReal};
use hodge_moduli_core::scalar::Scalar;

use crate::operator::{Poly, ThetaOperator};

/// D-form coefficients evaluated once; reused across steps.
pub struct Transporter {
    order: usize,
    d_coeffs: Vec<Poly>,
    /// Finite singular points of the operator.
    singularities: Vec<BigComplex>,
    prec: u32,
}

impl Transporter {
    pub fn new(op: &ThetaOperator, singularities: Vec<BigComplex>, prec: u32) -> Self {
        Self {
            order: op.order(),
            d_coeffs: op.d_form(),
            singularities,
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn distance_to_singularities(&self, z: &BigComplex) -> BigReal {
        let mut best: Option<BigReal> = None;
        for s in &self.singularities {
            let d = (z.clone() - s.clone()).abs();
            best = Some(match best {
                None => d,
                Some(b) => b.min(&d),
            });
        }
        best.unwrap_or_else(|| BigReal::from_i64(1, self.prec))
    }

    /// One Taylor step z0 -> z1 acting on the D-state matrix (columns are
    /// states). |z1 - z0| must be at most 0.6 of the distance from z0 to the
    /// nearest singularity.
    fn step_matrix(&self, z0: &BigComplex, z1: &BigComplex) -> Result<Matrix<BigComplex>> {
        let r = self.order;
        let prec = self.prec;
        let t1 = z1.clone() - z0.clone();
        let dist = self.distance_to_singularities(z0);
        let ratio = t1.abs().to_f64() / dist.to_f64();
        if !(ratio < 0.6) {
            return Err(CoreError::Precondition(format!(
                "step ratio {ratio:.3} too close to a singularity"
            )));
        }
        // Shifted coefficients c_k(z0 + t) as complex polynomials in t.
        let shifted: Vec<Vec<BigComplex>> = self
            .d_coeffs
            .iter()
            .map(|p| shift_poly(p, z0, prec))
            .collect();
        let lead = shifted[r][0].clone();
        if lead.abs().to_f64() == 0.0 {
            return Err(CoreError::Precondition("step centered at a singular point".into()));
        }
        let lead_inv = BigComplex::one(prec) / lead;
        let nterms = if ratio > 0.0 {
            (((prec as f64) + 96.0) / (-ratio.log2())).ceil() as usize + 16
        } else {
            r + 1
        };

        let mut out = Matrix::zeros(r, r);
        for col in 0..r {
            // Initial Taylor coefficients a_n = D^n u(z0) / n!.
            let mut a: Vec<BigComplex> = Vec::with_capacity(nterms + r);
            let mut fact = BigReal::one(prec);
            for n in 0..r {
                if n > 0 {
                    fact = fact * BigReal::from_i64(n as i64, prec);
                }
                let v = if n == col {
                    BigComplex::one(prec)
                } else {
                    BigComplex::zero(prec)
                };
                a.push(v.scale(&(BigReal::one(prec) / fact.clone())));
            }
            // Recurrence: coefficient of t^m gives a_{m+r}.
            for m in 0..nterms {
                let mut rhs = BigComplex::zero(prec);
                for (k, poly) in shifted.iter().enumerate() {
                    for (i, c) in poly.iter().enumerate() {
                        if k == r && i == 0 {
                            continue;
                        }
                        if c.abs().to_f64() == 0.0 {
                            continue;
                        }
                        if i > m {
                            continue;
                        }
                        let idx = m - i + k;
                        if idx >= a.len() {
                            continue;
                        }
                        // falling factorial (m-i+k)(m-i+k-1)...(m-i+1)
                        let mut ff = BigReal::one(prec);
                        for step in 0..k {
                            ff = ff * BigReal::from_i64((m - i + k - step) as i64, prec);
                        }
                        rhs = rhs + c.clone() * a[idx].clone().scale(&ff);
                    }
                }
                let mut ff = BigReal::one(prec);
                for step in 0..r {
                    ff = ff * BigReal::from_i64((m + r - step) as i64, prec);
                }
                let denom = lead_inv.clone().scale(&(BigReal::one(prec) / ff));
                a.push(-(rhs * denom));
            }
            // Evaluate D^k u(z1) = sum_n a_n ff(n,k) t^{n-k}.
            for k in 0..r {
                let mut acc = BigComplex::zero(prec);
                let mut tp = BigComplex::one(prec);
                // Horner-free forward accumulation.
                for n in k..a.len() {
                    let mut ff = BigReal::one(prec);
                    for step in 0..k {
                        ff = ff * BigReal::from_i64((n - step) as i64, prec);
                    }
                    acc = acc + a[n].clone().scale(&ff) * tp.clone();
                    tp = tp * t1.clone();
                }
                out[(k, col)] = acc;
            }
        }
        Ok(out)
    }

    /// Transport the identity state matrix along the polyline, subdividing
    /// segments adaptively. Returns the total transfer matrix.
    pub fn transport(&self, path: &[BigComplex]) -> Result<Matrix<BigComplex>> {
        if path.len() < 2 {
            return Ok(Matrix::identity(self.order));
        }
        let prec = self.prec;
        let mut total = Matrix::identity(self.order);
        for seg in path.windows(2) {
            let mut cur = seg[0].clone();
            let target = &seg[1];
            let mut guard = 0;
            loop {
                let remaining = target.clone() - cur.clone();
                let rem_abs = remaining.abs().to_f64();
                if rem_abs == 0.0 {
                    break;
                }
                let dist = self.distance_to_singularities(&cur).to_f64();
                if dist <= 0.0 {
                    return Err(CoreError::Precondition(
                        "path passes through a singular point".into(),
                    ));
                }
                let max_step = 0.5 * dist;
                let next = if rem_abs <= max_step {
                    target.clone()
                } else {
                    let f = BigReal::from_f64(max_step / rem_abs, prec);
                    cur.clone() + remaining.scale(&f)
                };
                let step = self.step_matrix(&cur, &next)?;
                total = step * total;
                cur = next;
                guard += 1;
                if guard > 4000 {
                    return Err(CoreError::Precondition(
                        "path requires too many steps (too close to a singularity?)".into(),
                    ));
                }
            }
        }
        Ok(total)
    }

    /// Counterclockwise polygonal loop around `center` with the given radius,
    /// starting and ending at center + radius (angle 0).
    pub fn circle_loop(center: &BigComplex, radius: f64, segments: usize, prec: u32) -> Vec<BigComplex> {
        let mut pts = Vec::with_capacity(segments + 1);
        for i in 0..=segments {
            let ang = 2.0 * std::f64::consts::PI * (i as f64) / (segments as f64);
            let dir = BigComplex::from_f64(ang.cos(), ang.sin(), prec)
                .scale(&BigReal::from_f64(radius, prec));
            pts.push(center.clone() + dir);
        }
        pts
    }
}

fn shift_poly(p: &Poly, z0: &BigComplex, prec: u32) -> Vec<BigComplex> {
    // p(z0 + t) via Horner: repeatedly multiply by (z0 + t).
    let mut acc: Vec<BigComplex> = vec![BigComplex::zero(prec)];
    for c in p.iter().rev() {
        // acc = acc * (z0 + t) + c
        let mut next = vec![BigComplex::zero(prec); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i] = next[i].clone() + a.clone() * z0.clone();
            next[i + 1] = next[i + 1].clone() + a.clone();
        }
        next[0] = next[0].clone() + BigComplex::from_real(rational_to_real(c, prec));
        acc = next;
    }
    while acc.len() > 1 && acc.last().map_or(false, |c| Scalar::is_zero(c)) {
        acc.pop();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use hodge_moduli_core::scalar::{rat, rat_int};

    fn legendre_op() -> ThetaOperator {
        ThetaOperator::new(vec![
            vec![rat_int(0), rat(-1, 4)],
            vec![rat_int(0), rat_int(-1)],
            vec![rat_int(1), rat_int(-1)],
        ])
        .unwrap()
    }

    fn legendre_transporter(prec: u32) -> Transporter {
        let sings = vec![BigComplex::zero(prec), BigComplex::one(prec)];
        Transporter::new(&legendre_op(), sings, prec)
    }

    #[test]
    fn contractible_loop_is_identity() {
        let t = legendre_transporter(192);
        let center = BigComplex::from_f64(0.5, 0.4, 192);
        let path = Transporter::circle_loop(&center, 0.05, 8, 192);
        let m = t.transport(&path).unwrap();
        let diff = m - Matrix::identity(2);
        let err: f64 = diff
            .rows()
            .flat_map(|r| r.iter().map(|c| c.abs().to_f64()))
            .fold(0.0, f64::max);
        assert!(err < 1e-45, "{err}");
    }

    #[test]
    fn forward_backward_roundtrip() {
        let t = legendre_transporter(160);
        let a = BigComplex::from_f64(0.1, 0.0, 160);
        let b = BigComplex::from_f64(0.3, 0.25, 160);
        let fwd = t.transport(&[a.clone(), b.clone()]).unwrap();
        let back = t.transport(&[b, a]).unwrap();
        let diff = back * fwd - Matrix::identity(2);
        let err: f64 = diff
            .rows()
            .flat_map(|r| r.iter().map(|c| c.abs().to_f64()))
            .fold(0.0, f64::max);
        assert!(err < 1e-40, "{err}");
    }

    #[test]
    fn step_halving_agrees() {
        // Transport in one segment vs the same segment split in two.
        let t = legendre_transporter(160);
        let a = BigComplex::from_f64(0.2, 0.1, 160);
        let mid = BigComplex::from_f64(0.25, 0.12, 160);
        let b = BigComplex::from_f64(0.3, 0.14, 160);
        let one = t.transport(&[a.clone(), b.clone()]).unwrap();
        let two = t.transport(&[a, mid, b]).unwrap();
        let diff = one - two;
        let err: f64 = diff
            .rows()
            .flat_map(|r| r.iter().map(|c| c.abs().to_f64()))
            .fold(0.0, f64::max);
        assert!(err < 1e-40, "{err}");
    }

    #[test]
    fn rejects_path_through_singularity() {
        let t = legendre_transporter(96);
        let a = BigComplex::from_f64(-0.5, 0.0, 96);
        let b = BigComplex::from_f64(0.5, 0.0, 96);
        assert!(t.transport(&[a, b]).is_err());
    }
}
