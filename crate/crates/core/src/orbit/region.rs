//! Combinatorial cone-cover classification: every ordered point of the cone
//! lies in some region A_j or in the bounded base region A_0.

use crate::error::{CoreError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ConeRegion {
    /// Region index j (1-based); the point lies in A_j.
    pub j: usize,
    /// Index set I = {i_1 < ... < i_r = a}, 1-based.
    pub index_set: Vec<usize>,
    /// t_alpha = y_{i_alpha} / y_{i_{alpha+1}} (t_r = y_a).
    pub t: Vec<f64>,
    /// (j, alpha, u_alpha^j) for intermediate indices.
    pub u: Vec<(usize, usize, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegionClassification {
    /// Bounded base region A_0: y_a <= K_1 + 1.
    Base,
    Region(ConeRegion),
}

/// Check K_1 > K_2^a > ... and K_a > 1 (with K_{a+1} = 1 implied).
pub fn validate_k_sequence(k_seq: &[f64], a: usize) -> Result<()> {
    if k_seq.len() != a {
        return Err(CoreError::Precondition(format!(
            "need {a} thresholds, got {}",
            k_seq.len()
        )));
    }
    let mut extended = k_seq.to_vec();
    extended.push(1.0);
    for j in 0..a {
        if !(extended[j] > extended[j + 1].powi(a as i32)) {
            return Err(CoreError::Precondition(format!(
                "growth condition K_{} > K_{}^{a} violated",
                j + 1,
                j + 2
            )));
        }
    }
    Ok(())
}

/// A compliant threshold sequence K_1 > K_2^a > ... with K_a = base > 1.
pub fn standard_k_sequence(a: usize, base: f64) -> Vec<f64> {
    assert!(base > 1.0);
    let mut seq = vec![0.0; a];
    seq[a - 1] = base;
    for j in (0..a.saturating_sub(1)).rev() {
        seq[j] = seq[j + 1].powi(a as i32) * 2.0;
    }
    seq
}

/// Classify an ordered point y_1 >= y_2 >= ... >= y_a > 0 of the cone.
pub fn classify_cone_region(y: &[f64], k_seq: &[f64]) -> Result<RegionClassification> {
    let a = y.len();
    if a == 0 {
        return Err(CoreError::Precondition("empty point".into()));
    }
    validate_k_sequence(k_seq, a)?;
    if y.iter().any(|&v| !(v > 0.0)) {
        return Err(CoreError::Precondition("y must be positive".into()));
    }
    if y.windows(2).any(|w| w[0] < w[1]) {
        return Err(CoreError::Precondition(
            "point must be ordered y_1 >= ... >= y_a".into(),
        ));
    }
    if y[a - 1] <= k_seq[0] + 1.0 {
        return Ok(RegionClassification::Base);
    }
    // xi_j = y_j / y_{j+1} for j < a, xi_a = y_a.
    let xi: Vec<f64> = (0..a)
        .map(|j| if j + 1 < a { y[j] / y[j + 1] } else { y[a - 1] })
        .collect();
    // K_0 = infinity, K_{a+1} = 1; find an empty interval (K_l, K_{l-1}]
    // with 2 <= l <= a+1.
    let k_at = |idx: usize| -> f64 {
        if idx == 0 {
            f64::INFINITY
        } else if idx <= a {
            k_seq[idx - 1]
        } else {
            1.0
        }
    };
    let mut found = None;
    for l in 2..=(a + 1) {
        let lo = k_at(l);
        let hi = k_at(l - 1);
        if !xi.iter().any(|&x| x > lo && x <= hi) {
            found = Some(l);
            break;
        }
    }
    let Some(l) = found else {
        return Err(CoreError::Internal(
            "pigeonhole failed: no empty threshold interval".into(),
        ));
    };
    let threshold = k_at(l - 1);
    let index_set: Vec<usize> = (1..=a).filter(|&j| xi[j - 1] > threshold).collect();
    if index_set.last() != Some(&a) {
        return Err(CoreError::Internal("index set does not end at a".into()));
    }
    // Region data and membership checks.
    let r = index_set.len();
    let mut t = Vec::with_capacity(r);
    for alpha in 0..r {
        let val = if alpha + 1 < r {
            y[index_set[alpha] - 1] / y[index_set[alpha + 1] - 1]
        } else {
            y[a - 1]
        };
        t.push(val);
    }
    let j_region = l - 1;
    let k_bound = k_at(l).powi(a as i32);
    let mut u = Vec::new();
    for alpha in 0..r {
        let i_prev = if alpha == 0 { 0 } else { index_set[alpha - 1] };
        for j in (i_prev + 1)..index_set[alpha] {
            let val = y[j - 1] / y[index_set[alpha] - 1];
            if !(1.0 - 1e-12..=k_bound * (1.0 + 1e-12)).contains(&val) {
                return Err(CoreError::Internal(format!(
                    "u bound violated: u = {val}, bound = {k_bound}"
                )));
            }
            u.push((j, alpha + 1, val));
        }
        if !(t[alpha] > k_at(j_region)) {
            return Err(CoreError::Internal(format!(
                "t bound violated: t_{} = {} <= K_{}",
                alpha + 1,
                t[alpha],
                j_region
            )));
        }
    }
    Ok(RegionClassification::Region(ConeRegion {
        j: j_region,
        index_set,
        t,
        u,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_variable_examples() {
        let k = vec![1e3];
        match classify_cone_region(&[1e6], &k).unwrap() {
            RegionClassification::Region(r) => {
                assert_eq!(r.index_set, vec![1]);
                assert_eq!(r.j, 1);
            }
            other => panic!("expected region, got {other:?}"),
        }
        assert_eq!(
            classify_cone_region(&[500.0], &k).unwrap(),
            RegionClassification::Base
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(classify_cone_region(&[1.0, 2.0], &standard_k_sequence(2, 10.0)).is_err());
        assert!(classify_cone_region(&[10.0, 1.0], &[5.0, 10.0]).is_err());
    }

    #[test]
    fn random_cover_small() {
        let a = 3;
        let k = standard_k_sequence(a, 8.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let mut y: Vec<f64> = (0..a)
                .map(|_| 10f64.powf(rng.gen_range(-1.0..9.0)))
                .collect();
            y.sort_by(|p, q| q.partial_cmp(p).unwrap());
            classify_cone_region(&y, &k).unwrap();
        }
    }
}
