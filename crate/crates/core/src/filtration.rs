//! Nested flags of subspaces with integer jump indices.

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    /// W_l with W_l subset of W_{l+1}; zero below the recorded range.
    Increasing,
    /// F^p with F^{p+1} subset of F^p; full below the recorded range.
    Decreasing,
}

#[derive(Clone, Debug)]
pub struct Filtration<S: Scalar> {
    direction: Direction,
    ambient: usize,
    // Only jump indices are kept; see `normalize`.
    pieces: BTreeMap<i64, Subspace<S>>,
}

impl<S: Scalar> PartialEq for Filtration<S> {
    fn eq(&self, other: &Self) -> bool {
        self.direction == other.direction
            && self.ambient == other.ambient
            && self.pieces == other.pieces
    }
}

impl<S: Scalar> Filtration<S> {
    pub fn new(
        direction: Direction,
        ambient: usize,
        pieces: BTreeMap<i64, Subspace<S>>,
    ) -> Result<Self> {
        for p in pieces.values() {
            if p.ambient() != ambient {
                return Err(CoreError::DimensionMismatch(
                    "filtration piece with wrong ambient dimension".into(),
                ));
            }
        }
        let mut f = Self {
            direction,
            ambient,
            pieces,
        };
        f.validate()?;
        f.normalize();
        Ok(f)
    }

    /// Filtration with a single jump: the full space appears at `index`.
    pub fn trivial(direction: Direction, ambient: usize, index: i64) -> Self {
        let mut pieces = BTreeMap::new();
        pieces.insert(index, Subspace::full(ambient));
        Self {
            direction,
            ambient,
            pieces,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn jumps(&self) -> Vec<i64> {
        self.pieces.keys().cloned().collect()
    }

    pub fn pieces(&self) -> &BTreeMap<i64, Subspace<S>> {
        &self.pieces
    }

    pub fn piece_at(&self, l: i64) -> Subspace<S> {
        match self.direction {
            Direction::Increasing => self
                .pieces
                .range(..=l)
                .next_back()
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| Subspace::zero(self.ambient)),
            Direction::Decreasing => self
                .pieces
                .range(l..)
                .next()
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| Subspace::zero(self.ambient)),
        }
    }

    fn validate(&self) -> Result<()> {
        let keys: Vec<i64> = self.pieces.keys().cloned().collect();
        if keys.is_empty() {
            return Err(CoreError::InvalidFiltration("no pieces".into()));
        }
        for w in keys.windows(2) {
            let (a, b) = (&self.pieces[&w[0]], &self.pieces[&w[1]]);
            let ok = match self.direction {
                Direction::Increasing => b.contains(a),
                Direction::Decreasing => a.contains(b),
            };
            if !ok {
                return Err(CoreError::InvalidFiltration(format!(
                    "piece at {} not nested in piece at {}",
                    w[0], w[1]
                )));
            }
        }
        let top = match self.direction {
            Direction::Increasing => &self.pieces[keys.last().unwrap()],
            Direction::Decreasing => &self.pieces[&keys[0]],
        };
        if !top.is_full() {
            return Err(CoreError::InvalidFiltration(
                "filtration does not exhaust the ambient space".into(),
            ));
        }
        Ok(())
    }

    /// Keep only indices where the piece actually changes.
    fn normalize(&mut self) {
        let keys: Vec<i64> = self.pieces.keys().cloned().collect();
        let iter: Box<dyn Iterator<Item = &i64>> = match self.direction {
            Direction::Increasing => Box::new(keys.iter()),
            Direction::Decreasing => Box::new(keys.iter().rev()),
        };
        let mut prev_dim: Option<usize> = None;
        let mut drop = Vec::new();
        for k in iter {
            let d = self.pieces[k].dim();
            if prev_dim == Some(d) {
                drop.push(*k);
            } else {
                prev_dim = Some(d);
            }
        }
        for k in drop {
            self.pieces.remove(&k);
        }
        // Drop an explicit zero piece below (resp. above) the jump range.
        let keys: Vec<i64> = self.pieces.keys().cloned().collect();
        for k in keys {
            if self.pieces[&k].is_zero() && self.pieces.len() > 1 {
                self.pieces.remove(&k);
            }
        }
    }

    /// Canonical complement of the previous piece inside the piece at `l`.
    pub fn graded_piece(&self, l: i64) -> Result<Subspace<S>> {
        let (cur, prev) = match self.direction {
            Direction::Increasing => (self.piece_at(l), self.piece_at(l - 1)),
            Direction::Decreasing => (self.piece_at(l), self.piece_at(l + 1)),
        };
        prev.complement_in(&cur)
    }

    pub fn graded_dim(&self, l: i64) -> usize {
        match self.direction {
            Direction::Increasing => self.piece_at(l).dim() - self.piece_at(l - 1).dim(),
            Direction::Decreasing => self.piece_at(l).dim() - self.piece_at(l + 1).dim(),
        }
    }

    /// Indices l with nonzero graded piece.
    pub fn support(&self) -> Vec<i64> {
        self.pieces.keys().cloned().collect()
    }

    /// Shift indices by k: result has piece(l) = self.piece(l + k).
    pub fn shift(&self, k: i64) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|(l, s)| (l - k, s.clone()))
            .collect();
        Self {
            direction: self.direction,
            ambient: self.ambient,
            pieces,
        }
    }

    /// Image filtration under an invertible operator.
    pub fn transform(&self, op: &Matrix<S>) -> Result<Self> {
        let mut pieces = BTreeMap::new();
        for (l, s) in &self.pieces {
            pieces.insert(*l, s.image(op)?);
        }
        let mut f = Self {
            direction: self.direction,
            ambient: self.ambient,
            pieces,
        };
        f.validate()?;
        f.normalize();
        Ok(f)
    }

    /// Conjugate filtration under an antilinear conjugation v -> C conj(v).
    pub fn conj(&self, conjugation: &Matrix<S>) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|(l, s)| (*l, s.conj(conjugation)))
            .collect();
        Self {
            direction: self.direction,
            ambient: self.ambient,
            pieces,
        }
    }

    pub fn sum_of_graded_dims(&self) -> usize {
        let keys = self.jumps();
        if keys.is_empty() {
            return 0;
        }
        let lo = *keys.first().unwrap();
        let hi = *keys.last().unwrap();
        (lo..=hi).map(|l| self.graded_dim(l)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn e(n: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![<Rational as Scalar>::zero(); n];
        v[i] = <Rational as Scalar>::one();
        v
    }

    #[test]
    fn increasing_flag_graded_dims() {
        let mut pieces = BTreeMap::new();
        pieces.insert(0, Subspace::span(2, vec![e(2, 0)]));
        pieces.insert(1, Subspace::full(2));
        let w = Filtration::new(Direction::Increasing, 2, pieces).unwrap();
        assert_eq!(w.graded_dim(0), 1);
        assert_eq!(w.graded_dim(1), 1);
        assert_eq!(w.graded_dim(-1), 0);
        assert_eq!(w.sum_of_graded_dims(), 2);
    }

    #[test]
    fn constant_filtration_single_graded() {
        let f = Filtration::<Rational>::trivial(Direction::Increasing, 3, 5);
        assert_eq!(f.graded_dim(5), 3);
        assert_eq!(f.graded_dim(4), 0);
        assert_eq!(f.piece_at(4).dim(), 0);
        assert_eq!(f.piece_at(7).dim(), 3);
    }

    #[test]
    fn decreasing_conventions() {
        let mut pieces = BTreeMap::new();
        pieces.insert(0, Subspace::full(2));
        pieces.insert(1, Subspace::span(2, vec![e(2, 1)]));
        let f = Filtration::new(Direction::Decreasing, 2, pieces).unwrap();
        assert_eq!(f.piece_at(-3).dim(), 2);
        assert_eq!(f.piece_at(1).dim(), 1);
        assert_eq!(f.piece_at(2).dim(), 0);
        assert_eq!(f.graded_dim(0), 1);
        assert_eq!(f.graded_dim(1), 1);
    }

    #[test]
    fn rejects_non_nested() {
        let mut pieces = BTreeMap::new();
        pieces.insert(0, Subspace::span(2, vec![e(2, 0)]));
        pieces.insert(1, Subspace::span(2, vec![e(2, 1)]));
        assert!(Filtration::new(Direction::Increasing, 2, pieces).is_err());
    }

    #[test]
    fn normalization_drops_repeats() {
        let mut pieces = BTreeMap::new();
        pieces.insert(-1, Subspace::span(2, vec![e(2, 0)]));
        pieces.insert(0, Subspace::span(2, vec![e(2, 0)]));
        pieces.insert(1, Subspace::full(2));
        let w = Filtration::new(Direction::Increasing, 2, pieces).unwrap();
        assert_eq!(w.jumps(), vec![-1, 1]);
    }
}
