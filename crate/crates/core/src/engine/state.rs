use std::collections::BTreeMap;

use super::{C64, DROP_TOLERANCE};
use crate::error::{Error, Result};

/// Sparse complex vector; amplitudes below [`DROP_TOLERANCE`] are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    dim: usize,
    entries: BTreeMap<usize, C64>,
}

impl SparseState {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range {dim}");
        let mut entries = BTreeMap::new();
        entries.insert(index, C64::new(1.0, 0.0));
        Self { dim, entries }
    }

    pub fn from_dense(amps: &[C64]) -> Self {
        Self::from_map(amps.len(), amps.iter().copied().enumerate().collect())
    }

    pub(crate) fn from_map(dim: usize, mut entries: BTreeMap<usize, C64>) -> Self {
        entries.retain(|_, v| v.norm() >= DROP_TOLERANCE);
        Self { dim, entries }
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, C64)>>(dim: usize, it: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, v) in it {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, len: dim });
            }
            *map.entry(i).or_insert(C64::new(0.0, 0.0)) += v;
        }
        Ok(Self::from_map(dim, map))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> C64 {
        self.entries.get(&i).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn to_dense(&self) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.dim];
        for (i, a) in self.iter() {
            v[i] = a;
        }
        v
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim != other.dim {
            return Err(Error::Shape {
                op: "inner",
                lhs: (self.dim, 1),
                rhs: (other.dim, 1),
            });
        }
        Ok(self
            .iter()
            .map(|(i, a)| a.conj() * other.get(i))
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self::from_map(self.dim, self.entries.iter().map(|(&i, &v)| (i, v * alpha)).collect())
    }

    pub fn add_scaled(&self, other: &Self, alpha: C64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Shape {
                op: "add",
                lhs: (self.dim, 1),
                rhs: (other.dim, 1),
            });
        }
        let mut map = self.entries.clone();
        for (i, v) in other.iter() {
            *map.entry(i).or_insert(C64::new(0.0, 0.0)) += alpha * v;
        }
        Ok(Self::from_map(self.dim, map))
    }

    /// Max-abs distance between two states of equal dimension.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .add_scaled(other, C64::new(-1.0, 0.0))?
            .entries
            .values()
            .map(|v| v.norm())
            .fold(0.0, f64::max))
    }

    /// `self ⊗ other` under row-major flattening.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self
            .dim
            .checked_mul(other.dim)
            .ok_or(Error::Size { requested: usize::MAX, max: usize::MAX })?;
        let mut map = BTreeMap::new();
        for (i, a) in self.iter() {
            for (j, b) in other.iter() {
                map.insert(i * other.dim + j, a * b);
            }
        }
        Ok(Self::from_map(dim, map))
    }
}
