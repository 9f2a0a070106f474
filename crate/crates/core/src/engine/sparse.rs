use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use super::exec::{map_range, Exec};
use super::{expm, SparseState, C64, DEFAULT_MAX_DIM, DENSE_FALLBACK_LIMIT, DROP_TOLERANCE};
use crate::error::{Error, Result};

/// Complex sparse matrix in compressed-row form.
///
/// Columns within a row are strictly increasing and no stored entry has
/// magnitude below [`DROP_TOLERANCE`]. Tensor products flatten indices
/// row-major: `(i_a, i_b) -> i_a * dim_b + i_b`.
#[derive(Clone, PartialEq)]
pub struct SparseOperator {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl fmt::Debug for SparseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SparseOperator")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("nnz", &self.nnz())
            .finish()
    }
}

fn keep(v: C64) -> bool {
    v.norm() >= DROP_TOLERANCE
}

/// Sorts `(col, value)` pairs, merges duplicates in input order and prunes.
fn compress_row(mut entries: Vec<(usize, C64)>) -> Vec<(usize, C64)> {
    entries.sort_by_key(|&(c, _)| c);
    let mut out: Vec<(usize, C64)> = Vec::with_capacity(entries.len());
    for (c, v) in entries {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|&(_, v)| keep(v));
    out
}

impl SparseOperator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_sorted_rows(
            n,
            n,
            diag.iter()
                .enumerate()
                .map(|(i, &v)| if keep(v) { vec![(i, v)] } else { Vec::new() })
                .collect(),
        )
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut per_row: Vec<Vec<(usize, C64)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows {
                return Err(Error::IndexOutOfRange { index: r, len: rows });
            }
            if c >= cols {
                return Err(Error::IndexOutOfRange { index: c, len: cols });
            }
            per_row[r].push((c, v));
        }
        Ok(Self::from_sorted_rows(
            rows,
            cols,
            per_row.into_iter().map(compress_row).collect(),
        ))
    }

    /// Assembles from rows that are already sorted, merged and pruned.
    fn from_sorted_rows(rows: usize, cols: usize, data: Vec<Vec<(usize, C64)>>) -> Self {
        debug_assert_eq!(data.len(), rows);
        let nnz = data.iter().map(Vec::len).sum();
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for row in data {
            for (c, v) in row {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let data = (0..m.nrows())
            .map(|r| {
                (0..m.ncols())
                    .filter_map(|c| {
                        let v = m[(r, c)];
                        keep(v).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        Self::from_sorted_rows(m.nrows(), m.ncols(), data)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries of row `r`, in increasing column order.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// All stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut per_row: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.cols];
        // Row-major traversal keeps each output row sorted.
        for (r, c, v) in self.iter() {
            per_row[c].push((r, v.conj()));
        }
        Self::from_sorted_rows(self.cols, self.rows, per_row)
    }

    pub fn scale(&self, alpha: C64) -> Self {
        let data = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .map(|(c, v)| (c, v * alpha))
                    .filter(|&(_, v)| keep(v))
                    .collect()
            })
            .collect();
        Self::from_sorted_rows(self.rows, self.cols, data)
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        self.scale(C64::new(alpha, 0.0))
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, other: &Self, alpha: C64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape {
                op: "add",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let data = (0..self.rows)
            .map(|r| {
                let mut out = Vec::new();
                let mut a = self.row(r).peekable();
                let mut b = other.row(r).map(|(c, v)| (c, v * alpha)).peekable();
                loop {
                    match (a.peek().copied(), b.peek().copied()) {
                        (Some((ca, va)), Some((cb, vb))) => {
                            if ca == cb {
                                out.push((ca, va + vb));
                                a.next();
                                b.next();
                            } else if ca < cb {
                                out.push((ca, va));
                                a.next();
                            } else {
                                out.push((cb, vb));
                                b.next();
                            }
                        }
                        (Some(e), None) => {
                            out.push(e);
                            a.next();
                        }
                        (None, Some(e)) => {
                            out.push(e);
                            b.next();
                        }
                        (None, None) => break,
                    }
                }
                out.retain(|&(_, v)| keep(v));
                out
            })
            .collect();
        Ok(Self::from_sorted_rows(self.rows, self.cols, data))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, C64::new(1.0, 0.0))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, C64::new(-1.0, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.matmul_with(other, Exec::default())
    }

    /// Sparse product; rows are independent units of work under `exec`.
    pub fn matmul_with(&self, other: &Self, exec: Exec) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                op: "matmul",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let data = map_range(self.rows, exec, |r| {
            let mut acc = Vec::new();
            for (k, a) in self.row(r) {
                acc.extend(other.row(k).map(|(c, b)| (c, a * b)));
            }
            compress_row(acc)
        });
        Ok(Self::from_sorted_rows(self.rows, other.cols, data))
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.kron_capped(other, DEFAULT_MAX_DIM)
    }

    /// Kronecker product with an explicit cap on either resulting dimension.
    pub fn kron_capped(&self, other: &Self, max_dim: usize) -> Result<Self> {
        let rows = checked_dim(self.rows, other.rows, max_dim)?;
        let cols = checked_dim(self.cols, other.cols, max_dim)?;
        let data = map_range(rows, Exec::default(), |r| {
            let (ra, rb) = (r / other.rows, r % other.rows);
            let mut out = Vec::new();
            for (ca, va) in self.row(ra) {
                for (cb, vb) in other.row(rb) {
                    let v = va * vb;
                    if keep(v) {
                        out.push((ca * other.cols + cb, v));
                    }
                }
            }
            out
        });
        Ok(Self::from_sorted_rows(rows, cols, data))
    }

    pub fn apply(&self, v: &SparseState) -> Result<SparseState> {
        if self.cols != v.dim() {
            return Err(Error::Shape {
                op: "apply",
                lhs: self.shape(),
                rhs: (v.dim(), 1),
            });
        }
        let mut out = std::collections::BTreeMap::new();
        for (r, c, a) in self.iter() {
            let x = v.get(c);
            if x != C64::new(0.0, 0.0) {
                *out.entry(r).or_insert(C64::new(0.0, 0.0)) += a * x;
            }
        }
        Ok(SparseState::from_map(self.rows, out))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum column sum of magnitudes.
    pub fn one_norm(&self) -> f64 {
        let mut sums = vec![0.0; self.cols];
        for (_, c, v) in self.iter() {
            sums[c] += v.norm();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Spectral norm (largest singular value) via a dense SVD.
    pub fn operator_norm(&self) -> Result<f64> {
        if self.rows.max(self.cols) > DENSE_FALLBACK_LIMIT {
            return Err(Error::Size {
                requested: self.rows.max(self.cols),
                max: DENSE_FALLBACK_LIMIT,
            });
        }
        if self.nnz() == 0 {
            return Ok(0.0);
        }
        let sv = self.to_dense().singular_values();
        Ok(sv.iter().copied().fold(0.0, f64::max))
    }

    /// Entrywise max-abs distance.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .max_abs_diff(&self.adjoint())
                .map(|d| d <= tol)
                .unwrap_or(false)
    }

    /// Keeps only entries whose row and column both satisfy `keep_index`.
    pub fn mask<F: Fn(usize) -> bool>(&self, keep_index: F) -> Self {
        let data = (0..self.rows)
            .map(|r| {
                if keep_index(r) {
                    self.row(r).filter(|&(c, _)| keep_index(c)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Self::from_sorted_rows(self.rows, self.cols, data)
    }

    /// Matrix exponential through the dense scaling-and-squaring Padé routine.
    pub fn expm(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape {
                op: "expm",
                lhs: self.shape(),
                rhs: self.shape(),
            });
        }
        if self.rows > DENSE_FALLBACK_LIMIT {
            return Err(Error::Size {
                requested: self.rows,
                max: DENSE_FALLBACK_LIMIT,
            });
        }
        Ok(Self::from_dense(&expm::expm_dense(&self.to_dense())))
    }

    /// Exponential of a diagonal matrix, computed entrywise.
    pub fn expm_diagonal(diag: &[C64]) -> Self {
        Self::diagonal(&diag.iter().map(|d| d.exp()).collect::<Vec<_>>())
    }

    /// Diagonal entries, or `None` if an off-diagonal entry is stored.
    pub fn diagonal_entries(&self) -> Option<Vec<C64>> {
        if !self.is_square() {
            return None;
        }
        let mut d = vec![C64::new(0.0, 0.0); self.rows];
        for (r, c, v) in self.iter() {
            if r != c {
                return None;
            }
            d[r] = v;
        }
        Some(d)
    }
}

fn checked_dim(a: usize, b: usize, max: usize) -> Result<usize> {
    match a.checked_mul(b) {
        Some(d) if d <= max => Ok(d),
        Some(d) => Err(Error::Size { requested: d, max }),
        None => Err(Error::Size {
            requested: usize::MAX,
            max,
        }),
    }
}

/// `A ⊗ B` under the engine's row-major flattening.
pub fn tensor_product(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator> {
    a.kron(b)
}

/// Kronecker product of a sequence of factors, left to right.
pub fn tensor_chain(factors: &[&SparseOperator], max_dim: usize) -> Result<SparseOperator> {
    let mut it = factors.iter();
    let first = match it.next() {
        Some(f) => (*f).clone(),
        None => return Ok(SparseOperator::identity(1)),
    };
    it.try_fold(first, |acc, f| acc.kron_capped(f, max_dim))
}

pub fn matrix_exponential(a: &SparseOperator) -> Result<SparseOperator> {
    a.expm()
}

fn check_square_pair(op: &'static str, a: &SparseOperator, b: &SparseOperator) -> Result<()> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::Shape {
            op,
            lhs: a.shape(),
            rhs: b.shape(),
        });
    }
    Ok(())
}

/// `AB + BA`.
pub fn anticommutator(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator> {
    check_square_pair("anticommutator", a, b)?;
    a.matmul(b)?.try_add(&b.matmul(a)?)
}

/// `AB - BA`.
pub fn commutator(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator> {
    check_square_pair("commutator", a, b)?;
    a.matmul(b)?.try_sub(&b.matmul(a)?)
}

pub fn apply_operator(a: &SparseOperator, v: &SparseState) -> Result<SparseState> {
    a.apply(v)
}

// Operator sugar for algebra-heavy code. These panic on shape mismatch;
// the fallible forms above return `Error::Shape` instead.

impl Add for &SparseOperator {
    type Output = SparseOperator;
    fn add(self, rhs: Self) -> SparseOperator {
        self.try_add(rhs).expect("operator addition")
    }
}

impl Sub for &SparseOperator {
    type Output = SparseOperator;
    fn sub(self, rhs: Self) -> SparseOperator {
        self.try_sub(rhs).expect("operator subtraction")
    }
}

impl Mul for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: Self) -> SparseOperator {
        self.matmul(rhs).expect("operator product")
    }
}

impl Mul<C64> for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: C64) -> SparseOperator {
        self.scale(rhs)
    }
}

impl Neg for &SparseOperator {
    type Output = SparseOperator;
    fn neg(self) -> SparseOperator {
        self.scale_real(-1.0)
    }
}
