//! Dense matrices over GF(2^m) and index-array permutations.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::gf::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
}

fn check_dim(expected: usize, got: usize) -> Result<(), LinalgError> {
    if expected != got {
        return Err(LinalgError::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Row-major dense matrix over a shared [`Field`].
#[derive(Clone)]
pub struct Matrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF(2^{})", self.rows, self.cols, self.field.degree())?;
        for r in 0..self.rows.min(16) {
            let row: Vec<String> = self.row(r).iter().take(16).map(|e| format!("{:3x}", e.value())).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Elem::ONE;
        }
        m
    }

    pub fn from_vec(
        field: &Arc<Field>,
        rows: usize,
        cols: usize,
        data: Vec<Elem>,
    ) -> Result<Self, LinalgError> {
        check_dim(rows * cols, data.len())?;
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &Arc<Field>, rows: &[Vec<Elem>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            check_dim(cols, row.len())?;
            data.extend_from_slice(row);
        }
        Self::from_vec(field, rows.len(), cols, data)
    }

    pub fn diagonal(field: &Arc<Field>, diag: &[Elem]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Matrix with independent uniform entries.
    pub fn random<R: Rng + ?Sized>(field: &Arc<Field>, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Uniform sample from GL(n, q) by rejecting singular draws.
    pub fn random_nonsingular<R: Rng + ?Sized>(field: &Arc<Field>, n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "random_nonsingular needs n >= 1");
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    /// Uniform full-rank `rows x cols` matrix, by rejection.
    pub fn random_full_rank<R: Rng + ?Sized>(
        field: &Arc<Field>,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        loop {
            let m = Self::random(field, rows, cols, rng);
            if m.rank() == rows.min(cols) {
                return m;
            }
        }
    }

    #[inline]
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .all(|(c, &v)| v == if r == c { Elem::ONE } else { Elem::ZERO })
            })
    }

    fn check_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(rhs)?;
        check_dim(self.cols, rhs.rows)?;
        let f = &self.field;
        let mut out = Matrix::zeros(&self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                f.axpy(dst, a, rhs.row(l));
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `v * self`.
    pub fn vec_mul(&self, v: &[Elem]) -> Result<Vec<Elem>, LinalgError> {
        check_dim(self.rows, v.len())?;
        let mut out = vec![Elem::ZERO; self.cols];
        for (l, &a) in v.iter().enumerate() {
            self.field.axpy(&mut out, a, self.row(l));
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<Matrix, LinalgError> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(LinalgError::IndexOutOfRange { index: bad, len: self.cols });
        }
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(cols.iter().map(|&c| row[c]));
        }
        Matrix::from_vec(&self.field, self.rows, cols.len(), data)
    }

    pub fn column_range(&self, start: usize, end: usize) -> Matrix {
        assert!(start <= end && end <= self.cols);
        let mut data = Vec::with_capacity(self.rows * (end - start));
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[start..end]);
        }
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: end - start,
            data,
        }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hconcat(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(rhs)?;
        check_dim(self.rows, rhs.rows)?;
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(rhs.row(r));
        }
        Matrix::from_vec(&self.field, self.rows, cols, data)
    }

    /// Gaussian elimination in place. Pivots are searched only in the first
    /// `pivot_cols` columns; returns the pivot columns in row order.
    fn eliminate(&mut self, pivot_cols: usize, reduced: bool) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.data[r * cols + col].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..cols {
                    self.data.swap(p * cols + c, row * cols + c);
                }
            }
            let inv = f.inv(self.data[row * cols + col]).expect("pivot is nonzero");
            f.scale(&mut self.data[row * cols + col..(row + 1) * cols], inv);
            let (head, tail) = self.data.split_at_mut(row * cols);
            let (pivot_row, below) = tail.split_at_mut(cols);
            for chunk in below.chunks_exact_mut(cols) {
                let c = chunk[col];
                f.axpy(&mut chunk[col..], c, &pivot_row[col..]);
            }
            if reduced {
                for chunk in head.chunks_exact_mut(cols) {
                    let c = chunk[col];
                    f.axpy(&mut chunk[col..], c, &pivot_row[col..]);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(self.cols, false).len()
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(self.cols, true);
        (m, pivots)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        let mut aug = self.hconcat(&Matrix::identity(&self.field, n))?;
        let pivots = aug.eliminate(n, true);
        if pivots.len() < n {
            return Err(LinalgError::Singular);
        }
        Ok(aug.column_range(n, 2 * n))
    }

    /// Invertible `P` (rows x rows) and `Q` (cols x cols) with
    /// `P * self * Q = [I_rank 0; 0 0]`, plus the rank.
    pub fn equivalence_form(&self) -> (Matrix, Matrix, usize) {
        let (rows, cols) = (self.rows, self.cols);
        let mut aug = self.hconcat(&Matrix::identity(&self.field, rows)).expect("same field");
        let pivots = aug.eliminate(cols, true);
        let rank = pivots.len();
        let p = aug.column_range(cols, cols + rows);
        let e = aug.column_range(0, cols);

        // Column operations on the RREF: clear non-pivot columns using the
        // pivot columns, then move pivots to the front.
        let f = &self.field;
        let mut qt = Matrix::identity(&self.field, cols);
        for j in (0..cols).filter(|j| !pivots.contains(j)) {
            for (i, &pc) in pivots.iter().enumerate() {
                let c = e.get(i, j);
                if !c.is_zero() {
                    // col_j -= c * col_pc, tracked as rows of Q^T.
                    let src = qt.row(pc).to_vec();
                    f.axpy(qt.row_mut(j), c, &src);
                }
            }
        }
        let mut order = pivots.clone();
        order.extend((0..cols).filter(|j| !pivots.contains(j)));
        let q = qt.transpose().select_columns(&order).expect("indices in range");
        (p, q, rank)
    }
}

/// Permutation of `0..n` stored as an index map. Applying it to a vector
/// `v` yields `w[i] = v[map[i]]`, i.e. `w = v * P` for the matching
/// permutation matrix `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    pub fn from_map(map: Vec<usize>) -> Result<Self, LinalgError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &i in &map {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(LinalgError::InvalidPermutation(n));
            }
        }
        Ok(Permutation { map })
    }

    /// Uniform permutation (Fisher-Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(rng);
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { map: inv }
    }

    pub fn apply<T: Copy>(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        check_dim(self.len(), v.len())?;
        Ok(self.map.iter().map(|&j| v[j]).collect())
    }

    pub fn apply_inverse<T: Copy + Default>(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        check_dim(self.len(), v.len())?;
        let mut out = vec![T::default(); v.len()];
        for (i, &j) in self.map.iter().enumerate() {
            out[j] = v[i];
        }
        Ok(out)
    }

    /// Permutes the columns of `m` the same way [`Permutation::apply`]
    /// permutes a row vector.
    pub fn apply_to_columns(&self, m: &Matrix) -> Result<Matrix, LinalgError> {
        check_dim(self.len(), m.cols())?;
        m.select_columns(&self.map)
    }
}

pub fn apply_permutation<T: Copy + Default>(
    v: &[T],
    p: &Permutation,
    inverse: bool,
) -> Result<Vec<T>, LinalgError> {
    if inverse {
        p.apply_inverse(v)
    } else {
        p.apply(v)
    }
}

/// Number of nonzero coordinates.
pub fn weight(v: &[Elem]) -> usize {
    v.iter().filter(|e| !e.is_zero()).count()
}
