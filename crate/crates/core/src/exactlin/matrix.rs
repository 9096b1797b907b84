//! Sparse column-major matrices over an exact field.

use std::fmt;

use super::scalar::{Field, Scalar};
use crate::Error;

/// A sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Dense scratch buffer for accumulating sparse linear combinations.
pub(crate) struct Accumulator {
    values: Vec<Option<Scalar>>,
    touched: Vec<usize>,
}

impl Accumulator {
    pub fn new(len: usize) -> Self {
        Accumulator {
            values: vec![None; len],
            touched: Vec::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, idx: usize, c: &Scalar) {
        match &mut self.values[idx] {
            Some(v) => *v = &*v + c,
            slot @ None => {
                *slot = Some(c.clone());
                self.touched.push(idx);
            }
        }
    }

    pub fn add_scaled(&mut self, v: &[(usize, Scalar)], c: &Scalar) {
        if c.is_one() {
            for (i, x) in v {
                self.add(*i, x);
            }
        } else {
            for (i, x) in v {
                self.add(*i, &(x * c));
            }
        }
    }

    /// Drains the buffer into a sorted sparse vector.
    pub fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            if let Some(v) = self.values[i].take() {
                if !v.is_zero() {
                    out.push((i, v));
                }
            }
        }
        self.touched.clear();
        out
    }
}

pub fn sparse_scale(v: &[(usize, Scalar)], c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// `a + c * b`, merging sorted supports.
pub fn sparse_axpy(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = &b[j].1 * c;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + &(&b[j].1 * c);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(field: Field, v: &[(usize, Scalar)], len: usize) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        if self.rows <= 12 && self.cols <= 12 {
            for r in 0..self.rows {
                let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        } else {
            writeln!(f, "  nnz = {}", self.nnz())?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let one = field.one();
        Matrix {
            field,
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, one.clone())]).collect(),
        }
    }

    pub fn scalar_identity(n: usize, c: &Scalar) -> Self {
        let field = c.field();
        if c.is_zero() {
            return Self::zeros(field, n, n);
        }
        Matrix {
            field,
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, c.clone())]).collect(),
        }
    }

    /// Builds from columns; each column must be a valid sparse vector.
    pub fn from_columns(field: Field, rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.iter().all(|(i, x)| *i < rows && !x.is_zero())));
        debug_assert!(columns.iter().all(|c| c.windows(2).all(|w| w[0].0 < w[1].0)));
        Matrix {
            field,
            rows,
            cols: columns.len(),
            columns,
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, Error> {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            buckets[c].push((r, v));
        }
        let mut acc = Accumulator::new(rows);
        let columns = buckets
            .into_iter()
            .map(|b| {
                for (r, v) in &b {
                    acc.add(*r, v);
                }
                acc.drain()
            })
            .collect();
        Ok(Matrix {
            field,
            rows,
            cols,
            columns,
        })
    }

    /// Row-major dense input.
    pub fn from_dense(field: Field, rows: &[Vec<Scalar>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut columns = vec![Vec::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    columns[c].push((r, v.clone()));
                }
            }
        }
        Matrix {
            field,
            rows: nrows,
            cols: ncols,
            columns,
        }
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_dense(field, &dense)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, Scalar)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    /// `self * v` for a sparse vector `v` of length `cols`.
    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new(self.rows);
        for (i, x) in v {
            acc.add_scaled(&self.columns[*i], x);
        }
        acc.drain()
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut acc = Accumulator::new(self.rows);
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                for (i, x) in col {
                    acc.add_scaled(&self.columns[*i], x);
                }
                acc.drain()
            })
            .collect();
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    /// Panicking product for internally consistent shapes.
    pub fn compose(&self, rhs: &Matrix) -> Matrix {
        self.mul(rhs).expect("composition of incompatible matrices")
    }

    pub fn transpose(&self) -> Matrix {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                columns[*r].push((c, v.clone()));
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|col| sparse_scale(col, c)).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.field.from_i64(-1))
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &Matrix) -> Result<Matrix, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| sparse_axpy(a, c, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.axpy(&self.field.one(), other).expect("shape mismatch in add")
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.axpy(&self.field.from_i64(-1), other)
            .expect("shape mismatch in sub")
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols + other.cols,
            columns,
        }
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let off = self.rows;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|(i, v)| (i + off, v.clone())));
                c
            })
            .collect();
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            columns,
        }
    }

    /// Places `block` at `(row_off, col_off)` inside a zero matrix of the given shape.
    pub fn embed(&self, rows: usize, cols: usize, row_off: usize, col_off: usize) -> Matrix {
        assert!(row_off + self.rows <= rows && col_off + self.cols <= cols);
        let mut columns = vec![Vec::new(); cols];
        for (c, col) in self.columns.iter().enumerate() {
            columns[col_off + c] = col.iter().map(|(r, v)| (r + row_off, v.clone())).collect();
        }
        Matrix {
            field: self.field,
            rows,
            cols,
            columns,
        }
    }

    /// Assembles a block matrix; `None` blocks are zero. Block sizes come from
    /// `row_dims` and `col_dims`.
    pub fn from_blocks(
        field: Field,
        row_dims: &[usize],
        col_dims: &[usize],
        blocks: &[Vec<Option<&Matrix>>],
    ) -> Matrix {
        let rows: usize = row_dims.iter().sum();
        let mut columns: Vec<SparseVec> = Vec::with_capacity(col_dims.iter().sum());
        for (bj, &cd) in col_dims.iter().enumerate() {
            for c in 0..cd {
                let mut col = Vec::new();
                let mut off = 0;
                for (bi, &rd) in row_dims.iter().enumerate() {
                    if let Some(b) = blocks[bi][bj] {
                        debug_assert_eq!((b.rows, b.cols), (rd, cd));
                        col.extend(b.columns[c].iter().map(|(r, v)| (r + off, v.clone())));
                    }
                    off += rd;
                }
                columns.push(col);
            }
        }
        Matrix {
            field,
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn block_diag(field: Field, blocks: &[&Matrix]) -> Matrix {
        let rows: Vec<usize> = blocks.iter().map(|b| b.rows).collect();
        let cols: Vec<usize> = blocks.iter().map(|b| b.cols).collect();
        let grid: Vec<Vec<Option<&Matrix>>> = (0..blocks.len())
            .map(|i| (0..blocks.len()).map(|j| if i == j { Some(blocks[i]) } else { None }).collect())
            .collect();
        Matrix::from_blocks(field, &rows, &cols, &grid)
    }

    /// Selects the listed columns in order.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: idx.len(),
            columns: idx.iter().map(|&c| self.columns[c].clone()).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs` with the row-major index convention
    /// `(i, j) ↦ i * rhs_dim + j`.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let rows = self.rows * rhs.rows;
        let mut columns = Vec::with_capacity(self.cols * rhs.cols);
        for a in &self.columns {
            for b in &rhs.columns {
                let mut col = Vec::with_capacity(a.len() * b.len());
                for (i, x) in a {
                    for (j, y) in b {
                        col.push((i * rhs.rows + j, x * y));
                    }
                }
                columns.push(col);
            }
        }
        Matrix {
            field: self.field,
            rows,
            cols: self.cols * rhs.cols,
            columns,
        }
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_and_transpose() {
        let q = Field::Rationals;
        let a = Matrix::from_i64_rows(q, &[&[1, 2], &[0, 1], &[3, 0]]);
        let b = Matrix::from_i64_rows(q, &[&[1, 0, 1], &[0, 1, 1]]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, Matrix::from_i64_rows(q, &[&[1, 2, 3], &[0, 1, 1], &[3, 0, 3]]));
        assert_eq!(ab.transpose().transpose(), ab);
        assert!(b.mul(&b).is_err());
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let q = Field::Rationals;
        let m = Matrix::from_triplets(
            q,
            2,
            2,
            vec![(0, 0, q.from_i64(1)), (0, 0, q.from_i64(-1)), (1, 1, q.from_i64(2))],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert!(Matrix::from_triplets(q, 1, 1, vec![(1, 0, q.one())]).is_err());
    }

    #[test]
    fn kron_matches_index_convention() {
        let q = Field::Rationals;
        let a = Matrix::from_i64_rows(q, &[&[0, 1], &[1, 0]]);
        let i = Matrix::identity(q, 2);
        let k = a.kron(&i);
        // (0,1) -> (1,1): index 1 -> 3
        assert_eq!(k.get(3, 1), q.one());
    }
}
