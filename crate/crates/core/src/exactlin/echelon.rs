//! Echelon forms, subspaces, quotients and linear solves.
//!
//! Rows are kept with leading (minimum) index normalized to one. An optional
//! label vector rides along with every row so that reductions can report the
//! combination of inserted vectors they used.

use std::collections::BTreeMap;

use super::matrix::{sparse_axpy, sparse_scale, Matrix, SparseVec};
use super::scalar::{Field, Scalar};
use crate::Error;

const NO_ROW: usize = usize::MAX;

/// Working vector for reductions.
struct Work(BTreeMap<usize, Scalar>);

impl Work {
    fn new(v: &[(usize, Scalar)]) -> Self {
        Work(v.iter().cloned().collect())
    }

    /// Subtracts `c * row` where `row[0]` is the current minimum entry.
    fn eliminate(&mut self, c: &Scalar, row: &[(usize, Scalar)]) {
        for (j, x) in &row[1..] {
            let d = -(x * c);
            match self.0.get_mut(j) {
                Some(v) => {
                    *v = &*v + &d;
                    if v.is_zero() {
                        self.0.remove(j);
                    }
                }
                None => {
                    self.0.insert(*j, d);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    row_of: Vec<usize>,
    rows: Vec<SparseVec>,
    labels: Option<Vec<SparseVec>>,
}

impl Echelon {
    pub fn new(field: Field, dim: usize) -> Self {
        Echelon {
            field,
            dim,
            row_of: vec![NO_ROW; dim],
            rows: Vec::new(),
            labels: None,
        }
    }

    pub fn new_labeled(field: Field, dim: usize) -> Self {
        Echelon {
            labels: Some(Vec::new()),
            ..Self::new(field, dim)
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    /// Reduces `v`. With `full` every pivot entry is cleared, otherwise only
    /// until the leading entry is not a pivot. Returns the residual and the
    /// coefficients `c_p` with `v = residual + Σ c_p rows[p]`.
    fn reduce_core(&self, v: &[(usize, Scalar)], full: bool) -> (SparseVec, Vec<(usize, Scalar)>) {
        let mut work = Work::new(v);
        let mut residual = Vec::new();
        let mut used = Vec::new();
        while let Some((i, c)) = work.0.pop_first() {
            let r = self.row_of[i];
            if r == NO_ROW {
                residual.push((i, c));
                if !full {
                    break;
                }
            } else {
                work.eliminate(&c, &self.rows[r]);
                used.push((r, c));
            }
        }
        residual.extend(work.0);
        (residual, used)
    }

    fn combine_labels(&self, used: &[(usize, Scalar)]) -> SparseVec {
        let labels = self.labels.as_ref().expect("echelon is not labeled");
        let mut terms: Vec<(usize, Scalar)> = used
            .iter()
            .flat_map(|(r, c)| labels[*r].iter().map(move |(i, x)| (*i, x * c)))
            .collect();
        terms.sort_by_key(|(i, _)| *i);
        let mut out: SparseVec = Vec::with_capacity(terms.len());
        for (i, x) in terms {
            match out.last_mut() {
                Some((j, y)) if *j == i => *y = &*y + &x,
                _ => out.push((i, x)),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        out
    }

    fn push_row(&mut self, mut row: SparseVec, label: Option<SparseVec>) {
        let lead = row[0].1.clone();
        if !lead.is_one() {
            let inv = lead.inv();
            row = sparse_scale(&row, &inv);
            if let (Some(labels), Some(l)) = (self.labels.as_mut(), label) {
                labels.push(sparse_scale(&l, &inv));
            }
        } else if let (Some(labels), Some(l)) = (self.labels.as_mut(), label) {
            labels.push(l);
        }
        self.row_of[row[0].0] = self.rows.len();
        self.rows.push(row);
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> bool {
        assert!(self.labels.is_none(), "labeled echelon needs insert_labeled");
        let (res, _) = self.reduce_core(v, false);
        if res.is_empty() {
            return false;
        }
        self.push_row(res, None);
        true
    }

    /// Inserts `v` carrying `label`. If `v` is dependent, returns the label
    /// combination that maps to zero.
    pub fn insert_labeled(&mut self, v: &[(usize, Scalar)], label: SparseVec) -> Option<SparseVec> {
        let (res, used) = self.reduce_core(v, false);
        let acc = self.combine_labels(&used);
        let new_label = sparse_axpy(&label, &self.field.from_i64(-1), &acc);
        if res.is_empty() {
            return Some(new_label);
        }
        self.push_row(res, Some(new_label));
        None
    }

    /// Normal form of `v` modulo the row space.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        self.reduce_core(v, true).0
    }

    /// Full reduction together with the label combination of the rows used.
    pub fn reduce_labeled(&self, v: &[(usize, Scalar)]) -> (SparseVec, SparseVec) {
        let (res, used) = self.reduce_core(v, true);
        (res, self.combine_labels(&used))
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Back-substitutes into reduced row echelon form.
    pub fn into_subspace(self) -> Subspace {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        let mut reduced = Echelon::new(self.field, self.dim);
        let mut rows = self.rows;
        for &r in &order {
            let row = std::mem::take(&mut rows[r]);
            let lead = row[0].clone();
            let (tail, _) = reduced.reduce_core(&row[1..], true);
            let mut full = Vec::with_capacity(tail.len() + 1);
            full.push(lead);
            full.extend(tail);
            reduced.row_of[full[0].0] = reduced.rows.len();
            reduced.rows.push(full);
        }
        let mut rows = reduced.rows;
        rows.sort_by_key(|r| r[0].0);
        Subspace::from_rref(self.field, self.dim, rows)
    }
}

/// A subspace of `field^ambient` held in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    row_of: Vec<usize>,
}

impl Subspace {
    fn from_rref(field: Field, ambient: usize, rows: Vec<SparseVec>) -> Self {
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        let mut row_of = vec![NO_ROW; ambient];
        for (k, &p) in pivots.iter().enumerate() {
            row_of[p] = k;
        }
        Subspace {
            field,
            ambient,
            rows,
            pivots,
            row_of,
        }
    }

    pub fn zero(field: Field, ambient: usize) -> Self {
        Self::from_rref(field, ambient, Vec::new())
    }

    pub fn span(field: Field, ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new(field, ambient);
        for v in vectors {
            e.insert(&v);
        }
        e.into_subspace()
    }

    pub fn column_space(m: &Matrix) -> Self {
        Self::span(m.field(), m.rows(), m.columns().iter().cloned())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient, self.rows.clone())
    }

    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut work = Work::new(v);
        let mut residual = Vec::new();
        while let Some((i, c)) = work.0.pop_first() {
            let r = self.row_of[i];
            if r == NO_ROW {
                residual.push((i, c));
            } else {
                work.eliminate(&c, &self.rows[r]);
            }
        }
        residual
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Coordinates of `v` in the RREF basis; `None` if `v` is outside.
    pub fn coordinates(&self, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        if !self.contains(v) {
            return None;
        }
        Some(
            v.iter()
                .filter_map(|(i, x)| {
                    let r = self.row_of[*i];
                    (r != NO_ROW).then(|| (r, x.clone()))
                })
                .collect(),
        )
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.field,
            self.ambient,
            self.rows.iter().chain(other.rows.iter()).cloned(),
        )
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        Subspace::span(self.field, m.rows(), self.rows.iter().map(|r| m.apply(r)))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // kernel of [A | -B] gives pairs with A x = B y
        let a = self.basis_matrix();
        let b = other.basis_matrix().neg();
        let k = kernel_basis(&a.hstack(&b));
        let n = self.dim();
        Subspace::span(
            self.field,
            self.ambient,
            k.into_iter().map(|v| {
                let x: SparseVec = v.into_iter().filter(|(i, _)| *i < n).collect();
                a.apply(&x)
            }),
        )
    }
}

/// `field^ambient / sub`, with basis the non-pivot coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    sub: Subspace,
    free: Vec<usize>,
    pos: Vec<usize>,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Self {
        let mut pos = vec![NO_ROW; sub.ambient];
        let mut free = Vec::new();
        for i in 0..sub.ambient {
            if sub.row_of[i] == NO_ROW {
                pos[i] = free.len();
                free.push(i);
            }
        }
        Quotient { sub, free, pos }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient
    }

    pub fn subspace(&self) -> &Subspace {
        &self.sub
    }

    /// Class of `v` in quotient coordinates.
    pub fn project(&self, v: &[(usize, Scalar)]) -> SparseVec {
        self.sub
            .reduce(v)
            .into_iter()
            .map(|(i, x)| (self.pos[i], x))
            .collect()
    }

    pub fn projection(&self) -> Matrix {
        let cols = (0..self.ambient())
            .map(|i| self.project(&[(i, self.sub.field.one())]))
            .collect();
        Matrix::from_columns(self.sub.field, self.dim(), cols)
    }

    /// Lifts a quotient vector to its canonical representative.
    pub fn lift(&self, v: &[(usize, Scalar)]) -> SparseVec {
        v.iter().map(|(i, x)| (self.free[*i], x.clone())).collect()
    }

    pub fn lift_matrix(&self) -> Matrix {
        let one = self.sub.field.one();
        let cols = self.free.iter().map(|&i| vec![(i, one.clone())]).collect();
        Matrix::from_columns(self.sub.field, self.ambient(), cols)
    }

    /// Matrix of the map induced by `m` between quotients; errors if `m`
    /// does not carry `self`'s subspace into `target`'s.
    pub fn induced(&self, m: &Matrix, target: &Quotient) -> Result<Matrix, Error> {
        for r in self.sub.basis() {
            if !target.sub.contains(&m.apply(r)) {
                return Err(Error::Audit("map does not preserve the quotiented subspace".into()));
            }
        }
        let cols = self.free.iter().map(|&i| target.project(m.column(i))).collect();
        Ok(Matrix::from_columns(self.sub.field, target.dim(), cols))
    }
}

/// Solves `m x = b` for many right-hand sides.
#[derive(Clone, Debug)]
pub struct Solver {
    ech: Echelon,
    cols: usize,
}

impl Solver {
    pub fn new(m: &Matrix) -> Self {
        let mut ech = Echelon::new_labeled(m.field(), m.rows());
        let one = m.field().one();
        for (k, c) in m.columns().iter().enumerate() {
            ech.insert_labeled(c, vec![(k, one.clone())]);
        }
        Solver { ech, cols: m.cols() }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn solve(&self, b: &[(usize, Scalar)]) -> Option<SparseVec> {
        let (res, x) = self.ech.reduce_labeled(b);
        debug_assert!(x.last().is_none_or(|(i, _)| *i < self.cols));
        res.is_empty().then_some(x)
    }

    /// Solves `m X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        let cols = b
            .columns()
            .iter()
            .map(|c| self.solve(c))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_columns(b.field(), self.cols, cols))
    }
}

pub fn rank(m: &Matrix) -> usize {
    // eliminate along the shorter side
    let t;
    let m = if m.rows() < m.cols() {
        t = m.transpose();
        &t
    } else {
        m
    };
    let mut e = Echelon::new(m.field(), m.rows());
    for c in m.columns() {
        e.insert(c);
        if e.rank() == m.rows() {
            break;
        }
    }
    e.rank()
}

pub fn kernel_basis(m: &Matrix) -> Vec<SparseVec> {
    let mut ech = Echelon::new_labeled(m.field(), m.rows());
    let one = m.field().one();
    m.columns()
        .iter()
        .enumerate()
        .filter_map(|(k, c)| ech.insert_labeled(c, vec![(k, one.clone())]))
        .collect()
}

pub fn kernel(m: &Matrix) -> Subspace {
    Subspace::span(m.field(), m.cols(), kernel_basis(m))
}

/// A basis of the column space drawn from the columns themselves.
pub fn image_basis(m: &Matrix) -> Vec<SparseVec> {
    let mut e = Echelon::new(m.field(), m.rows());
    m.columns()
        .iter()
        .filter(|c| e.insert(c))
        .cloned()
        .collect()
}

pub fn solve(m: &Matrix, b: &[(usize, Scalar)]) -> Option<SparseVec> {
    Solver::new(m).solve(b)
}

/// Two-sided inverse of a square matrix.
pub fn inverse(m: &Matrix) -> Result<Matrix, Error> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    Solver::new(m)
        .solve_matrix(&Matrix::identity(m.field(), m.rows()))
        .ok_or_else(|| Error::Audit("matrix is singular".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn rank_and_kernel_of_small_matrix() {
        let m = Matrix::from_i64_rows(q(), &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).is_empty());
    }

    #[test]
    fn quotient_projection_kills_subspace() {
        let f = q();
        let s = Subspace::span(f, 3, vec![vec![(0, f.one()), (2, f.from_i64(2))]]);
        let quo = Quotient::new(s.clone());
        assert_eq!(quo.dim(), 2);
        let p = quo.projection();
        assert!(p.apply(&s.basis()[0]).is_empty());
        // lift then project is the identity
        let id = p.compose(&quo.lift_matrix());
        assert_eq!(id, Matrix::identity(f, 2));
    }

    #[test]
    fn singular_inverse_is_reported() {
        let m = Matrix::from_i64_rows(q(), &[&[1, 1], &[1, 1]]);
        assert!(inverse(&m).is_err());
        let m = Matrix::from_i64_rows(q(), &[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.compose(&inv), Matrix::identity(q(), 2));
    }

    #[test]
    fn intersection_of_planes() {
        let f = q();
        let e = |i: usize| vec![(i, f.one())];
        let a = Subspace::span(f, 3, vec![e(0), e(1)]);
        let b = Subspace::span(f, 3, vec![e(1), e(2)]);
        let c = a.intersection(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(1)));
    }

    fn small_matrix(p: u64) -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |xs| {
                let f = if p == 0 { Field::Rationals } else { Field::Prime(p) };
                let rows: Vec<Vec<Scalar>> =
                    xs.chunks(c).map(|row| row.iter().map(|&x| f.from_i64(x)).collect()).collect();
                Matrix::from_dense(f, &rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix(0)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.apply(v).is_empty());
            }
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn rank_nullity_mod_three(m in small_matrix(3)) {
            prop_assert_eq!(rank(&m) + kernel_basis(&m).len(), m.cols());
        }

        #[test]
        fn solve_recovers_image_vectors(m in small_matrix(0), seed in 0usize..5) {
            let b = m.column(seed % m.cols()).to_vec();
            let x = solve(&m, &b).expect("column is in the image");
            prop_assert_eq!(m.apply(&x), b);
        }

        #[test]
        fn rref_subspace_is_canonical(m in small_matrix(5)) {
            let s1 = Subspace::column_space(&m);
            let mut cols = m.columns().to_vec();
            cols.reverse();
            let s2 = Subspace::span(m.field(), m.rows(), cols);
            prop_assert_eq!(s1, s2);
        }
    }
}
