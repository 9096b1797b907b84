//! Free `A`-bimodules `⊕_k A ⊗ V_k ⊗ A` and bimodule maps between them,
//! stored by the images of generators.
//!
//! Block `k` has `ranks[k]` generators; the basis element `a ⊗ g ⊗ b` of
//! block `k` sits at `d² · first[k] + (a · ranks[k] + g) · d + b`. Global
//! generator numbers run through the blocks in order. The trace
//! `tr(A ⊗ V ⊗ A) = V ⊗ A` uses the index `G · d + c` for the class of
//! `1 ⊗ G ⊗ c`.

use crate::algebra::FinAlgebra;
use crate::exactlin::{sparse_axpy, Matrix, Scalar, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeLayout {
    pub d: usize,
    pub ranks: Vec<usize>,
    /// `first[k]`: global number of the first generator of block `k`.
    first: Vec<usize>,
    block_of: Vec<usize>,
}

impl FreeLayout {
    pub fn new(d: usize, ranks: Vec<usize>) -> Self {
        let mut first = Vec::with_capacity(ranks.len());
        let mut block_of = Vec::new();
        let mut acc = 0;
        for (k, &r) in ranks.iter().enumerate() {
            first.push(acc);
            block_of.extend(std::iter::repeat_n(k, r));
            acc += r;
        }
        FreeLayout { d, ranks, first, block_of }
    }

    pub fn single(d: usize, rank: usize) -> Self {
        Self::new(d, vec![rank])
    }

    pub fn num_gens(&self) -> usize {
        self.block_of.len()
    }

    pub fn dim(&self) -> usize {
        self.d * self.d * self.num_gens()
    }

    pub fn trace_dim(&self) -> usize {
        self.d * self.num_gens()
    }

    pub fn first(&self, block: usize) -> usize {
        self.first[block]
    }

    pub fn index(&self, a: usize, gen: usize, b: usize) -> usize {
        let k = self.block_of[gen];
        let d = self.d;
        d * d * self.first[k] + (a * self.ranks[k] + gen - self.first[k]) * d + b
    }

    /// Inverse of [`FreeLayout::index`].
    pub fn split(&self, idx: usize) -> (usize, usize, usize) {
        let d = self.d;
        let k = self.block_of[idx / (d * d)];
        let local = idx - d * d * self.first[k];
        let (ag, b) = (local / d, local % d);
        (ag / self.ranks[k], self.first[k] + ag % self.ranks[k], b)
    }

    /// `1 ⊗ G ⊗ 1`.
    pub fn generator(&self, alg: &FinAlgebra, gen: usize) -> SparseVec {
        let u = alg.unit();
        let mut v: SparseVec = u
            .iter()
            .flat_map(|(a, x)| u.iter().map(move |(b, y)| (self.index(*a, gen, *b), x * y)))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    /// `x · v · y` for `x, y ∈ A`.
    pub fn act(&self, alg: &FinAlgebra, x: &[(usize, Scalar)], v: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = crate::exactlin::Accumulator::new(self.dim());
        for (idx, c) in v {
            let (a, g, b) = self.split(*idx);
            let xa = alg.mul(x, &[(a, c.clone())]);
            let by = alg.mul(&[(b, alg.field().one())], y);
            for (a2, s) in &xa {
                for (b2, t) in &by {
                    acc.add(self.index(*a2, g, *b2), &(s * t));
                }
            }
        }
        acc.drain()
    }

    /// The class of `v` in the trace.
    pub fn trace(&self, alg: &FinAlgebra, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = crate::exactlin::Accumulator::new(self.trace_dim());
        for (idx, c) in v {
            let (a, g, b) = self.split(*idx);
            for (e, s) in alg.basis_product(b, a) {
                acc.add(g * self.d + e, &(s * c));
            }
        }
        acc.drain()
    }

    /// `a ⊗ G ⊗ b ↦ (x a) ⊗ G ⊗ b` or `a ⊗ G ⊗ (b x)` for a basis element `x`.
    pub fn action_matrix(&self, alg: &FinAlgebra, x: usize, left: bool) -> Matrix {
        let f = alg.field();
        let ex = vec![(x, f.one())];
        let one = alg.unit().clone();
        let cols = (0..self.dim())
            .map(|i| {
                let e = vec![(i, f.one())];
                if left {
                    self.act(alg, &ex, &e, &one)
                } else {
                    self.act(alg, &one, &e, &ex)
                }
            })
            .collect();
        Matrix::from_columns(f, self.dim(), cols)
    }
}

/// A bimodule map out of a free bimodule, by the images of its generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeMap {
    pub images: Vec<SparseVec>,
}

impl FreeMap {
    pub fn zero(gens: usize) -> Self {
        FreeMap { images: vec![Vec::new(); gens] }
    }

    /// Reads generator images off a `k`-linear matrix.
    pub fn from_matrix(alg: &FinAlgebra, src: &FreeLayout, m: &Matrix) -> Self {
        FreeMap {
            images: (0..src.num_gens()).map(|g| m.apply(&src.generator(alg, g))).collect(),
        }
    }

    /// `f(v)` for a general `v`, using `f(a ⊗ G ⊗ b) = a f(G) b`.
    pub fn apply(&self, alg: &FinAlgebra, src: &FreeLayout, tgt: &FreeLayout, v: &[(usize, Scalar)]) -> SparseVec {
        let f = alg.field();
        let mut acc = crate::exactlin::Accumulator::new(tgt.dim());
        for (idx, c) in v {
            let (a, g, b) = src.split(*idx);
            let w = tgt.act(alg, &[(a, c.clone())], &self.images[g], &[(b, f.one())]);
            acc.add_scaled(&w, &f.one());
        }
        acc.drain()
    }

    pub fn matrix(&self, alg: &FinAlgebra, src: &FreeLayout, tgt: &FreeLayout) -> Matrix {
        let f = alg.field();
        let cols = (0..src.dim()).map(|i| self.apply(alg, src, tgt, &[(i, f.one())])).collect();
        Matrix::from_columns(f, tgt.dim(), cols)
    }

    /// `tr(f) : tr(src) -> tr(tgt)`.
    pub fn trace(&self, alg: &FinAlgebra, src: &FreeLayout, tgt: &FreeLayout) -> Matrix {
        let f = alg.field();
        let cols = (0..src.num_gens())
            .flat_map(|g| (0..src.d).map(move |c| (g, c)))
            .map(|(g, c)| {
                let w = tgt.act(alg, alg.unit(), &self.images[g], &[(c, f.one())]);
                tgt.trace(alg, &w)
            })
            .collect();
        Matrix::from_columns(f, tgt.trace_dim(), cols)
    }

    /// `self ∘ first`.
    pub fn after(&self, alg: &FinAlgebra, first: &FreeMap, mid: &FreeLayout, tgt: &FreeLayout) -> FreeMap {
        FreeMap {
            images: first.images.iter().map(|v| self.apply(alg, mid, tgt, v)).collect(),
        }
    }

    pub fn sub(&self, field: crate::exactlin::Field, other: &FreeMap) -> FreeMap {
        let minus = -field.one();
        FreeMap {
            images: self.images.iter().zip(&other.images).map(|(a, b)| sparse_axpy(a, &minus, b)).collect(),
        }
    }

    pub fn negate(&self, field: crate::exactlin::Field) -> FreeMap {
        FreeMap::zero(self.images.len()).sub(field, self)
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| v.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;

    #[test]
    fn layout_round_trip() {
        let l = FreeLayout::new(3, vec![2, 0, 4]);
        assert_eq!(l.dim(), 54);
        for idx in 0..l.dim() {
            let (a, g, b) = l.split(idx);
            assert_eq!(l.index(a, g, b), idx);
        }
    }

    #[test]
    fn actions_commute_and_trace_kills_commutators() {
        let a = FinAlgebra::matrix_algebra(Field::Rationals, 2);
        let l = FreeLayout::new(4, vec![1, 2]);
        for x in 0..4 {
            let lx = l.action_matrix(&a, x, true);
            for y in 0..4 {
                let ry = l.action_matrix(&a, y, false);
                assert_eq!(lx.compose(&ry), ry.compose(&lx));
            }
            let f = a.field();
            for i in 0..l.dim() {
                let e = vec![(i, f.one())];
                assert_eq!(l.trace(&a, &lx.apply(&e)), l.trace(&a, &l.action_matrix(&a, x, false).apply(&e)));
            }
        }
    }
}
