//! The filtered cyclic object `Ã_#`, its quotient `Ā_# = Ã_#/F²`, and the
//! short exact sequence `0 -> j_!M^Δ_# -> Ā_# -> A_# -> 0`.

use std::collections::HashMap;

use rayon::prelude::*;

use super::extension::SquareZeroExtension;
use crate::algebra::FinAlgebra;
use crate::cyclic_bimod::{j_shriek, simplicial_m};
use crate::cyclic_space::{build_a_sharp, CyclicMap, CyclicVectorSpace};
use crate::exactlin::{rank, Matrix, Scalar, SparseVec};
use crate::lambda_cat::CycMor;
use crate::Error;

/// Basis of one object of a truncated tensor power: the pure tensors of
/// weight at most `level`, in increasing order of their full index.
#[derive(Clone, Debug)]
pub struct TensorBasis {
    pub tensors: Vec<Vec<usize>>,
    pub weights: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl TensorBasis {
    fn new(dim: usize, weight: &[usize], n: usize, level: usize) -> Self {
        let mut tensors = Vec::new();
        let mut cur = Vec::with_capacity(n);
        enumerate(dim, weight, n, level, &mut cur, &mut tensors);
        let weights = tensors.iter().map(|t| t.iter().map(|&x| weight[x]).sum()).collect();
        let index = tensors.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        TensorBasis { tensors, weights, index }
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn position(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t).copied()
    }
}

fn enumerate(dim: usize, weight: &[usize], n: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for x in 0..dim {
        if weight[x] <= budget {
            cur.push(x);
            enumerate(dim, weight, n, budget - weight[x], cur, out);
            cur.pop();
        }
    }
}

/// `B^{⊗n} / F^{level+1}` for an algebra `B` with a multiplicative weight
/// grading of its basis, as a cyclic vector space.
#[derive(Clone, Debug)]
pub struct TruncatedSharp {
    pub space: CyclicVectorSpace,
    /// `bases[n-1]` describes the object `[n]`.
    pub bases: Vec<TensorBasis>,
    pub level: usize,
}

fn truncated_map(b: &FinAlgebra, weight: &[usize], level: usize, bases: &[TensorBasis], f: &CycMor) -> Matrix {
    let field = b.field();
    let fibers = f.fibers();
    let src = &bases[f.source() - 1];
    let tgt = &bases[f.target() - 1];
    let cols = src
        .tensors
        .iter()
        .map(|t| {
            let factors: Vec<SparseVec> = fibers
                .iter()
                .map(|fib| {
                    let mut p = b.unit().clone();
                    for &x in fib {
                        p = b.mul(&p, &[(t[x], field.one())]);
                    }
                    p
                })
                .collect();
            let mut terms: Vec<(Vec<usize>, usize, Scalar)> = vec![(Vec::new(), 0, field.one())];
            for v in &factors {
                let mut next = Vec::new();
                for (pre, w, c) in &terms {
                    for (j, y) in v {
                        let w2 = w + weight[*j];
                        if w2 <= level {
                            let mut p = pre.clone();
                            p.push(*j);
                            next.push((p, w2, c * y));
                        }
                    }
                }
                terms = next;
            }
            let mut col: Vec<(usize, Scalar)> = Vec::new();
            for (p, _, c) in terms {
                let r = tgt.position(&p).expect("weight-bounded tensors are in the basis");
                col.push((r, c));
            }
            col.sort_by_key(|(r, _)| *r);
            let mut merged: SparseVec = Vec::with_capacity(col.len());
            for (r, c) in col {
                match merged.last_mut() {
                    Some((r0, c0)) if *r0 == r => *c0 = &*c0 + &c,
                    _ => merged.push((r, c)),
                }
            }
            merged.retain(|(_, c)| !c.is_zero());
            merged
        })
        .collect();
    Matrix::from_columns(field, tgt.len(), cols)
}

/// Checks that the weight is multiplicative in the sense that products of
/// basis elements of total weight `w` only involve basis elements of weight
/// at least `w`, and that the unit has weight-zero leading part.
fn weight_is_filtration(b: &FinAlgebra, weight: &[usize]) -> bool {
    let d = b.dim();
    (0..d).all(|i| (0..d).all(|j| b.basis_product(i, j).iter().all(|(k, _)| weight[*k] >= weight[i] + weight[j])))
}

pub fn truncated_sharp(b: &FinAlgebra, weight: &[usize], level: usize, n_max: usize) -> Result<TruncatedSharp, Error> {
    if weight.len() != b.dim() {
        return Err(Error::DimensionMismatch("one weight per basis element".into()));
    }
    if !weight_is_filtration(b, weight) {
        return Err(Error::Invalid("the weights do not define a multiplicative filtration".into()));
    }
    let bases: Vec<TensorBasis> = (1..=n_max).into_par_iter().map(|n| TensorBasis::new(b.dim(), weight, n, level)).collect();
    let dims = bases.iter().map(|x| x.len()).collect();
    let space = CyclicVectorSpace::from_generators(b.field(), dims, |f| truncated_map(b, weight, level, &bases, f))?;
    Ok(TruncatedSharp { space, bases, level })
}

/// `Ã_#` with the filtration `F^k` spanned by tensors with at least `k`
/// factors in `M`.
#[derive(Clone, Debug)]
pub struct FilteredSharp {
    pub space: CyclicVectorSpace,
    /// `weights[n-1][i]`: number of `M` factors in basis tensor `i` of `[n]`.
    pub weights: Vec<Vec<usize>>,
}

impl FilteredSharp {
    /// Basis indices spanning `F^k` on `[n]`.
    pub fn filtration(&self, n: usize, k: usize) -> Vec<usize> {
        (0..self.space.dim(n)).filter(|&i| self.weights[n - 1][i] >= k).collect()
    }

    /// Every generator matrix maps `F^k` into `F^k`, for `k ≤ max_k`.
    pub fn audit_preserved(&self, max_k: usize) -> Result<(), Error> {
        let e = &self.space;
        let check = |m: &Matrix, s: usize, t: usize, what: String| -> Result<(), Error> {
            for (c, col) in m.columns().iter().enumerate() {
                let w = self.weights[s - 1][c];
                for (r, _) in col {
                    if self.weights[t - 1][*r] < w.min(max_k) {
                        return Err(Error::Audit(format!("{what} leaves F^{}", w.min(max_k))));
                    }
                }
            }
            Ok(())
        };
        for n in 1..=e.n_max() {
            check(e.rotation(n), n, n, format!("t_{n}"))?;
            if n < e.n_max() {
                for i in 0..=n {
                    check(e.face(n, i), n + 1, n, format!("δ_{i} on [{}]", n + 1))?;
                }
                for i in 0..n {
                    check(e.degeneracy(n, i), n, n + 1, format!("s_{i} on [{n}]"))?;
                }
            }
        }
        Ok(())
    }
}

pub fn filtered_a_tilde_sharp(ext: &SquareZeroExtension, n_max: usize) -> Result<FilteredSharp, Error> {
    let t = truncated_sharp(&ext.total, &ext.weights(), n_max, n_max)?;
    let weights = t.bases.iter().map(|b| b.weights.clone()).collect();
    // with no truncation the basis order is the standard one
    Ok(FilteredSharp { space: t.space, weights })
}

/// `Ā_#` with its canonical sub and quotient.
#[derive(Clone, Debug)]
pub struct AbarData {
    pub abar: TruncatedSharp,
    /// `j_!M^Δ_#`.
    pub gr1: CyclicVectorSpace,
    pub a_sharp: CyclicVectorSpace,
    pub inclusion: CyclicMap,
    pub projection: CyclicMap,
}

impl AbarData {
    /// Naturality of both maps and degreewise exactness of
    /// `0 -> j_!M^Δ_# -> Ā_# -> A_# -> 0`.
    pub fn audit(&self) -> Result<(), Error> {
        let ab = &self.abar.space;
        self.inclusion.audit(&self.gr1, ab)?;
        self.projection.audit(ab, &self.a_sharp)?;
        for n in 1..=ab.n_max() {
            let i = self.inclusion.component(n);
            let p = self.projection.component(n);
            if !p.compose(i).is_zero() {
                return Err(Error::Audit(format!("p ∘ i ≠ 0 on [{n}]")));
            }
            if rank(i) != i.cols() || rank(p) != p.rows() || i.cols() + p.rows() != ab.dim(n) {
                return Err(Error::Audit(format!("the sequence is not exact on [{n}]")));
            }
        }
        Ok(())
    }
}

pub fn abar_sharp(ext: &SquareZeroExtension, n_max: usize) -> Result<AbarData, Error> {
    let abar = truncated_sharp(&ext.total, &ext.weights(), 1, n_max)?;
    let a = &ext.base;
    let d = a.dim();
    let dm = ext.fiber.dim();
    let field = a.field();
    let a_sharp = build_a_sharp(a, n_max);
    let gr1 = j_shriek(&simplicial_m(a, &ext.fiber, n_max), n_max)?;
    let inclusion = CyclicMap {
        components: (1..=n_max)
            .map(|n| {
                let basis = &abar.bases[n - 1];
                let block = dm * d.pow(n as u32 - 1);
                let cols = (0..n * block)
                    .map(|idx| {
                        let (v, x) = (idx / block, idx % block);
                        let (m, rest) = (x / d.pow(n as u32 - 1), x % d.pow(n as u32 - 1));
                        let digits = crate::cyclic_space::digits(rest, d, n - 1);
                        let mut t = vec![0; n];
                        t[v] = d + m;
                        for (j, a_j) in digits.iter().enumerate() {
                            t[(v + 1 + j) % n] = *a_j;
                        }
                        vec![(basis.position(&t).expect("weight-one tensor"), field.one())]
                    })
                    .collect();
                Matrix::from_columns(field, basis.len(), cols)
            })
            .collect(),
    };
    let projection = CyclicMap {
        components: (1..=n_max)
            .map(|n| {
                let basis = &abar.bases[n - 1];
                let cols = basis
                    .tensors
                    .iter()
                    .zip(&basis.weights)
                    .map(|(t, w)| {
                        if *w > 0 {
                            Vec::new()
                        } else {
                            vec![(t.iter().fold(0, |acc, &x| acc * d + x), field.one())]
                        }
                    })
                    .collect();
                Matrix::from_columns(field, d.pow(n as u32), cols)
            })
            .collect(),
    };
    Ok(AbarData {
        abar,
        gr1,
        a_sharp,
        inclusion,
        projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{hh_cohomology, Bimodule};
    use crate::deform::square_zero;
    use crate::exactlin::{Field, Quotient, Subspace};

    fn dual_over_k() -> SquareZeroExtension {
        let k = FinAlgebra::ground(Field::Rationals);
        square_zero(&k, &Bimodule::diagonal(&k), &[]).unwrap()
    }

    #[test]
    fn untruncated_is_a_sharp() {
        let e = dual_over_k();
        let f = filtered_a_tilde_sharp(&e, 4).unwrap();
        assert_eq!(f.space, build_a_sharp(&e.total, 4));
        assert_eq!(f.filtration(1, 1), vec![1]);
        assert_eq!(f.filtration(2, 2).len(), 1);
        f.audit_preserved(2).unwrap();
    }

    #[test]
    fn filtration_with_nontrivial_cocycle() {
        let q = Field::Rationals;
        let a = FinAlgebra::dual_numbers(q);
        let m = Bimodule::diagonal(&a);
        let c = hh_cohomology(&a, &m, 2).unwrap().degree_two[0].clone();
        let e = square_zero(&a, &m, &c).unwrap();
        let f = filtered_a_tilde_sharp(&e, 3).unwrap();
        f.space.audit_relations(3).unwrap();
        f.audit_preserved(2).unwrap();
        assert_eq!(f.filtration(2, 2).len(), 4);
    }

    #[test]
    fn abar_is_the_quotient_by_f2() {
        let q = Field::Rationals;
        let a = FinAlgebra::dual_numbers(q);
        let m = Bimodule::diagonal(&a);
        let c = hh_cohomology(&a, &m, 2).unwrap().degree_two[0].clone();
        let e = square_zero(&a, &m, &c).unwrap();
        let full = filtered_a_tilde_sharp(&e, 3).unwrap();
        let ab = abar_sharp(&e, 3).unwrap();
        ab.audit().unwrap();
        // compare generator matrices with the quotient of Ã_# by F²
        let quots: Vec<Quotient> = (1..=3)
            .map(|n| {
                let span = full.filtration(n, 2).into_iter().map(|i| vec![(i, q.one())]);
                Quotient::new(Subspace::span(q, full.space.dim(n), span))
            })
            .collect();
        for n in 1..=3 {
            let t = quots[n - 1].induced(full.space.rotation(n), &quots[n - 1]).unwrap();
            assert_eq!(&t, ab.abar.space.rotation(n));
            if n < 3 {
                for i in 0..=n {
                    let d = quots[n].induced(full.space.face(n, i), &quots[n - 1]).unwrap();
                    assert_eq!(&d, ab.abar.space.face(n, i));
                }
            }
        }
    }

    #[test]
    fn abar_of_dual_numbers() {
        let ab = abar_sharp(&dual_over_k(), 5).unwrap();
        assert_eq!(ab.abar.space.dims(), &[2, 3, 4, 5, 6]);
        ab.audit().unwrap();
        ab.abar.space.audit_relations(5).unwrap();
    }
}
