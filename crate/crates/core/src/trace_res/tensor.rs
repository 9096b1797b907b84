//! `P ⊗_A P`, the two collapses `τ₁ = ε ⊗ id`, `τ₂ = id ⊗ ε`, a homotopy
//! between them, and the swap `σ` on traces.
//!
//! `P_i ⊗_A P_j` is free on `V_i ⊗ A ⊗ V_j`; the generator `g ⊗ c ⊗ h` has
//! local number `(g · d + c) · r_j + h` and stands for
//! `(1 ⊗ g ⊗ c) ⊗_A (1 ⊗ h ⊗ 1)`.

use serde::{Deserialize, Serialize};

use super::free::{FreeLayout, FreeMap};
use super::resolution::BimoduleResolution;
use crate::exactlin::{Accumulator, Matrix, Scalar, Solver, SparseVec};
use crate::Error;

#[derive(Clone, Debug)]
pub struct TensorSquare {
    /// `blocks[n]`: the bidegrees `(i, j)` with `i + j = n`, `i` ascending.
    pub blocks: Vec<Vec<(usize, usize)>>,
    pub layouts: Vec<FreeLayout>,
    /// `diffs[n-1] : (P ⊗ P)_n -> (P ⊗ P)_{n-1}`, with `d ⊗ 1 + (-1)^i 1 ⊗ d`.
    pub diffs: Vec<FreeMap>,
    pub tau1: Vec<FreeMap>,
    pub tau2: Vec<FreeMap>,
}

impl TensorSquare {
    pub fn top(&self) -> usize {
        self.layouts.len() - 1
    }

    /// Global number of the generator `g ⊗ c ⊗ h` of block `(i, j)` in degree `i + j`.
    pub fn gen(&self, res: &BimoduleResolution, i: usize, j: usize, g: usize, c: usize, h: usize) -> usize {
        let n = i + j;
        let k = self.blocks[n].iter().position(|&b| b == (i, j)).expect("bidegree in range");
        self.layouts[n].first(k) + (g * res.algebra.dim() + c) * res.rank(j) + h
    }

    /// Inverse of [`TensorSquare::gen`] within degree `n`.
    pub fn split_gen(&self, res: &BimoduleResolution, n: usize, gen: usize) -> (usize, usize, usize, usize, usize) {
        let l = &self.layouts[n];
        let k = (0..self.blocks[n].len()).rev().find(|&k| l.first(k) <= gen && l.ranks[k] > 0).expect("generator in range");
        let (i, j) = self.blocks[n][k];
        let local = gen - l.first(k);
        let rj = res.rank(j);
        let (gc, h) = (local / rj, local % rj);
        let d = res.algebra.dim();
        (i, j, gc / d, gc % d, h)
    }

    pub fn diff(&self, n: usize) -> &FreeMap {
        &self.diffs[n - 1]
    }

    /// `tr(P ⊗_A P)` in degrees `0..=top`.
    pub fn trace_complex(&self, res: &BimoduleResolution) -> crate::exactlin::ChainComplex {
        let a = &res.algebra;
        let diffs = (1..=self.top())
            .map(|n| self.diff(n).trace(a, &self.layouts[n], &self.layouts[n - 1]))
            .collect();
        crate::exactlin::ChainComplex::new_unchecked(a.field(), self.layouts[0].trace_dim(), diffs)
    }

    /// `tr(τ₁)` and `tr(τ₂)` in degree `n`.
    pub fn trace_taus(&self, res: &BimoduleResolution, n: usize) -> (Matrix, Matrix) {
        let a = &res.algebra;
        (
            self.tau1[n].trace(a, &self.layouts[n], &res.layouts[n]),
            self.tau2[n].trace(a, &self.layouts[n], &res.layouts[n]),
        )
    }
}

/// `(P ⊗_A P)_n` for `n ≤ top ≤ N`.
pub fn tensor_res(res: &BimoduleResolution, top: usize) -> Result<TensorSquare, Error> {
    if top > res.length() {
        return Err(Error::Truncation(format!("P ⊗ P up to degree {top} needs P up to P_{top}")));
    }
    let a = &res.algebra;
    let d = a.dim();
    let f = a.field();
    let one = f.one();
    let blocks: Vec<Vec<(usize, usize)>> = (0..=top).map(|n| (0..=n).map(|i| (i, n - i)).collect()).collect();
    let layouts: Vec<FreeLayout> = blocks
        .iter()
        .map(|bs| FreeLayout::new(d, bs.iter().map(|&(i, j)| res.rank(i) * d * res.rank(j)).collect()))
        .collect();
    let mut ts = TensorSquare {
        blocks,
        layouts,
        diffs: Vec::new(),
        tau1: Vec::new(),
        tau2: Vec::new(),
    };
    // (p ⊗ g ⊗ c) ⊗ (1 ⊗ h ⊗ q) as a basis element of (P ⊗ P)_n
    let elem = |ts: &TensorSquare, i: usize, j: usize, p: usize, g: usize, c: usize, h: usize, q: usize| -> usize {
        ts.layouts[i + j].index(p, ts.gen(res, i, j, g, c, h), q)
    };
    let mut diffs = Vec::new();
    for n in 1..=top {
        let tgt = &ts.layouts[n - 1];
        let mut images = Vec::with_capacity(ts.layouts[n].num_gens());
        for gen in 0..ts.layouts[n].num_gens() {
            let (i, j, g, c, h) = ts.split_gen(res, n, gen);
            let mut acc = Accumulator::new(tgt.dim());
            // 1 ⊗ g ⊗ c, then d_i
            if i >= 1 {
                let x: SparseVec = a.unit().iter().map(|(u, y)| (res.layouts[i].index(*u, g, c), y.clone())).collect();
                let mut x = x;
                x.sort_by_key(|(k, _)| *k);
                let dx = res.diff(i).apply(a, &res.layouts[i], &res.layouts[i - 1], &x);
                for (idx, y) in dx {
                    let (p2, g2, c2) = res.layouts[i - 1].split(idx);
                    for (u, z) in a.unit() {
                        acc.add(elem(&ts, i - 1, j, p2, g2, c2, h, *u), &(&y * z));
                    }
                }
            }
            // (-1)^i 1 ⊗ d_j(c ⊗ h ⊗ 1)
            if j >= 1 {
                let sign = if i % 2 == 0 { one.clone() } else { -one.clone() };
                let mut x: SparseVec = a.unit().iter().map(|(u, y)| (res.layouts[j].index(c, h, *u), y.clone())).collect();
                x.sort_by_key(|(k, _)| *k);
                let dx = res.diff(j).apply(a, &res.layouts[j], &res.layouts[j - 1], &x);
                for (idx, y) in dx {
                    let (c2, h2, q2) = res.layouts[j - 1].split(idx);
                    for (u, z) in a.unit() {
                        acc.add(elem(&ts, i, j - 1, *u, g, c2, h2, q2), &(&(&y * z) * &sign));
                    }
                }
            }
            images.push(acc.drain());
        }
        diffs.push(FreeMap { images });
    }
    ts.diffs = diffs;
    for n in 0..=top {
        let l = &ts.layouts[n];
        let tgt = &res.layouts[n];
        let mut t1 = Vec::with_capacity(l.num_gens());
        let mut t2 = Vec::with_capacity(l.num_gens());
        for gen in 0..l.num_gens() {
            let (i, j, g, c, h) = ts.split_gen(res, n, gen);
            // τ₁: ε(1 ⊗ g ⊗ c) · (1 ⊗ h ⊗ 1)
            let v1 = if i == 0 {
                let e = a.mul(&res.augmentation[g], &[(c, one.clone())]);
                tgt.act(a, &e, &tgt.generator(a, h), a.unit())
            } else {
                Vec::new()
            };
            // τ₂: (1 ⊗ g ⊗ 1) · ε(c ⊗ h ⊗ 1)
            let v2 = if j == 0 {
                let e = a.mul(&[(c, one.clone())], &res.augmentation[h]);
                tgt.act(a, a.unit(), &tgt.generator(a, g), &e)
            } else {
                Vec::new()
            };
            t1.push(v1);
            t2.push(v2);
        }
        ts.tau1.push(FreeMap { images: t1 });
        ts.tau2.push(FreeMap { images: t2 });
    }
    audit_tensor_square(res, &ts)?;
    Ok(ts)
}

/// `D² = 0` and both collapses are chain maps.
pub fn audit_tensor_square(res: &BimoduleResolution, ts: &TensorSquare) -> Result<(), Error> {
    let a = &res.algebra;
    for n in 2..=ts.top() {
        let dd = ts.diff(n - 1).after(a, ts.diff(n), &ts.layouts[n - 1], &ts.layouts[n - 2]);
        if !dd.is_zero() {
            return Err(Error::NotAComplex(format!("D² ≠ 0 on (P ⊗ P)_{n}")));
        }
    }
    for n in 1..=ts.top() {
        for (name, tau) in [("τ₁", &ts.tau1), ("τ₂", &ts.tau2)] {
            let lhs = res.diff(n).after(a, &tau[n], &res.layouts[n], &res.layouts[n - 1]);
            let rhs = tau[n - 1].after(a, ts.diff(n), &ts.layouts[n - 1], &res.layouts[n - 1]);
            if lhs != rhs {
                return Err(Error::Audit(format!("{name} is not a chain map in degree {n}")));
            }
        }
    }
    Ok(())
}

/// Order in which the columns of `d_{n+1}` are offered to the solver; a
/// different order picks a different homotopy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveOrder {
    #[default]
    Natural,
    Reversed,
}

/// `h_n : (P ⊗ P)_n -> P_{n+1}` with `d h + h D = τ₁ - τ₂`.
#[derive(Clone, Debug)]
pub struct HomotopyData {
    pub maps: Vec<FreeMap>,
}

pub fn find_homotopy(res: &BimoduleResolution, ts: &TensorSquare, order: SolveOrder) -> Result<HomotopyData, Error> {
    let a = &res.algebra;
    let f = a.field();
    let top = ts.top().min(res.length() - 1);
    let mut maps: Vec<FreeMap> = Vec::new();
    for n in 0..=top {
        let dm = res.diff_matrix(n + 1);
        let cols = dm.cols();
        let perm: Vec<usize> = match order {
            SolveOrder::Natural => (0..cols).collect(),
            SolveOrder::Reversed => (0..cols).rev().collect(),
        };
        let solver = Solver::new(&dm.select_columns(&perm));
        let diff = ts.tau1[n].sub(f, &ts.tau2[n]);
        let correction = if n == 0 {
            FreeMap::zero(ts.layouts[0].num_gens())
        } else {
            maps[n - 1].after(a, ts.diff(n), &ts.layouts[n - 1], &res.layouts[n])
        };
        let rhs = diff.sub(f, &correction);
        let images = rhs
            .images
            .iter()
            .enumerate()
            .map(|(g, v)| {
                let x = solver.solve(v).ok_or_else(|| {
                    Error::Audit(format!("no homotopy on generator {g} of (P ⊗ P)_{n}: the input is not a resolution"))
                })?;
                let mut y: SparseVec = x.into_iter().map(|(k, c)| (perm[k], c)).collect();
                y.sort_by_key(|(k, _)| *k);
                Ok(y)
            })
            .collect::<Result<Vec<_>, Error>>()?;
        maps.push(FreeMap { images });
    }
    let h = HomotopyData { maps };
    audit_homotopy(res, ts, &h)?;
    Ok(h)
}

pub fn audit_homotopy(res: &BimoduleResolution, ts: &TensorSquare, h: &HomotopyData) -> Result<(), Error> {
    let a = &res.algebra;
    let f = a.field();
    for (n, hn) in h.maps.iter().enumerate() {
        let dh = res.diff(n + 1).after(a, hn, &res.layouts[n + 1], &res.layouts[n]);
        let total = if n == 0 {
            dh
        } else {
            let hd = h.maps[n - 1].after(a, ts.diff(n), &ts.layouts[n - 1], &res.layouts[n]);
            dh.sub(f, &hd.negate(f))
        };
        if total != ts.tau1[n].sub(f, &ts.tau2[n]) {
            return Err(Error::Audit(format!("d h + h d ≠ τ₁ - τ₂ in degree {n}")));
        }
    }
    Ok(())
}

/// `σ` on `tr(P ⊗_A P)_n`: `g ⊗ c ⊗ h ⊗ e ↦ (-1)^{ij} h ⊗ e ⊗ g ⊗ c`,
/// from bidegree `(i, j)` to `(j, i)`. The trace index of block `(i, j)`
/// is `G · d + e` for the class of `(1 ⊗ g ⊗ c) ⊗ (1 ⊗ h ⊗ e)`.
pub fn sigma_on_trace(res: &BimoduleResolution, ts: &TensorSquare, n: usize) -> Matrix {
    let d = res.algebra.dim();
    let f = res.algebra.field();
    let l = &ts.layouts[n];
    let one = f.one();
    let cols = (0..l.trace_dim())
        .map(|idx| {
            let (gen, e) = (idx / d, idx % d);
            let (i, j, g, c, h) = ts.split_gen(res, n, gen);
            let target = ts.gen(res, j, i, h, e, g) * d + c;
            let sign: Scalar = if (i * j) % 2 == 0 { one.clone() } else { -one.clone() };
            vec![(target, sign)]
        })
        .collect();
    Matrix::from_columns(f, l.trace_dim(), cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{trace_of_tensor, trace_swap, Bimodule, FinAlgebra};
    use crate::exactlin::Field;
    use crate::trace_res::{bar_resolution, periodic_resolution};

    #[test]
    fn tensor_square_of_k() {
        let k = FinAlgebra::ground(Field::Rationals);
        let r = bar_resolution(&k, 3).unwrap();
        let ts = tensor_res(&r, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(ts.layouts[n].dim(), n + 1);
        }
        assert_eq!(ts.tau1[0], ts.tau2[0]);
        let h = find_homotopy(&r, &ts, SolveOrder::Natural).unwrap();
        assert!(h.maps[0].is_zero());
    }

    #[test]
    fn tensor_square_resolves_a() {
        let r = periodic_resolution(2, Field::Rationals, 4).unwrap();
        let ts = tensor_res(&r, 4).unwrap();
        let a = &r.algebra;
        // exactness of (P ⊗ P) -> A through τ₁ and ε
        let cx = crate::exactlin::ChainComplex::new_unchecked(
            a.field(),
            ts.layouts[0].dim(),
            (1..=4).map(|n| ts.diff(n).matrix(a, &ts.layouts[n], &ts.layouts[n - 1])).collect(),
        );
        let dims = cx.homology_dims();
        assert_eq!(dims, vec![2, 0, 0, 0]);
        for order in [SolveOrder::Natural, SolveOrder::Reversed] {
            find_homotopy(&r, &ts, order).unwrap();
        }
    }

    #[test]
    fn homotopy_for_matrices() {
        let a = FinAlgebra::matrix_algebra(Field::Rationals, 2);
        let r = bar_resolution(&a, 3).unwrap();
        let ts = tensor_res(&r, 2).unwrap();
        let h = find_homotopy(&r, &ts, SolveOrder::Natural).unwrap();
        assert_eq!(h.maps.len(), 3);
    }

    #[test]
    fn sigma_is_an_involution_swapping_the_collapses() {
        for r in [periodic_resolution(2, Field::Rationals, 4).unwrap(), bar_resolution(&FinAlgebra::dual_numbers(Field::Prime(3)), 3).unwrap()] {
            let top = r.length();
            let ts = tensor_res(&r, top).unwrap();
            let cx = ts.trace_complex(&r);
            for n in 0..=top {
                let s = sigma_on_trace(&r, &ts, n);
                assert_eq!(s.compose(&s), Matrix::identity(r.algebra.field(), s.rows()));
                let (t1, t2) = ts.trace_taus(&r, n);
                assert_eq!(t2.compose(&s), t1);
                if n >= 1 {
                    assert_eq!(cx.d(n).compose(&s), sigma_on_trace(&r, &ts, n - 1).compose(&cx.d(n)));
                }
            }
        }
    }

    #[test]
    fn sigma_agrees_with_trace_swap() {
        // P_0 = A ⊗ A: compare with the swap on tr(M ⊗_A N) for M = N = A ⊗ A
        let r = periodic_resolution(2, Field::Rationals, 1).unwrap();
        let a = &r.algebra;
        let ts = tensor_res(&r, 0).unwrap();
        let free = Bimodule::free(a);
        let q = trace_of_tensor(&free, &free);
        let swap = trace_swap(a, &free, &free).unwrap();
        let d = a.dim();
        // (1 ⊗ c) ⊗ (1 ⊗ e) sits at (0 * d + c) * d² + (0 * d + e)
        let phi = Matrix::from_columns(
            a.field(),
            q.dim(),
            (0..d * d).map(|idx| q.project(&[((idx / d) * d * d + idx % d, a.field().one())])).collect(),
        );
        let sigma = sigma_on_trace(&r, &ts, 0);
        assert_eq!(swap.compose(&phi), phi.compose(&sigma));
    }
}
