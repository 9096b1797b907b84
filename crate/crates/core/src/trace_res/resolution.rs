//! Free bimodule resolutions of the diagonal bimodule.

use serde::{Deserialize, Serialize};

use super::free::{FreeLayout, FreeMap};
use crate::algebra::FinAlgebra;
use crate::exactlin::{rank, ChainComplex, Matrix, Scalar, SparseVec};
use crate::Error;

/// `P_N -> … -> P_0 -> A` with `P_n = A ⊗ V_n ⊗ A`.
#[derive(Clone, Debug)]
pub struct BimoduleResolution {
    pub algebra: FinAlgebra,
    pub layouts: Vec<FreeLayout>,
    /// `diffs[n-1] : P_n -> P_{n-1}`.
    pub diffs: Vec<FreeMap>,
    /// `ε` on the generators of `P_0`.
    pub augmentation: Vec<SparseVec>,
}

impl BimoduleResolution {
    pub fn length(&self) -> usize {
        self.layouts.len() - 1
    }

    pub fn layout(&self, n: usize) -> &FreeLayout {
        &self.layouts[n]
    }

    pub fn rank(&self, n: usize) -> usize {
        self.layouts[n].num_gens()
    }

    pub fn diff(&self, n: usize) -> &FreeMap {
        &self.diffs[n - 1]
    }

    pub fn diff_matrix(&self, n: usize) -> Matrix {
        self.diff(n).matrix(&self.algebra, &self.layouts[n], &self.layouts[n - 1])
    }

    /// `ε(x)` for `x ∈ P_0`.
    pub fn augment(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let a = &self.algebra;
        let l = &self.layouts[0];
        let mut out = Vec::new();
        for (idx, c) in x {
            let (p, g, q) = l.split(*idx);
            let v = a.mul(&a.mul(&[(p, c.clone())], &self.augmentation[g]), &[(q, a.field().one())]);
            out = crate::exactlin::sparse_axpy(&out, &a.field().one(), &v);
        }
        out
    }

    pub fn augmentation_matrix(&self) -> Matrix {
        let f = self.algebra.field();
        let cols = (0..self.layouts[0].dim()).map(|i| self.augment(&[(i, f.one())])).collect();
        Matrix::from_columns(f, self.algebra.dim(), cols)
    }

    fn check_shapes(&self) -> Result<(), Error> {
        let d = self.algebra.dim();
        if self.diffs.len() != self.length() || self.augmentation.len() != self.rank(0) {
            return Err(Error::DimensionMismatch("one differential per positive degree and one augmentation value per generator".into()));
        }
        for (n, l) in self.layouts.iter().enumerate() {
            if l.d != d {
                return Err(Error::DimensionMismatch(format!("P_{n} is over an algebra of the wrong dimension")));
            }
        }
        for n in 1..=self.length() {
            let imgs = &self.diff(n).images;
            if imgs.len() != self.rank(n) {
                return Err(Error::DimensionMismatch(format!("d_{n} needs one image per generator of P_{n}")));
            }
            if let Some(g) = imgs.iter().position(|v| v.iter().any(|(i, _)| *i >= self.layouts[n - 1].dim())) {
                return Err(Error::DimensionMismatch(format!("d_{n}(g{g}) leaves P_{}", n - 1)));
            }
        }
        if let Some(g) = self.augmentation.iter().position(|v| v.iter().any(|(i, _)| *i >= d)) {
            return Err(Error::DimensionMismatch(format!("ε(g{g}) leaves A")));
        }
        Ok(())
    }

    /// `d² = 0` and `ε d_1 = 0`, checked on generators.
    pub fn audit_complex(&self) -> Result<(), Error> {
        self.check_shapes()?;
        let a = &self.algebra;
        for n in 2..=self.length() {
            for (g, v) in self.diff(n).images.iter().enumerate() {
                if !self.diff(n - 1).apply(a, &self.layouts[n - 1], &self.layouts[n - 2], v).is_empty() {
                    return Err(Error::NotAComplex(format!("d_{} d_{n} ≠ 0 on generator g{g} of P_{n}", n - 1)));
                }
            }
        }
        if self.length() >= 1 {
            for (g, v) in self.diff(1).images.iter().enumerate() {
                if !self.augment(v).is_empty() {
                    return Err(Error::NotAComplex(format!("ε d_1 ≠ 0 on generator g{g} of P_1")));
                }
            }
        }
        Ok(())
    }

    /// Exactness of `P_N -> … -> P_0 -> A -> 0` below degree `N`, by ranks.
    pub fn audit_exact(&self) -> Result<(), Error> {
        let d = self.algebra.dim();
        let mut prev_rank = rank(&self.augmentation_matrix());
        if prev_rank != d {
            return Err(Error::Audit("ε is not surjective".into()));
        }
        for n in 0..self.length() {
            let next = rank(&self.diff_matrix(n + 1));
            if self.layouts[n].dim() - prev_rank != next {
                return Err(Error::Audit(format!("the resolution is not exact at P_{n}")));
            }
            prev_rank = next;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.audit_complex()?;
        self.audit_exact()
    }

    /// `tr(P)`, computing `HH_n(A)` for `n < N`.
    pub fn trace_complex(&self) -> ChainComplex {
        let a = &self.algebra;
        let diffs = (1..=self.length())
            .map(|n| self.diff(n).trace(a, &self.layouts[n], &self.layouts[n - 1]))
            .collect();
        ChainComplex::new_unchecked(a.field(), self.layouts[0].trace_dim(), diffs)
    }
}

fn unit_sandwich(l: &FreeLayout, left: &[(usize, Scalar)], gen: usize, right: &[(usize, Scalar)]) -> SparseVec {
    let mut v: SparseVec = left
        .iter()
        .flat_map(|(p, x)| right.iter().map(move |(q, y)| (l.index(*p, gen, *q), x * y)))
        .collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

/// `P_n = A ⊗ A^{⊗n} ⊗ A` with the bar differential; generator
/// `a_1 ⊗ … ⊗ a_n` has number `Σ a_i d^{n-i}`.
pub fn bar_resolution(a: &FinAlgebra, length: usize) -> Result<BimoduleResolution, Error> {
    let d = a.dim();
    let f = a.field();
    let layouts: Vec<FreeLayout> = (0..=length).map(|n| FreeLayout::single(d, d.pow(n as u32))).collect();
    let unit = a.unit().clone();
    let diffs = (1..=length)
        .map(|n| {
            let tgt = &layouts[n - 1];
            let images = (0..d.pow(n as u32))
                .map(|g| {
                    let digits = crate::cyclic_space::digits(g, d, n);
                    let number = |ds: &[usize]| ds.iter().fold(0, |acc, &x| acc * d + x);
                    let mut acc = crate::exactlin::Accumulator::new(tgt.dim());
                    let one = f.one();
                    acc.add_scaled(&unit_sandwich(tgt, &[(digits[0], one.clone())], number(&digits[1..]), &unit), &one);
                    for i in 1..n {
                        let sign = if i % 2 == 0 { one.clone() } else { -one.clone() };
                        for (e, c) in a.basis_product(digits[i - 1], digits[i]) {
                            let mut ds = digits[..i - 1].to_vec();
                            ds.push(*e);
                            ds.extend_from_slice(&digits[i + 1..]);
                            acc.add_scaled(&unit_sandwich(tgt, &unit, number(&ds), &unit), &(c * &sign));
                        }
                    }
                    let sign = if n % 2 == 0 { one.clone() } else { -one.clone() };
                    acc.add_scaled(&unit_sandwich(tgt, &unit, number(&digits[..n - 1]), &[(digits[n - 1], one.clone())]), &sign);
                    acc.drain()
                })
                .collect();
            FreeMap { images }
        })
        .collect();
    let res = BimoduleResolution {
        algebra: a.clone(),
        layouts,
        diffs,
        augmentation: vec![unit],
    };
    res.audit_complex()?;
    audit_bar_contraction(&res)?;
    Ok(res)
}

/// `s(a_0 ⊗ … ⊗ a_{n+1}) = 1 ⊗ a_0 ⊗ … ⊗ a_{n+1}` satisfies `ds + sd = id`
/// and `ε s = id`, which proves exactness of the bar resolution.
fn audit_bar_contraction(res: &BimoduleResolution) -> Result<(), Error> {
    let a = &res.algebra;
    let d = a.dim();
    let f = a.field();
    let unit = a.unit();
    // s : P_n -> P_{n+1} on basis elements; s_{-1}(x) = 1 ⊗ x
    let s = |n: usize, idx: usize| -> SparseVec {
        let (p, g, q) = res.layouts[n].split(idx);
        let gen = p * d.pow(n as u32) + g;
        unit.iter()
            .map(|(u, c)| (res.layouts[n + 1].index(*u, gen, q), c.clone()))
            .collect::<SparseVec>()
    };
    let s_minus = |x: usize| -> SparseVec { unit.iter().map(|(u, c)| (res.layouts[0].index(*u, 0, x), c.clone())).collect() };
    for x in 0..d {
        if res.augment(&s_minus(x)) != vec![(x, f.one())] {
            return Err(Error::Audit("ε s ≠ id on A".into()));
        }
    }
    let top = res.length();
    for n in 0..top {
        let (src, tgt) = (&res.layouts[n], &res.layouts[n + 1]);
        for idx in 0..src.dim() {
            let mut sorted_s = s(n, idx);
            sorted_s.sort_by_key(|(i, _)| *i);
            let ds = res.diff(n + 1).apply(a, tgt, src, &sorted_s);
            let sd = if n == 0 {
                let mut v: SparseVec = res.augment(&[(idx, f.one())]).iter().flat_map(|(x, c)| {
                    s_minus(*x).into_iter().map(move |(i, y)| (i, &y * c))
                }).collect();
                v.sort_by_key(|(i, _)| *i);
                merge(v)
            } else {
                let dx = res.diff(n).apply(a, src, &res.layouts[n - 1], &[(idx, f.one())]);
                let mut v: SparseVec = dx.iter().flat_map(|(i, c)| s(n - 1, *i).into_iter().map(move |(j, y)| (j, &y * c))).collect();
                v.sort_by_key(|(i, _)| *i);
                merge(v)
            };
            if crate::exactlin::sparse_axpy(&ds, &f.one(), &sd) != vec![(idx, f.one())] {
                return Err(Error::Audit(format!("the contracting homotopy fails on P_{n}")));
            }
        }
    }
    Ok(())
}

fn merge(v: SparseVec) -> SparseVec {
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = &*y + &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// The 2-periodic resolution of `k[x]/x^m` by `P_n = A ⊗ A`, with
/// `d = x ⊗ 1 - 1 ⊗ x` out of odd degrees and `Σ x^i ⊗ x^{m-1-i}` out of
/// even ones.
pub fn periodic_resolution(m: usize, field: crate::exactlin::Field, length: usize) -> Result<BimoduleResolution, Error> {
    if m < 2 {
        return Err(Error::Invalid("the periodic resolution needs k[x]/x^m with m ≥ 2".into()));
    }
    let a = FinAlgebra::truncated_polynomial(field, m);
    let l = FreeLayout::single(m, 1);
    let one = field.one();
    let odd = merge_sorted(vec![(l.index(1, 0, 0), one.clone()), (l.index(0, 0, 1), -one.clone())]);
    let even = merge_sorted((0..m).map(|i| (l.index(i, 0, m - 1 - i), one.clone())).collect());
    let res = BimoduleResolution {
        algebra: a,
        layouts: vec![l; length + 1],
        diffs: (1..=length)
            .map(|n| FreeMap {
                images: vec![if n % 2 == 1 { odd.clone() } else { even.clone() }],
            })
            .collect(),
        augmentation: vec![vec![(0, one)]],
    };
    res.validate()?;
    Ok(res)
}

fn merge_sorted(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    merge(v)
}

/// Input format: generator counts, `ε` of each generator of `P_0` as
/// `[basis, coeff]` pairs, and `d_n` of each generator of `P_n` as
/// `[left, generator, right, coeff]` quadruples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionData {
    pub ranks: Vec<usize>,
    pub augmentation: Vec<Vec<(usize, String)>>,
    pub differentials: Vec<Vec<Vec<(usize, usize, usize, String)>>>,
}

impl ResolutionData {
    pub fn from_resolution(res: &BimoduleResolution) -> Self {
        let render = |c: &Scalar| c.to_string();
        ResolutionData {
            ranks: res.layouts.iter().map(|l| l.num_gens()).collect(),
            augmentation: res.augmentation.iter().map(|v| v.iter().map(|(i, c)| (*i, render(c))).collect()).collect(),
            differentials: (1..=res.length())
                .map(|n| {
                    let tgt = &res.layouts[n - 1];
                    res.diff(n)
                        .images
                        .iter()
                        .map(|v| {
                            v.iter()
                                .map(|(i, c)| {
                                    let (p, g, q) = tgt.split(*i);
                                    (p, g, q, render(c))
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Builds and validates a user-supplied resolution.
pub fn small_resolution_ingest(a: &FinAlgebra, data: &ResolutionData) -> Result<BimoduleResolution, Error> {
    let d = a.dim();
    let f = a.field();
    if data.ranks.is_empty() || data.differentials.len() + 1 != data.ranks.len() {
        return Err(Error::DimensionMismatch("need ranks for P_0..P_N and differentials d_1..d_N".into()));
    }
    let layouts: Vec<FreeLayout> = data.ranks.iter().map(|&r| FreeLayout::single(d, r)).collect();
    let diffs = data
        .differentials
        .iter()
        .enumerate()
        .map(|(k, gens)| {
            let tgt = &layouts[k];
            let images = gens
                .iter()
                .enumerate()
                .map(|(g, terms)| {
                    let v = terms
                        .iter()
                        .map(|(p, h, q, c)| {
                            if *p >= d || *q >= d || *h >= tgt.num_gens() {
                                return Err(Error::DimensionMismatch(format!(
                                    "d_{}(g{g}) names a basis element outside P_{k}",
                                    k + 1
                                )));
                            }
                            Ok((tgt.index(*p, *h, *q), f.parse_scalar(c)?))
                        })
                        .collect::<Result<SparseVec, Error>>()?;
                    Ok(merge_sorted(v))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(FreeMap { images })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let augmentation = data
        .augmentation
        .iter()
        .map(|terms| {
            let v = terms
                .iter()
                .map(|(i, c)| Ok((*i, f.parse_scalar(c)?)))
                .collect::<Result<SparseVec, Error>>()?;
            Ok(merge_sorted(v))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let res = BimoduleResolution {
        algebra: a.clone(),
        layouts,
        diffs,
        augmentation,
    };
    res.validate()?;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hh;
    use crate::algebra::Bimodule;
    use crate::exactlin::Field;

    #[test]
    fn bar_resolution_of_k() {
        let k = FinAlgebra::ground(Field::Rationals);
        let r = bar_resolution(&k, 4).unwrap();
        for n in 1..=4 {
            let m = r.diff_matrix(n);
            assert_eq!(m.rows(), 1);
            assert_eq!(m.is_zero(), n % 2 == 1);
        }
        assert_eq!(r.trace_complex().homology_dims(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn bar_resolution_dims_and_exactness() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let r = bar_resolution(&a, 4).unwrap();
        let dims: Vec<usize> = r.layouts.iter().map(|l| l.dim()).collect();
        assert_eq!(dims, vec![4, 8, 16, 32, 64]);
        r.audit_exact().unwrap();
        let ranks: Vec<usize> = (1..=4).map(|n| rank(&r.diff_matrix(n))).collect();
        assert_eq!(ranks, vec![2, 6, 10, 22]);
        assert_eq!(r.trace_complex().homology_dims(), hh(&a, &Bimodule::diagonal(&a), 3));
    }

    #[test]
    fn periodic_resolution_of_dual_numbers() {
        for f in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
            let r = periodic_resolution(2, f, 5).unwrap();
            let a = &r.algebra;
            assert_eq!(r.trace_complex().homology_dims(), hh(a, &Bimodule::diagonal(a), 4));
        }
        let r = periodic_resolution(3, Field::Rationals, 4).unwrap();
        assert_eq!(r.trace_complex().homology_dims(), hh(&r.algebra, &Bimodule::diagonal(&r.algebra), 3));
    }

    #[test]
    fn ingest_round_trip_and_rejection() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let bar = bar_resolution(&a, 3).unwrap();
        let data = ResolutionData::from_resolution(&bar);
        let back = small_resolution_ingest(&a, &data).unwrap();
        assert_eq!(back.diffs, bar.diffs);
        let per = periodic_resolution(2, Field::Rationals, 4).unwrap();
        let mut bad = ResolutionData::from_resolution(&per);
        // x ⊗ 1 - 1 ⊗ x twice in a row
        bad.differentials[1] = bad.differentials[0].clone();
        match small_resolution_ingest(&a, &bad) {
            Err(Error::NotAComplex(msg)) => assert!(msg.contains("d_1 d_2"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}
