//! Homology of finite categories with coefficients in a representation.
//!
//! The main entry point resolves the constant right module over the
//! category algebra `kC` by free right modules `e_c kC` and tensors the
//! resolution with `E`. The normalized bar complex is kept as a reference
//! implementation for small categories.

use std::collections::HashMap;

use super::category::{FiniteCategory, Representation};
use crate::exactlin::{kernel_basis, ChainComplex, Echelon, Matrix, SparseVec};
use crate::{Error, Field};

/// A free right module `⊕_j e_{a_j} kC`, with basis pairs `(j, f)`,
/// `target f = a_j`.
struct FreeRight {
    gens: Vec<usize>,
    basis: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// Basis indices grouped by the source object of `f`.
    by_source: Vec<Vec<usize>>,
    local: Vec<usize>,
}

impl FreeRight {
    fn new(cat: &FiniteCategory, gens: Vec<usize>) -> Self {
        let mut basis = Vec::new();
        for (j, &a) in gens.iter().enumerate() {
            for f in cat.into(a) {
                basis.push((j, f));
            }
        }
        let index = basis.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut by_source = vec![Vec::new(); cat.num_objects()];
        let mut local = vec![0; basis.len()];
        for (k, &(_, f)) in basis.iter().enumerate() {
            let b = cat.source(f);
            local[k] = by_source[b].len();
            by_source[b].push(k);
        }
        FreeRight {
            gens,
            basis,
            index,
            by_source,
            local,
        }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `v · g`, for `v` supported on basis elements with source `target g`.
    fn act(&self, cat: &FiniteCategory, v: &[(usize, crate::Scalar)], g: usize) -> SparseVec {
        let mut out: SparseVec = v
            .iter()
            .map(|(k, c)| {
                let (j, f) = self.basis[*k];
                let fg = cat.compose(f, g).expect("right action on a non-composable pair");
                (self.index[&(j, fg)], c.clone())
            })
            .collect();
        merge_sorted(&mut out);
        out
    }

    /// The image of generator `j` under a map given by generator images.
    fn map_basis(&self, cat: &FiniteCategory, images: &[SparseVec], prev: &FreeRight, k: usize) -> SparseVec {
        let (j, f) = self.basis[k];
        prev.act(cat, &images[j], f)
    }
}

/// Sorts by index, summing repeated entries and dropping zeros.
fn merge_sorted(v: &mut SparseVec) {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v.drain(..) {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = &*y + &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    *v = out;
}

/// One stage of a free resolution: the module and the images of its
/// generators in the previous stage.
struct Stage {
    module: FreeRight,
    images: Vec<SparseVec>,
}

/// Greedy generators of the kernel of `d: module -> prev`, where `d` is
/// determined by `images`, or is the augmentation when `d` is `None`.
fn next_stage(
    cat: &FiniteCategory,
    field: Field,
    module: &FreeRight,
    d: Option<(&[SparseVec], &FreeRight)>,
) -> Stage {
    let nobj = cat.num_objects();
    let mut kernels: Vec<Vec<SparseVec>> = Vec::with_capacity(nobj);
    for b in 0..nobj {
        let comp = &module.by_source[b];
        let m = match d {
            Some((images, prev)) => {
                let cols = comp
                    .iter()
                    .map(|&k| {
                        let mut v: SparseVec = module
                            .map_basis(cat, images, prev, k)
                            .into_iter()
                            .map(|(i, c)| (prev.local[i], c))
                            .collect();
                        merge_sorted(&mut v);
                        v
                    })
                    .collect();
                Matrix::from_columns(field, prev.by_source[b].len(), cols)
            }
            // every basis element with source b goes to u_b
            None => Matrix::from_columns(field, 1, comp.iter().map(|_| vec![(0, field.one())]).collect()),
        };
        let ker = kernel_basis(&m)
            .into_iter()
            .map(|v| v.into_iter().map(|(i, c)| (comp[i], c)).collect())
            .collect();
        kernels.push(ker);
    }
    let mut spans: Vec<Echelon> = (0..nobj).map(|_| Echelon::new(field, module.dim())).collect();
    let mut gens = Vec::new();
    let mut images = Vec::new();
    for a in 0..nobj {
        for v in &kernels[a] {
            if spans[a].contains(v) {
                continue;
            }
            for g in cat.into(a) {
                let vg = module.act(cat, v, g);
                spans[cat.source(g)].insert(&vg);
            }
            gens.push(a);
            images.push(v.clone());
        }
    }
    Stage {
        module: FreeRight::new(cat, gens),
        images,
    }
}

/// `H_i(C, E)` for `i ≤ max_degree`.
pub fn category_homology(cat: &FiniteCategory, e: &Representation, max_degree: usize) -> Result<Vec<usize>, Error> {
    let complex = tor_complex(cat, e, max_degree + 1)?;
    Ok(complex.homology_dims())
}

fn resolution_stages(cat: &FiniteCategory, field: Field, top: usize) -> Vec<Stage> {
    let mut stages: Vec<Stage> = vec![Stage {
        module: FreeRight::new(cat, (0..cat.num_objects()).collect()),
        images: Vec::new(),
    }];
    for n in 0..top {
        let next = {
            let cur = &stages[n];
            let d = (n > 0).then(|| (cur.images.as_slice(), &stages[n - 1].module));
            next_stage(cat, field, &cur.module, d)
        };
        stages.push(next);
    }
    stages
}

/// The differential `k ⊗ F_n ⊗ E -> k ⊗ F_{n-1} ⊗ E`.
fn tensored_differential(e: &Representation, src: &Stage, tgt: &Stage) -> Matrix {
    let dims_of = |s: &Stage| -> Vec<usize> { s.module.gens.iter().map(|&a| e.dim(a)).collect() };
    let row_dims = dims_of(tgt);
    let col_dims = dims_of(src);
    let mut blocks: Vec<Vec<Option<Matrix>>> = vec![vec![None; col_dims.len()]; row_dims.len()];
    for (j, v) in src.images.iter().enumerate() {
        for (k, c) in v {
            let (i, h) = tgt.module.basis[*k];
            let term = e.map(h).scale(c);
            let slot = &mut blocks[i][j];
            *slot = Some(match slot.take() {
                Some(m) => m.add(&term),
                None => term,
            });
        }
    }
    let refs: Vec<Vec<Option<&Matrix>>> = blocks
        .iter()
        .map(|row| row.iter().map(|b| b.as_ref()).collect())
        .collect();
    Matrix::from_blocks(e.field(), &row_dims, &col_dims, &refs)
}

/// `k ⊗_{kC} F_• ⊗ E` for a free resolution `F_•` of the constant right
/// module, in degrees `0..=top`.
pub fn tor_complex(cat: &FiniteCategory, e: &Representation, top: usize) -> Result<ChainComplex, Error> {
    let stages = resolution_stages(cat, e.field(), top);
    let diffs = (1..=top).map(|n| tensored_differential(e, &stages[n], &stages[n - 1])).collect();
    let dim0 = stages[0].module.gens.iter().map(|&a| e.dim(a)).sum();
    ChainComplex::new(e.field(), dim0, diffs)
}

/// Homology of `C` with coefficients in a functor to chain complexes,
/// given degreewise by `reps[q]` with natural differentials
/// `internal[q-1][o] : E_q(o) -> E_{q-1}(o)`. Total degrees `0..=top`, with
/// `D = d_F + (-1)^p d_E` on `F_p ⊗ E_q`.
pub fn tor_total_complex(
    cat: &FiniteCategory,
    reps: &[Representation],
    internal: &[Vec<Matrix>],
    top: usize,
) -> Result<ChainComplex, Error> {
    let field = reps[0].field();
    if internal.len() + 1 != reps.len() {
        return Err(Error::DimensionMismatch("one internal differential per positive degree".into()));
    }
    for (q, ds) in internal.iter().enumerate() {
        for f in 0..cat.num_morphisms() {
            let (a, b) = (cat.source(f), cat.target(f));
            if ds[b].compose(reps[q + 1].map(f)) != reps[q].map(f).compose(&ds[a]) {
                return Err(Error::Audit(format!("the differential out of degree {} is not natural", q + 1)));
            }
        }
    }
    let stages = resolution_stages(cat, field, top);
    let qmax = reps.len() - 1;
    let block_dim = |p: usize, q: usize| -> usize { stages[p].module.gens.iter().map(|&a| reps[q].dim(a)).sum() };
    // Tot_n = ⊕_{q ≤ min(n, qmax)} F_{n-q} ⊗ E_q
    let blocks = |n: usize| -> Vec<(usize, usize)> { (0..=n.min(qmax)).map(|q| (n - q, q)).collect() };
    let diffs = (1..=top)
        .map(|n| {
            let src = blocks(n);
            let tgt = blocks(n - 1);
            let rows: Vec<usize> = tgt.iter().map(|&(p, q)| block_dim(p, q)).collect();
            let cols: Vec<usize> = src.iter().map(|&(p, q)| block_dim(p, q)).collect();
            let mut mats: Vec<(usize, usize, Matrix)> = Vec::new();
            for (c, &(p, q)) in src.iter().enumerate() {
                if p >= 1 {
                    let r = tgt.iter().position(|&x| x == (p - 1, q)).unwrap();
                    mats.push((r, c, tensored_differential(&reps[q], &stages[p], &stages[p - 1])));
                }
                if q >= 1 {
                    let r = tgt.iter().position(|&x| x == (p, q - 1)).unwrap();
                    let diag: Vec<&Matrix> = stages[p].module.gens.iter().map(|&a| &internal[q - 1][a]).collect();
                    let m = Matrix::block_diag(field, &diag);
                    mats.push((r, c, if p % 2 == 0 { m } else { m.neg() }));
                }
            }
            let mut grid: Vec<Vec<Option<&Matrix>>> = vec![vec![None; cols.len()]; rows.len()];
            for (r, c, m) in &mats {
                grid[*r][*c] = Some(m);
            }
            Matrix::from_blocks(field, &rows, &cols, &grid)
        })
        .collect();
    ChainComplex::new(field, blocks(0).iter().map(|&(p, q)| block_dim(p, q)).sum(), diffs)
}

/// Sizes of the generators chosen for the resolution, per degree.
pub fn resolution_ranks(cat: &FiniteCategory, field: Field, top: usize) -> Vec<usize> {
    let e = Representation::constant(cat, field);
    let c = tor_complex(cat, &e, top).expect("constant coefficients");
    c.dims()
}

/// The normalized bar complex: chains of composable non-identity arrows.
pub fn bar_complex(cat: &FiniteCategory, e: &Representation, top: usize) -> Result<ChainComplex, Error> {
    let field = e.field();
    let arrows: Vec<usize> = (0..cat.num_morphisms()).filter(|&f| !cat.is_identity(f)).collect();
    // chains[0] are objects; chains[n] are (f_1, ..., f_n) with
    // target f_k = source f_{k+1}
    let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..cat.num_objects()).map(|o| vec![o]).collect()];
    if top >= 1 {
        chains.push(arrows.iter().map(|&f| vec![f]).collect());
    }
    for n in 2..=top {
        let mut next = Vec::new();
        for c in &chains[n - 1] {
            let last = *c.last().unwrap();
            for &f in &arrows {
                if cat.source(f) == cat.target(last) {
                    let mut d = c.clone();
                    d.push(f);
                    next.push(d);
                }
            }
        }
        chains.push(next);
    }
    let base = |n: usize, c: &[usize]| if n == 0 { c[0] } else { cat.source(c[0]) };
    let offsets: Vec<HashMap<Vec<usize>, usize>> = chains
        .iter()
        .enumerate()
        .map(|(n, cs)| {
            let mut off = 0;
            cs.iter()
                .map(|c| {
                    let o = off;
                    off += e.dim(base(n, c));
                    (c.clone(), o)
                })
                .collect()
        })
        .collect();
    let dim = |n: usize| -> usize { chains[n].iter().map(|c| e.dim(base(n, c))).sum() };
    let mut diffs = Vec::new();
    for n in 1..=top {
        let mut trips = Vec::new();
        for c in &chains[n] {
            let col0 = offsets[n][c];
            let src_obj = cat.source(c[0]);
            let width = e.dim(src_obj);
            let mut push = |face: Vec<usize>, m: Matrix, sign: i64| {
                let row0 = offsets[n - 1][&face];
                for (r, k, v) in m.triplets() {
                    trips.push((row0 + r, col0 + k, &field.from_i64(sign) * v));
                }
            };
            let id = Matrix::identity(field, width);
            // d_0: push the vector along f_1
            let face0 = if n == 1 { vec![cat.target(c[0])] } else { c[1..].to_vec() };
            push(face0, e.map(c[0]).clone(), 1);
            for i in 1..n {
                let g = cat.compose(c[i], c[i - 1]).unwrap();
                if cat.is_identity(g) {
                    continue;
                }
                let mut face = c[..i - 1].to_vec();
                face.push(g);
                face.extend_from_slice(&c[i + 1..]);
                push(face, id.clone(), if i % 2 == 0 { 1 } else { -1 });
            }
            let last = if n == 1 { vec![src_obj] } else { c[..n - 1].to_vec() };
            push(last, id, if n % 2 == 0 { 1 } else { -1 });
        }
        diffs.push(Matrix::from_triplets(field, dim(n - 1), dim(n), trips)?);
    }
    ChainComplex::new(field, dim(0), diffs)
}

pub fn bar_homology(cat: &FiniteCategory, e: &Representation, max_degree: usize) -> Result<Vec<usize>, Error> {
    Ok(bar_complex(cat, e, max_degree + 1)?.homology_dims())
}

#[cfg(test)]
mod tests {
    use super::super::category::lambda_leq;
    use super::*;
    use crate::Field;

    #[test]
    fn point_category() {
        let c = FiniteCategory::point();
        let e = Representation::constant(&c, Field::Rationals);
        assert_eq!(category_homology(&c, &e, 3).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(bar_homology(&c, &e, 3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn tor_matches_bar_on_lambda_two() {
        let lam = lambda_leq(2);
        for field in [Field::Rationals, Field::Prime(5)] {
            let e = Representation::constant(&lam.category, field);
            let tor = category_homology(&lam.category, &e, 3).unwrap();
            let bar = bar_homology(&lam.category, &e, 3).unwrap();
            assert_eq!(tor, bar);
            assert_eq!(tor, vec![1, 0, 1, 0]);
        }
    }

    #[test]
    fn truncated_lambda_has_truncated_polynomial_cohomology() {
        for n in 1..=3 {
            let lam = lambda_leq(n);
            for field in [Field::Rationals, Field::Prime(5)] {
                let e = Representation::constant(&lam.category, field);
                let dims = category_homology(&lam.category, &e, 5).unwrap();
                let expect: Vec<usize> = (0..=5).map(|i| usize::from(i % 2 == 0 && i < 2 * n)).collect();
                assert_eq!(dims, expect, "Λ≤{n} over {field}");
            }
        }
    }

    #[test]
    fn complexes_of_representations() {
        let lam = lambda_leq(2);
        let cat = &lam.category;
        let f = Field::Rationals;
        let k = Representation::constant(cat, f);
        let id = vec![Matrix::identity(f, 1); 2];
        let zero = vec![Matrix::zeros(f, 1, 1); 2];
        // k in degree 0 alone, k -> k acyclic, and k ⊕ k[1]
        let single = tor_total_complex(cat, std::slice::from_ref(&k), &[], 5).unwrap();
        assert_eq!(single.homology_dims(), category_homology(cat, &k, 4).unwrap());
        let cone = tor_total_complex(cat, &[k.clone(), k.clone()], &[id], 4).unwrap();
        assert_eq!(cone.homology_dims(), vec![0; 4]);
        let split = tor_total_complex(cat, &[k.clone(), k], &[zero], 4).unwrap();
        assert_eq!(split.homology_dims(), vec![1, 1, 1, 1]);
    }
}
