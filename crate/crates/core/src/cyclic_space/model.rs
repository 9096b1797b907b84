//! Chain-level models of `HH` and `HC` together with the maps of the Connes
//! sequence `HH_n -> HC_n -> HC_{n-2} -> HH_{n-1}`.

use rayon::prelude::*;

use super::bicomplex::{cyclic_bicomplex, extra_degeneracy, hochschild_b, norm_map, one_minus_tau};
use super::cyclic::{CyclicMap, CyclicVectorSpace};
use crate::exactlin::{ChainComplex, Field, Matrix, Quotient, Subspace};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Total complex of the cyclic bicomplex.
    Tsygan,
    /// Normalized chains with `b + B`.
    Normalized,
}

/// `hoch` is a Hochschild complex and `tot` a cyclic complex, both up to
/// degree `top`, with chain maps
/// `inclusion[n] : hoch_n -> tot_n`, `shift[n] : tot_n -> tot_{n-2}` and a
/// connecting map `connecting[n] : tot_{n-2} -> hoch_{n-1}` on cycles.
#[derive(Clone, Debug)]
pub struct CyclicModel {
    pub kind: ModelKind,
    pub top: usize,
    pub hoch: ChainComplex,
    pub tot: ChainComplex,
    pub inclusion: Vec<Matrix>,
    /// Empty for `n < 2`.
    pub shift: Vec<Matrix>,
    /// Empty for `n < 2`.
    pub connecting: Vec<Matrix>,
}

impl CyclicModel {
    /// Builds the model up to degree `top`; homology is valid below `top`.
    pub fn build(e: &CyclicVectorSpace, kind: ModelKind, top: usize) -> Result<Self, Error> {
        if top + 1 > e.n_max() {
            return Err(Error::Truncation(format!(
                "a model up to degree {top} needs objects up to [{}], have [{}]",
                top + 1,
                e.n_max()
            )));
        }
        match kind {
            ModelKind::Tsygan => tsygan_model(e, top),
            ModelKind::Normalized => normalized_model(e, top),
        }
    }

    pub fn field(&self) -> Field {
        self.hoch.field()
    }

    /// Highest degree with reliable homology.
    pub fn max_degree(&self) -> usize {
        self.top - 1
    }

    /// Audits `d² = 0` and the chain-map identities of `inclusion` and `shift`.
    pub fn check(&self) -> Result<(), Error> {
        self.hoch.check()?;
        self.tot.check()?;
        for n in 1..=self.top {
            let lhs = self.tot.d(n).compose(&self.inclusion[n]);
            let rhs = self.inclusion[n - 1].compose(&self.hoch.d(n));
            if lhs != rhs {
                return Err(Error::Audit(format!("inclusion is not a chain map in degree {n}")));
            }
        }
        for n in 3..=self.top {
            let lhs = self.tot.d(n - 2).compose(&self.shift[n]);
            let rhs = self.shift[n - 1].compose(&self.tot.d(n));
            if lhs != rhs {
                return Err(Error::Audit(format!("shift is not a chain map in degree {n}")));
            }
        }
        for n in 2..=self.top {
            if !self.shift[n].compose(&self.inclusion[n]).is_zero() {
                return Err(Error::Audit(format!("shift ∘ inclusion ≠ 0 in degree {n}")));
            }
        }
        Ok(())
    }
}

fn identity_block(field: Field, rows: &[usize], cols: &[usize], pairs: &[(usize, usize)]) -> Matrix {
    let ids: Vec<Matrix> = pairs.iter().map(|&(_, c)| Matrix::identity(field, cols[c])).collect();
    let mut grid: Vec<Vec<Option<&Matrix>>> = vec![vec![None; cols.len()]; rows.len()];
    for (k, &(r, c)) in pairs.iter().enumerate() {
        grid[r][c] = Some(&ids[k]);
    }
    Matrix::from_blocks(field, rows, cols, &grid)
}

fn tsygan_model(e: &CyclicVectorSpace, top: usize) -> Result<CyclicModel, Error> {
    let field = e.field();
    let bc = cyclic_bicomplex(e, top, top)?;
    let tot = bc.total(top);
    let hoch = ChainComplex::new_unchecked(field, e.dim(1), (1..=top).map(|q| bc.vertical(0, q).clone()).collect());
    let inclusion = (0..=top)
        .map(|n| identity_block(field, &bc.total_blocks(n), &[e.dim(n + 1)], &[(0, 0)]))
        .collect();
    let shift = (0..=top)
        .map(|n| {
            if n < 2 {
                return Matrix::zeros(field, 0, 0);
            }
            let src = bc.total_blocks(n);
            let tgt = bc.total_blocks(n - 2);
            let pairs: Vec<(usize, usize)> = (2..src.len()).map(|p| (p - 2, p)).collect();
            identity_block(field, &tgt, &src, &pairs)
        })
        .collect();
    // lifting a cycle two columns up and applying D leaves only N out of
    // column 2; the retraction x ↦ (1 - τ) s x returns it to column 0
    let connecting = (0..=top)
        .into_par_iter()
        .map(|n| {
            if n < 2 {
                return Matrix::zeros(field, 0, 0);
            }
            let b = one_minus_tau(e, n - 1)
                .compose(&extra_degeneracy(e, n - 2))
                .compose(&norm_map(e, n - 2));
            let src = bc.total_blocks(n - 2);
            let mut grid = vec![vec![None; src.len()]];
            grid[0][0] = Some(&b);
            Matrix::from_blocks(field, &[e.dim(n)], &src, &grid)
        })
        .collect();
    Ok(CyclicModel {
        kind: ModelKind::Tsygan,
        top,
        hoch,
        tot,
        inclusion,
        shift,
        connecting,
    })
}

/// The map `tot_n(E) -> tot_n(F)` induced by `f : E -> F`, for `n ≤ top`.
pub fn tot_chain_map(
    src: &CyclicVectorSpace,
    tgt: &CyclicVectorSpace,
    f: &CyclicMap,
    kind: ModelKind,
    top: usize,
) -> Result<Vec<Matrix>, Error> {
    let field = src.field();
    if f.components.len() < top + 1 {
        return Err(Error::Truncation(format!("the map needs components up to [{}]", top + 1)));
    }
    match kind {
        ModelKind::Tsygan => Ok((0..=top)
            .map(|n| {
                let blocks: Vec<&Matrix> = (0..=n).map(|p| f.component(n - p + 1)).collect();
                Matrix::block_diag(field, &blocks)
            })
            .collect()),
        ModelKind::Normalized => {
            let (qs, qt) = (degenerate_quotients(src, top), degenerate_quotients(tgt, top));
            let induced = (0..=top)
                .map(|n| qs[n].induced(f.component(n + 1), &qt[n]))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((0..=top)
                .map(|n| {
                    let blocks: Vec<&Matrix> = (0..=n / 2).map(|k| &induced[n - 2 * k]).collect();
                    Matrix::block_diag(field, &blocks)
                })
                .collect())
        }
    }
}

/// Unnormalized Connes operator `B = (1 - τ) s N : E([q+1]) -> E([q+2])`.
pub fn connes_b_chain(e: &CyclicVectorSpace, q: usize) -> Matrix {
    one_minus_tau(e, q + 1).compose(&extra_degeneracy(e, q)).compose(&norm_map(e, q))
}

/// Quotients of `E([n+1])` by the images of the degeneracies, `n ≤ top`.
pub fn degenerate_quotients(e: &CyclicVectorSpace, top: usize) -> Vec<Quotient> {
    (0..=top)
        .into_par_iter()
        .map(|n| {
            let vecs = (0..n).flat_map(|i| e.degeneracy(n, i).columns().to_vec());
            Quotient::new(Subspace::span(e.field(), e.dim(n + 1), vecs))
        })
        .collect()
}

fn normalized_model(e: &CyclicVectorSpace, top: usize) -> Result<CyclicModel, Error> {
    let field = e.field();
    let quots = degenerate_quotients(e, top);
    let b_bar = (1..=top)
        .into_par_iter()
        .map(|n| quots[n].induced(&hochschild_b(e, n), &quots[n - 1]))
        .collect::<Result<Vec<_>, _>>()?;
    // bb[n] : C̄_n -> C̄_{n+1}
    let bb = (0..top)
        .into_par_iter()
        .map(|n| quots[n].induced(&connes_b_chain(e, n), &quots[n + 1]))
        .collect::<Result<Vec<_>, _>>()?;
    let cbar = |n: usize| quots[n].dim();
    let blocks = |n: usize| -> Vec<usize> { (0..=n / 2).map(|k| cbar(n - 2 * k)).collect() };
    let hoch = ChainComplex::new_unchecked(field, cbar(0), b_bar.clone());
    let diffs = (1..=top)
        .map(|n| {
            let src = blocks(n);
            let tgt = blocks(n - 1);
            let mut grid: Vec<Vec<Option<&Matrix>>> = vec![vec![None; src.len()]; tgt.len()];
            for k in 0..src.len() {
                let deg = n - 2 * k;
                if deg >= 1 {
                    grid[k][k] = Some(&b_bar[deg - 1]);
                }
                if k >= 1 {
                    grid[k - 1][k] = Some(&bb[deg]);
                }
            }
            Matrix::from_blocks(field, &tgt, &src, &grid)
        })
        .collect();
    let tot = ChainComplex::new_unchecked(field, cbar(0), diffs);
    let inclusion = (0..=top).map(|n| identity_block(field, &blocks(n), &[cbar(n)], &[(0, 0)])).collect();
    let shift = (0..=top)
        .map(|n| {
            if n < 2 {
                return Matrix::zeros(field, 0, 0);
            }
            let src = blocks(n);
            let pairs: Vec<(usize, usize)> = (1..src.len()).map(|k| (k - 1, k)).collect();
            identity_block(field, &blocks(n - 2), &src, &pairs)
        })
        .collect();
    let connecting = (0..=top)
        .map(|n| {
            if n < 2 {
                return Matrix::zeros(field, 0, 0);
            }
            let src = blocks(n - 2);
            let mut grid = vec![vec![None; src.len()]];
            grid[0][0] = Some(&bb[n - 2]);
            Matrix::from_blocks(field, &[cbar(n - 1)], &src, &grid)
        })
        .collect();
    Ok(CyclicModel {
        kind: ModelKind::Normalized,
        top,
        hoch,
        tot,
        inclusion,
        shift,
        connecting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FinAlgebra;
    use crate::cyclic_space::build_a_sharp;

    #[test]
    fn models_are_consistent() {
        for name in ["k", "k[x]/x^2", "T2"] {
            for f in [Field::Rationals, Field::Prime(2)] {
                let a = FinAlgebra::builtin(name, f).unwrap();
                let e = build_a_sharp(&a, 5);
                for kind in [ModelKind::Tsygan, ModelKind::Normalized] {
                    CyclicModel::build(&e, kind, 4).unwrap().check().unwrap();
                }
            }
        }
    }

    #[test]
    fn models_agree_on_homology() {
        for name in ["k", "k[x]/x^2", "k[x]/x^3", "k[C2]"] {
            for f in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
                let a = FinAlgebra::builtin(name, f).unwrap();
                let e = build_a_sharp(&a, 6);
                let t = CyclicModel::build(&e, ModelKind::Tsygan, 5).unwrap();
                let n = CyclicModel::build(&e, ModelKind::Normalized, 5).unwrap();
                assert_eq!(t.tot.homology_dims(), n.tot.homology_dims(), "{name} over {f:?}");
                assert_eq!(t.hoch.homology_dims(), n.hoch.homology_dims(), "{name} over {f:?}");
            }
        }
    }

    #[test]
    fn connes_b_anticommutes_with_b() {
        let a = FinAlgebra::builtin("M2", Field::Prime(3)).unwrap();
        let e = build_a_sharp(&a, 4);
        for q in 1..=2 {
            let lhs = hochschild_b(&e, q + 1).compose(&connes_b_chain(&e, q));
            let rhs = connes_b_chain(&e, q - 1).compose(&hochschild_b(&e, q));
            assert!(lhs.add(&rhs).is_zero());
        }
        for q in 0..=1 {
            assert!(connes_b_chain(&e, q + 1).compose(&connes_b_chain(&e, q)).is_zero());
        }
    }

    #[test]
    fn counit_induces_chain_maps() {
        use crate::cyclic_bimod::{counit, j_shriek, restrict};
        let a = FinAlgebra::dual_numbers(Field::Prime(3));
        let e = build_a_sharp(&a, 5);
        let je = j_shriek(&restrict(&e), 5).unwrap();
        let f = counit(&e, 5);
        for kind in [ModelKind::Tsygan, ModelKind::Normalized] {
            let (ms, mt) = (CyclicModel::build(&je, kind, 4).unwrap(), CyclicModel::build(&e, kind, 4).unwrap());
            let phi = tot_chain_map(&je, &e, &f, kind, 4).unwrap();
            for n in 1..=4 {
                assert_eq!(mt.tot.d(n).compose(&phi[n]), phi[n - 1].compose(&ms.tot.d(n)), "{kind:?} {n}");
            }
        }
    }
}
