//! The pushout `Â_#`, the splitting `HP(A) -> HP(Â_#)` and the comparison
//! `HP(Ã_#)` against `HP(A_#)`.

use rayon::prelude::*;
use serde::Serialize;

use super::extension::SquareZeroExtension;
use super::filtered::{abar_sharp, filtered_a_tilde_sharp, AbarData};
use crate::cyclic_bimod::{tau_sharp, CyclicBimodule};
use crate::cyclic_space::{
    build_a_sharp, hp_of, tot_chain_map, CyclicMap, CyclicModel, CyclicVectorSpace, HpDegree, ModelHomology, ModelKind,
};
use crate::exactlin::{inverse, kernel, rank, Matrix, Quotient, SparseVec, Subspace};
use crate::Error;

#[derive(Clone, Debug)]
pub struct AhatData {
    pub ahat: CyclicVectorSpace,
    pub m_sharp: CyclicVectorSpace,
    pub abar: AbarData,
    pub tau_sharp: CyclicMap,
    pub from_m: CyclicMap,
    pub from_abar: CyclicMap,
    pub to_a: CyclicMap,
}

impl AhatData {
    /// Naturality of the structure maps, exactness of
    /// `0 -> M_# -> Â_# -> A_# -> 0`, and the left square of the pushout
    /// commuting and cartesian.
    pub fn audit(&self) -> Result<(), Error> {
        let ab = &self.abar;
        let gr1 = &ab.gr1;
        self.tau_sharp.audit(gr1, &self.m_sharp)?;
        self.from_m.audit(&self.m_sharp, &self.ahat)?;
        self.from_abar.audit(&ab.abar.space, &self.ahat)?;
        self.to_a.audit(&self.ahat, &ab.a_sharp)?;
        for n in 1..=self.ahat.n_max() {
            let (i, p) = (self.from_m.component(n), self.to_a.component(n));
            if !p.compose(i).is_zero() || rank(i) != i.cols() || rank(p) != p.rows() || i.cols() + p.rows() != self.ahat.dim(n) {
                return Err(Error::Audit(format!("0 -> M_# -> Â_# -> A_# -> 0 is not exact on [{n}]")));
            }
            let j = self.from_abar.component(n);
            if p.compose(j) != *ab.projection.component(n) {
                return Err(Error::Audit(format!("Ā_# -> Â_# -> A_# differs from the projection on [{n}]")));
            }
            let iota = ab.inclusion.component(n);
            let tau = self.tau_sharp.component(n);
            if i.compose(tau) != j.compose(iota) {
                return Err(Error::Audit(format!("the pushout square does not commute on [{n}]")));
            }
            // the pullback M_# ×_Â Ā_# is the kernel of (i | -j)
            let pullback = kernel(&i.hstack(&j.neg()));
            let diag = tau.vstack(iota);
            if pullback.dim() != gr1.dim(n) || rank(&diag) != gr1.dim(n) {
                return Err(Error::Audit(format!("the pushout square is not cartesian on [{n}]")));
            }
        }
        Ok(())
    }
}

/// `Â_#([n]) = (M_#([n]) ⊕ Ā_#([n])) / {(τ_# x, -ι x)}`.
pub fn ahat_sharp(ext: &SquareZeroExtension, cb: &CyclicBimodule, n_max: usize) -> Result<AhatData, Error> {
    if cb.module != ext.fiber || cb.base != ext.base {
        return Err(Error::DimensionMismatch("the cyclic structure is on a different bimodule".into()));
    }
    let abar = abar_sharp(ext, n_max)?;
    let (_, m_sharp, tau) = tau_sharp(cb, n_max)?;
    let field = ext.base.field();
    let quots: Vec<Quotient> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let rel = tau.component(n).vstack(&abar.inclusion.component(n).neg());
            Quotient::new(Subspace::column_space(&rel))
        })
        .collect();
    let ab = &abar.abar.space;
    let sum = |g: &Matrix, h: &Matrix| Matrix::block_diag(field, &[g, h]);
    let dims = quots.iter().map(|q| q.dim()).collect();
    let rots = (1..=n_max)
        .map(|n| quots[n - 1].induced(&sum(m_sharp.rotation(n), ab.rotation(n)), &quots[n - 1]))
        .collect::<Result<Vec<_>, _>>()?;
    let faces = (1..n_max)
        .map(|n| {
            (0..=n)
                .map(|i| quots[n].induced(&sum(m_sharp.face(n, i), ab.face(n, i)), &quots[n - 1]))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let degens = (1..n_max)
        .map(|n| {
            (0..n)
                .map(|i| quots[n - 1].induced(&sum(m_sharp.degeneracy(n, i), ab.degeneracy(n, i)), &quots[n]))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ahat = CyclicVectorSpace::from_parts(field, dims, faces, degens, rots)?;
    let mut from_m = Vec::new();
    let mut from_abar = Vec::new();
    let mut to_a = Vec::new();
    for n in 1..=n_max {
        let q = &quots[n - 1];
        let (dm, da) = (m_sharp.dim(n), ab.dim(n));
        let proj = q.projection();
        from_m.push(proj.compose(&Matrix::identity(field, dm).embed(dm + da, dm, 0, 0)));
        from_abar.push(proj.compose(&Matrix::identity(field, da).embed(dm + da, da, dm, 0)));
        let p = abar.projection.component(n);
        to_a.push(Matrix::zeros(field, p.rows(), dm).hstack(p).compose(&q.lift_matrix()));
    }
    Ok(AhatData {
        ahat,
        m_sharp,
        abar,
        tau_sharp: tau,
        from_m: CyclicMap { components: from_m },
        from_abar: CyclicMap { components: from_abar },
        to_a: CyclicMap { components: to_a },
    })
}

/// Objects needed for `HP` in degrees `≤ max_degree` with the given window.
pub fn hp_objects(max_degree: usize, window: usize) -> usize {
    max_degree + 2 * (window + 1) + 2
}

/// `HC` bases of a model with its `HP` towers, and the eventual images
/// `im(u^K : HC_{i+2K} -> HC_i)` used as `HP_i`.
struct HpApprox {
    homology: ModelHomology,
    degrees: Vec<HpDegree>,
    images: Vec<Subspace>,
}

impl HpApprox {
    fn new(e: &CyclicVectorSpace, kind: ModelKind, max_degree: usize, window: usize) -> Result<Self, Error> {
        let top = hp_objects(max_degree, window) - 1;
        let homology = ModelHomology::new(CyclicModel::build(e, kind, top)?);
        let degrees = hp_of(&homology, max_degree, window)?;
        let images = (0..=max_degree)
            .map(|i| Ok(Subspace::column_space(&homology.periodicity_power(i, window + 1)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(HpApprox { homology, degrees, images })
    }

    /// The map on `HC_i` induced by a cyclic map, in the chosen bases.
    fn hc_map(&self, target: &HpApprox, tot: &[Matrix], i: usize) -> Result<Matrix, Error> {
        self.homology.hc[i].induced(&tot[i], &target.homology.hc[i])
    }

    /// The restriction of `hc` to eventual images, in their echelon bases.
    fn hp_map(&self, target: &HpApprox, hc: &Matrix, i: usize) -> Result<Matrix, Error> {
        let field = hc.field();
        let cols = self.images[i]
            .basis()
            .iter()
            .map(|v| {
                target.images[i]
                    .coordinates(&hc.apply(v))
                    .ok_or_else(|| Error::Audit(format!("the induced map leaves the eventual image in degree {i}")))
            })
            .collect::<Result<Vec<SparseVec>, _>>()?;
        Ok(Matrix::from_columns(field, target.images[i].dim(), cols))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitDegree {
    pub degree: usize,
    pub stabilized: bool,
    pub hp_ahat: usize,
    pub hp_a: usize,
    pub hp_m: usize,
    pub hp_abar: usize,
    /// `HP(Ā_#) -> HP(A_#)` is invertible.
    pub abar_iso: bool,
    /// `HP(Â_#) -> HP(A_#)` composed with the splitting is the identity.
    pub is_section: bool,
    pub split_dims: bool,
    /// `HP_i(A) -> HP_i(Â_#)` in echelon bases of the eventual images.
    pub splitting: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub window: usize,
    pub degrees: Vec<SplitDegree>,
}

impl SplittingReport {
    /// Every stabilized degree passed all checks.
    pub fn passed(&self) -> bool {
        self.degrees
            .iter()
            .filter(|d| d.stabilized)
            .all(|d| d.abar_iso && d.is_section && d.split_dims)
    }
}

fn hp_comparison(
    src: &CyclicVectorSpace,
    tgt: &CyclicVectorSpace,
    f: &CyclicMap,
    hs: &HpApprox,
    ht: &HpApprox,
    kind: ModelKind,
    max_degree: usize,
) -> Result<Vec<Matrix>, Error> {
    let tot = tot_chain_map(src, tgt, f, kind, hs.homology.model.top)?;
    (0..=max_degree)
        .map(|i| {
            let hc = hs.hc_map(ht, &tot, i)?;
            hs.hp_map(ht, &hc, i)
        })
        .collect()
}

pub fn gauss_manin_splitting(
    ext: &SquareZeroExtension,
    cb: &CyclicBimodule,
    max_degree: usize,
    window: usize,
) -> Result<SplittingReport, Error> {
    let kind = ModelKind::Tsygan;
    let n_max = hp_objects(max_degree, window);
    let data = ahat_sharp(ext, cb, n_max)?;
    let a_sharp = &data.abar.a_sharp;
    let abar = &data.abar.abar.space;
    let spaces = [&data.ahat, a_sharp, &data.m_sharp, abar];
    let approx = spaces
        .par_iter()
        .map(|e| HpApprox::new(e, kind, max_degree, window))
        .collect::<Result<Vec<_>, _>>()?;
    let (h_hat, h_a, h_m, h_bar) = (&approx[0], &approx[1], &approx[2], &approx[3]);
    let bar_to_a = hp_comparison(abar, a_sharp, &data.abar.projection, h_bar, h_a, kind, max_degree)?;
    let bar_to_hat = hp_comparison(abar, &data.ahat, &data.from_abar, h_bar, h_hat, kind, max_degree)?;
    let hat_to_a = hp_comparison(&data.ahat, a_sharp, &data.to_a, h_hat, h_a, kind, max_degree)?;
    let field = ext.base.field();
    let degrees = (0..=max_degree)
        .map(|i| {
            let stabilized = approx.iter().all(|h| h.degrees[i].stabilized);
            let (hp_ahat, hp_a, hp_m, hp_abar) = (
                h_hat.degrees[i].dim,
                h_a.degrees[i].dim,
                h_m.degrees[i].dim,
                h_bar.degrees[i].dim,
            );
            let g = &bar_to_a[i];
            let abar_iso = g.rows() == g.cols() && rank(g) == g.rows();
            let (splitting, is_section) = if abar_iso {
                let s = bar_to_hat[i].compose(&inverse(g)?);
                let section = hat_to_a[i].compose(&s) == Matrix::identity(field, hp_a);
                (s, section)
            } else {
                (Matrix::zeros(field, hp_ahat, hp_a), false)
            };
            Ok(SplitDegree {
                degree: i,
                stabilized,
                hp_ahat,
                hp_a,
                hp_m,
                hp_abar,
                abar_iso,
                is_section,
                split_dims: hp_ahat == hp_a + hp_m,
                splitting: splitting.to_dense().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(SplittingReport { window, degrees })
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodwillieDegree {
    pub degree: usize,
    pub stabilized: bool,
    pub hp_tilde: usize,
    pub hp_a: usize,
    pub tilde_ranks: Vec<usize>,
    pub a_ranks: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodwillieReport {
    pub characteristic: u64,
    pub window: usize,
    /// False over `F_p`, where the dims are only recorded.
    pub asserted: bool,
    pub degrees: Vec<GoodwillieDegree>,
}

impl GoodwillieReport {
    pub fn agrees(&self) -> bool {
        self.degrees.iter().filter(|d| d.stabilized).all(|d| d.hp_tilde == d.hp_a)
    }

    /// Agreement in characteristic 0; vacuous otherwise.
    pub fn passed(&self) -> bool {
        !self.asserted || self.agrees()
    }
}

pub fn goodwillie_check(ext: &SquareZeroExtension, max_degree: usize, window: usize, kind: ModelKind) -> Result<GoodwillieReport, Error> {
    let n_max = hp_objects(max_degree, window);
    let tilde = filtered_a_tilde_sharp(ext, n_max)?.space;
    let a = build_a_sharp(&ext.base, n_max);
    let (ht, ha) = rayon::join(
        || HpApprox::new(&tilde, kind, max_degree, window),
        || HpApprox::new(&a, kind, max_degree, window),
    );
    let (ht, ha) = (ht?, ha?);
    let characteristic = ext.base.field().characteristic();
    Ok(GoodwillieReport {
        characteristic,
        window,
        asserted: characteristic == 0,
        degrees: ht
            .degrees
            .iter()
            .zip(&ha.degrees)
            .map(|(t, a)| GoodwillieDegree {
                degree: t.degree,
                stabilized: t.stabilized && a.stabilized,
                hp_tilde: t.dim,
                hp_a: a.dim,
                tilde_ranks: t.tower_ranks.clone(),
                a_ranks: a.tower_ranks.clone(),
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Bimodule, FinAlgebra};
    use crate::cyclic_bimod::tautological_tau;
    use crate::deform::square_zero;
    use crate::exactlin::Field;

    #[test]
    fn ahat_of_dual_numbers() {
        let k = FinAlgebra::ground(Field::Rationals);
        let ext = square_zero(&k, &Bimodule::diagonal(&k), &[]).unwrap();
        let data = ahat_sharp(&ext, &tautological_tau(&k), 5).unwrap();
        assert_eq!(data.ahat.dims(), &[2, 2, 2, 2, 2]);
        data.audit().unwrap();
        data.ahat.audit_relations(5).unwrap();
    }

    #[test]
    fn ahat_is_exact_for_k_x_mod_x2() {
        for f in [Field::Rationals, Field::Prime(2)] {
            let a = FinAlgebra::dual_numbers(f);
            let ext = square_zero(&a, &Bimodule::diagonal(&a), &[]).unwrap();
            let data = ahat_sharp(&ext, &tautological_tau(&a), 4).unwrap();
            data.audit().unwrap();
            // A ⊗ k[ε] as a relative object: (dim A)^n (1 + 1)
            assert_eq!(data.ahat.dims(), &[4, 8, 16, 32]);
            data.ahat.audit_relations(4).unwrap();
        }
    }

    #[test]
    fn splitting_for_k() {
        let k = FinAlgebra::ground(Field::Rationals);
        let ext = square_zero(&k, &Bimodule::diagonal(&k), &[]).unwrap();
        let r = gauss_manin_splitting(&ext, &tautological_tau(&k), 1, 2).unwrap();
        assert!(r.passed());
        let dims: Vec<(usize, usize, usize)> = r.degrees.iter().map(|d| (d.hp_ahat, d.hp_a, d.hp_m)).collect();
        assert_eq!(dims, vec![(2, 1, 1), (0, 0, 0)]);
        assert!(r.degrees.iter().all(|d| d.stabilized));
    }

    #[test]
    fn goodwillie_for_k() {
        let k = FinAlgebra::ground(Field::Rationals);
        let zero = square_zero(&k, &Bimodule::zero(&k), &[]).unwrap();
        let r = goodwillie_check(&zero, 1, 2, ModelKind::Tsygan).unwrap();
        assert!(r.asserted && r.agrees());
        let eps = square_zero(&k, &Bimodule::diagonal(&k), &[]).unwrap();
        for kind in [ModelKind::Tsygan, ModelKind::Normalized] {
            let r = goodwillie_check(&eps, 1, 3, kind).unwrap();
            assert!(r.degrees.iter().all(|d| d.stabilized));
            assert!(r.passed());
            assert_eq!(r.degrees.iter().map(|d| d.hp_tilde).collect::<Vec<_>>(), vec![1, 0]);
        }
    }
}
