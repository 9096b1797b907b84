//! Homology-level operations: `HH`, `HC`, the periodicity map, the Connes
//! sequence, `HP` towers and the Connes operator on `HH`.

use rayon::prelude::*;
use serde::Serialize;

use super::cyclic::CyclicVectorSpace;
use super::model::{connes_b_chain, degenerate_quotients, CyclicModel, ModelKind};
use super::bicomplex::hochschild_b;
use crate::exactlin::{rank, ChainComplex, HomologyBasis, Matrix};
use crate::Error;

fn require(e: &CyclicVectorSpace, objects: usize, what: &str) -> Result<(), Error> {
    if e.n_max() < objects {
        return Err(Error::Truncation(format!(
            "{what} needs objects up to [{objects}], have [{}]",
            e.n_max()
        )));
    }
    Ok(())
}

/// `HH_i(E)` for `i ≤ max_degree`, from `E([n+1])` with `b = Σ (-1)^i δ_i`.
pub fn hh_of_cyclic(e: &CyclicVectorSpace, max_degree: usize) -> Result<Vec<usize>, Error> {
    require(e, max_degree + 2, "HH up to this degree")?;
    let diffs = (1..=max_degree + 1).into_par_iter().map(|q| hochschild_b(e, q)).collect();
    Ok(ChainComplex::new_unchecked(e.field(), e.dim(1), diffs).homology_dims())
}

/// `HC_i(E)` for `i ≤ max_degree` through the cyclic bicomplex.
pub fn hc(e: &CyclicVectorSpace, max_degree: usize) -> Result<Vec<usize>, Error> {
    hc_with(e, max_degree, ModelKind::Tsygan)
}

pub fn hc_with(e: &CyclicVectorSpace, max_degree: usize, kind: ModelKind) -> Result<Vec<usize>, Error> {
    require(e, max_degree + 2, "HC up to this degree")?;
    let m = CyclicModel::build(e, kind, max_degree + 1)?;
    Ok(m.tot.homology_dims())
}

/// Homology bases of a model, computed once per degree.
pub struct ModelHomology {
    pub model: CyclicModel,
    /// `hh[n]` for `n < top`.
    pub hh: Vec<HomologyBasis>,
    /// `hc[n]` for `n < top`.
    pub hc: Vec<HomologyBasis>,
}

impl ModelHomology {
    pub fn new(model: CyclicModel) -> Self {
        let top = model.top;
        let (hh, hc) = rayon::join(
            || (0..top).into_par_iter().map(|n| model.hoch.homology_basis(n)).collect(),
            || (0..top).into_par_iter().map(|n| model.tot.homology_basis(n)).collect(),
        );
        ModelHomology { model, hh, hc }
    }

    pub fn max_degree(&self) -> usize {
        self.model.max_degree()
    }

    pub fn hh_dims(&self) -> Vec<usize> {
        self.hh.iter().map(|h| h.dim()).collect()
    }

    pub fn hc_dims(&self) -> Vec<usize> {
        self.hc.iter().map(|h| h.dim()).collect()
    }

    /// `I : HH_n -> HC_n`.
    pub fn inclusion(&self, n: usize) -> Result<Matrix, Error> {
        self.hh[n].induced(&self.model.inclusion[n], &self.hc[n])
    }

    /// `S = u : HC_n -> HC_{n-2}`.
    pub fn periodicity(&self, n: usize) -> Result<Matrix, Error> {
        assert!(n >= 2);
        self.hc[n].induced(&self.model.shift[n], &self.hc[n - 2])
    }

    /// `∂ : HC_{n-2} -> HH_{n-1}`.
    pub fn connecting(&self, n: usize) -> Result<Matrix, Error> {
        assert!(n >= 2);
        self.hc[n - 2].induced(&self.model.connecting[n], &self.hh[n - 1])
    }

    /// `u^k : HC_{i+2k} -> HC_i`.
    pub fn periodicity_power(&self, i: usize, k: usize) -> Result<Matrix, Error> {
        let mut acc = Matrix::identity(self.model.field(), self.hc[i + 2 * k].dim());
        for j in (1..=k).rev() {
            acc = self.periodicity(i + 2 * j)?.compose(&acc);
        }
        Ok(acc)
    }
}

/// `u : HC_i -> HC_{i-2}` on chosen homology bases.
pub fn periodicity_map(e: &CyclicVectorSpace, i: usize) -> Result<Matrix, Error> {
    if i < 2 {
        return Err(Error::Invalid("the periodicity map starts in degree 2".into()));
    }
    require(e, i + 2, "the periodicity map from this degree")?;
    let h = ModelHomology::new(CyclicModel::build(e, ModelKind::Tsygan, i + 1)?);
    h.periodicity(i)
}

/// Exactness at one node `in -> X -> out` of the Connes sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub node: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnesReport {
    pub hh: Vec<usize>,
    pub hc: Vec<usize>,
    pub nodes: Vec<NodeReport>,
}

impl ConnesReport {
    pub fn exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }
}

fn node(name: String, dim: usize, m_in: &Matrix, m_out: &Matrix) -> NodeReport {
    let composite_zero = m_out.compose(m_in).is_zero();
    let (rank_in, rank_out) = (rank(m_in), rank(m_out));
    NodeReport {
        node: name,
        dim,
        rank_in,
        rank_out,
        composite_zero,
        exact: composite_zero && rank_in + rank_out == dim,
    }
}

/// Assembles `HH_n -> HC_n -> HC_{n-2} -> HH_{n-1}` for `n ≤ max_degree`
/// and checks exactness at each node.
pub fn connes_sequence_check(e: &CyclicVectorSpace, max_degree: usize) -> Result<ConnesReport, Error> {
    connes_sequence_check_with(e, max_degree, ModelKind::Tsygan)
}

pub fn connes_sequence_check_with(e: &CyclicVectorSpace, max_degree: usize, kind: ModelKind) -> Result<ConnesReport, Error> {
    require(e, max_degree + 2, "the Connes sequence up to this degree")?;
    let h = ModelHomology::new(CyclicModel::build(e, kind, max_degree + 1)?);
    connes_sequence_of(&h, max_degree)
}

pub fn connes_sequence_of(h: &ModelHomology, max_degree: usize) -> Result<ConnesReport, Error> {
    let field = h.model.field();
    let top = max_degree;
    let inc = (0..=top).map(|n| h.inclusion(n)).collect::<Result<Vec<_>, _>>()?;
    let zero = |r: usize, c: usize| Matrix::zeros(field, r, c);
    // per[n] : HC_n -> HC_{n-2}, zero codomain for n < 2
    let per = (0..=top)
        .map(|n| if n < 2 { Ok(zero(0, h.hc[n].dim())) } else { h.periodicity(n) })
        .collect::<Result<Vec<_>, _>>()?;
    // con[n] : HC_{n-2} -> HH_{n-1}, zero domain for n < 2
    let con = (0..=top + 1)
        .map(|n| match n {
            0 => Ok(zero(0, 0)),
            1 => Ok(zero(h.hh[0].dim(), 0)),
            _ => h.connecting(n),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut nodes = Vec::new();
    for n in 0..=top {
        nodes.push(node(format!("HH_{n}"), h.hh[n].dim(), &con[n + 1], &inc[n]));
        nodes.push(node(format!("HC_{n}"), h.hc[n].dim(), &inc[n], &per[n]));
        if n >= 2 {
            nodes.push(node(format!("HC_{} after u", n - 2), h.hc[n - 2].dim(), &per[n], &con[n]));
        }
    }
    Ok(ConnesReport {
        hh: h.hh_dims()[..=top].to_vec(),
        hc: h.hc_dims()[..=top].to_vec(),
        nodes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HpDegree {
    pub degree: usize,
    /// `rank(u^k : HC_{i+2k} -> HC_i)` for `k = 0, 1, …`.
    pub tower_ranks: Vec<usize>,
    pub stabilized: bool,
    pub dim: usize,
}

/// Eventual image dimensions of the `u`-towers `HC_{i+2k} -> HC_i`.
///
/// A degree is stabilized when the last `window` ranks of `u^k`,
/// `k = 1..=window+1`, agree; its value is then that rank.
pub fn hp(e: &CyclicVectorSpace, max_degree: usize, window: usize) -> Result<Vec<HpDegree>, Error> {
    hp_with(e, max_degree, window, ModelKind::Tsygan)
}

pub fn hp_with(e: &CyclicVectorSpace, max_degree: usize, window: usize, kind: ModelKind) -> Result<Vec<HpDegree>, Error> {
    let deepest = max_degree + 2 * (window + 1);
    require(e, deepest + 2, "the HP tower at this window")?;
    let h = ModelHomology::new(CyclicModel::build(e, kind, deepest + 1)?);
    hp_of(&h, max_degree, window)
}

pub fn hp_of(h: &ModelHomology, max_degree: usize, window: usize) -> Result<Vec<HpDegree>, Error> {
    if window == 0 {
        return Err(Error::Invalid("the stabilization window must be positive".into()));
    }
    if max_degree + 2 * (window + 1) > h.max_degree() {
        return Err(Error::Truncation("the model is too short for this window".into()));
    }
    (0..=max_degree)
        .map(|i| {
            let mut ranks = vec![h.hc[i].dim()];
            let mut acc = Matrix::identity(h.model.field(), h.hc[i].dim());
            for k in 1..=window + 1 {
                acc = acc.compose(&h.periodicity(i + 2 * k)?);
                ranks.push(rank(&acc));
            }
            let tail = &ranks[ranks.len() - window..];
            let stabilized = tail.iter().all(|r| *r == tail[0]);
            Ok(HpDegree {
                degree: i,
                dim: *ranks.last().unwrap(),
                tower_ranks: ranks,
                stabilized,
            })
        })
        .collect()
}

/// `B : HH_i -> HH_{i+1}` induced by `(1 - τ) s N` on the unnormalized
/// Hochschild complex, in the bases of `hochschild_bases`.
pub fn connes_b(e: &CyclicVectorSpace, i: usize) -> Result<Matrix, Error> {
    let (lo, hi) = hochschild_bases(e, i)?;
    lo.induced(&connes_b_chain(e, i), &hi)
}

/// Homology bases of `HH_i` and `HH_{i+1}` for the unnormalized complex.
pub fn hochschild_bases(e: &CyclicVectorSpace, i: usize) -> Result<(HomologyBasis, HomologyBasis), Error> {
    require(e, i + 3, "B out of this degree")?;
    let d = |q: usize| if q == 0 { Matrix::zeros(e.field(), 0, e.dim(1)) } else { hochschild_b(e, q) };
    let (b_i, b_i1, b_i2) = (d(i), d(i + 1), d(i + 2));
    Ok((HomologyBasis::new(&b_i, &b_i1), HomologyBasis::new(&b_i1, &b_i2)))
}

/// Checks that the unnormalized `B` descends to the normalized complex, that
/// `bB + Bb = 0` and `B² = 0` there, and that both induce maps of equal rank
/// on `HH` in degrees `≤ max_degree`.
pub fn audit_connes_b(e: &CyclicVectorSpace, max_degree: usize) -> Result<(), Error> {
    require(e, max_degree + 3, "the B audit")?;
    let quots = degenerate_quotients(e, max_degree + 2);
    let bb = (0..=max_degree + 1)
        .map(|n| quots[n].induced(&connes_b_chain(e, n), &quots[n + 1]))
        .collect::<Result<Vec<_>, _>>()?;
    let bbar = (1..=max_degree + 2)
        .map(|n| quots[n].induced(&hochschild_b(e, n), &quots[n - 1]))
        .collect::<Result<Vec<_>, _>>()?;
    for n in 0..=max_degree {
        if !bb[n + 1].compose(&bb[n]).is_zero() {
            return Err(Error::Audit(format!("B² ≠ 0 on normalized chains of degree {n}")));
        }
        // b_{n+1} B_n + B_{n-1} b_n
        let mut s = bbar[n].compose(&bb[n]);
        if n >= 1 {
            s = s.add(&bb[n - 1].compose(&bbar[n - 1]));
        }
        if !s.is_zero() {
            return Err(Error::Audit(format!("bB + Bb ≠ 0 on normalized chains of degree {n}")));
        }
    }
    let zero0 = Matrix::zeros(e.field(), 0, quots[0].dim());
    let bbar_at = |n: usize| if n == 0 { &zero0 } else { &bbar[n - 1] };
    for i in 0..=max_degree {
        let full = rank(&connes_b(e, i)?);
        let lo = HomologyBasis::new(bbar_at(i), bbar_at(i + 1));
        let hi = HomologyBasis::new(bbar_at(i + 1), bbar_at(i + 2));
        let norm = rank(&lo.induced(&bb[i], &hi)?);
        if full != norm {
            return Err(Error::Audit(format!(
                "B on HH_{i} has rank {full} unnormalized but {norm} normalized"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{hh, Bimodule, FinAlgebra};
    use crate::cyclic_space::build_a_sharp;
    use crate::exactlin::Field;

    #[test]
    fn point_has_polynomial_hc() {
        let e = CyclicVectorSpace::constant(Field::Rationals, 8);
        assert_eq!(hc(&e, 6).unwrap(), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(hh_of_cyclic(&e, 4).unwrap(), vec![1, 0, 0, 0, 0]);
        let u = periodicity_map(&e, 2).unwrap();
        assert_eq!(u, Matrix::identity(Field::Rationals, 1));
        for i in 0..3 {
            assert!(connes_b(&e, i).unwrap().is_zero());
        }
    }

    #[test]
    fn truncation_reported() {
        let e = CyclicVectorSpace::constant(Field::Rationals, 3);
        assert!(matches!(hc(&e, 2), Err(Error::Truncation(_))));
        assert!(hc(&e, 1).is_ok());
    }

    #[test]
    fn hh_of_a_sharp_matches_algebra() {
        for name in FinAlgebra::BUILTINS {
            for f in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
                let a = FinAlgebra::builtin(name, f).unwrap();
                let top = if a.dim() > 3 { 3 } else { 4 };
                let e = build_a_sharp(&a, top + 2);
                let diag = Bimodule::diagonal(&a);
                assert_eq!(hh_of_cyclic(&e, top).unwrap(), hh(&a, &diag, top), "{name} over {f:?}");
            }
        }
    }

    #[test]
    fn hc0_is_the_trace() {
        for name in FinAlgebra::BUILTINS {
            let a = FinAlgebra::builtin(name, Field::Rationals).unwrap();
            let e = build_a_sharp(&a, 3);
            let tr = crate::algebra::trace(&Bimodule::diagonal(&a)).dim();
            assert_eq!(hc(&e, 1).unwrap()[0], tr);
        }
    }

    #[test]
    fn connes_sequence_exact_for_small_algebras() {
        for name in ["k", "k[x]/x^2", "k[C2]", "T2"] {
            for f in [Field::Rationals, Field::Prime(2)] {
                let a = FinAlgebra::builtin(name, f).unwrap();
                let e = build_a_sharp(&a, 6);
                let r = connes_sequence_check(&e, 4).unwrap();
                assert!(r.exact(), "{name} over {f:?}: {r:?}");
            }
        }
    }

    #[test]
    fn hp_of_point_and_dual_numbers() {
        let e = CyclicVectorSpace::constant(Field::Rationals, 12);
        let r = hp(&e, 1, 3).unwrap();
        assert!(r.iter().all(|d| d.stabilized));
        assert_eq!(r.iter().map(|d| d.dim).collect::<Vec<_>>(), vec![1, 0]);
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let e = build_a_sharp(&a, 12);
        let r = hp_with(&e, 1, 3, ModelKind::Normalized).unwrap();
        assert!(r.iter().all(|d| d.stabilized));
        assert_eq!(r.iter().map(|d| d.dim).collect::<Vec<_>>(), vec![1, 0]);
    }

    #[test]
    fn b_on_dual_numbers() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let e = build_a_sharp(&a, 6);
        assert_eq!(rank(&connes_b(&e, 0).unwrap()), 1);
        audit_connes_b(&e, 3).unwrap();
        let m2 = FinAlgebra::matrix_algebra(Field::Rationals, 2);
        audit_connes_b(&build_a_sharp(&m2, 5), 2).unwrap();
    }
}
