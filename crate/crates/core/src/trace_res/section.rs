//! The section over `Λ≤2` after taking traces: `[1] ↦ tr P`,
//! `[2] ↦ tr cone(P ⊗_A P -> P ⊕ P)`.
//!
//! In internal degree `n`, `E([2]) = tr(P ⊗ P)_{n-1} ⊕ tr P_n ⊕ tr P_n` with
//! `D(x, a, b) = (-Dx, τ₁x + da, τ₂x + db)`. The generators act by
//! `σ(x, a, b) = (-σx, -b, -a)`, `d(a) = (0, a, 0)`, `s(x, a, b) = tr(h)x + a - b`
//! and `s' = s σ`.

use serde::{Deserialize, Serialize};

use super::resolution::BimoduleResolution;
use super::tensor::{find_homotopy, sigma_on_trace, tensor_res, HomotopyData, SolveOrder, TensorSquare};
use crate::exactlin::{rank, Matrix};
use crate::lambda_cat::{category_homology, lambda_leq, tor_total_complex, Generator, LambdaTruncation, Representation};
use crate::Error;

#[derive(Clone, Debug)]
pub struct Lambda2Section {
    /// Internal degrees `0..=top`.
    pub top: usize,
    pub lambda: LambdaTruncation,
    pub reps: Vec<Representation>,
    /// `internal[q-1][o] : E_q(o) -> E_{q-1}(o)`.
    pub internal: Vec<Vec<Matrix>>,
}

struct Pieces {
    sigma: Matrix,
    d: Matrix,
    s: Matrix,
    s2: Matrix,
    id1: Matrix,
}

fn pieces(res: &BimoduleResolution, ts: &TensorSquare, h: &HomotopyData, n: usize) -> Pieces {
    let a = &res.algebra;
    let f = a.field();
    let p = res.layouts[n].trace_dim();
    let t = if n == 0 { 0 } else { ts.layouts[n - 1].trace_dim() };
    let id = Matrix::identity(f, p);
    let sk = if n == 0 { Matrix::zeros(f, 0, 0) } else { sigma_on_trace(res, ts, n - 1).neg() };
    let minus = id.neg();
    let sigma = Matrix::from_blocks(
        f,
        &[t, p, p],
        &[t, p, p],
        &[vec![Some(&sk), None, None], vec![None, None, Some(&minus)], vec![None, Some(&minus), None]],
    );
    let d = Matrix::from_blocks(f, &[t, p, p], &[p], &[vec![None], vec![Some(&id)], vec![None]]);
    let th = if n == 0 { Matrix::zeros(f, p, 0) } else { h.maps[n - 1].trace(a, &ts.layouts[n - 1], &res.layouts[n]) };
    let s = Matrix::from_blocks(f, &[p], &[t, p, p], &[vec![Some(&th), Some(&id), Some(&minus)]]);
    let s2 = s.compose(&sigma);
    Pieces { sigma, d, s, s2, id1: id }
}

/// Builds the section in internal degrees `0..=top`; needs `P` up to `P_top`.
pub fn lambda2_section(res: &BimoduleResolution, ts: &TensorSquare, h: &HomotopyData, top: usize) -> Result<Lambda2Section, Error> {
    if top > res.length() || (top >= 1 && (ts.top() < top - 1 || h.maps.len() < top)) {
        return Err(Error::Truncation(format!("the Λ≤2 section up to degree {top} needs P_{top} and h_{}", top.max(1) - 1)));
    }
    let f = res.algebra.field();
    let lambda = lambda_leq(2);
    let cat = &lambda.category;
    let trp = res.trace_complex();
    let trt = ts.trace_complex(res);
    let mut reps = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let pc = pieces(res, ts, h, n);
        let dims = vec![pc.id1.rows(), pc.sigma.rows()];
        let maps = lambda
            .morphisms
            .iter()
            .map(|m| {
                let mut acc = Matrix::identity(f, dims[m.source() - 1]);
                for g in m.decompose() {
                    let step = match g {
                        Generator::Rotation { n: 1 } => &pc.id1,
                        Generator::Rotation { .. } => &pc.sigma,
                        Generator::Degeneracy { .. } => &pc.d,
                        Generator::Face { i: 0, .. } => &pc.s,
                        Generator::Face { .. } => &pc.s2,
                    };
                    acc = step.compose(&acc);
                }
                acc
            })
            .collect();
        reps.push(Representation::new(cat, f, dims, maps)?);
    }
    let mut internal = Vec::with_capacity(top);
    for q in 1..=top {
        let p0 = res.layouts[q - 1].trace_dim();
        let p1 = res.layouts[q].trace_dim();
        let t0 = if q == 1 { 0 } else { ts.layouts[q - 2].trace_dim() };
        let t1 = ts.layouts[q - 1].trace_dim();
        let dt = if q == 1 { Matrix::zeros(f, 0, t1) } else { trt.d(q - 1).neg() };
        let (tau1, tau2) = ts.trace_taus(res, q - 1);
        let dp = trp.d(q);
        let cone = Matrix::from_blocks(
            f,
            &[t0, p0, p0],
            &[t1, p1, p1],
            &[
                vec![Some(&dt), None, None],
                vec![Some(&tau1), Some(&dp), None],
                vec![Some(&tau2), None, Some(&dp)],
            ],
        );
        internal.push(vec![dp.clone(), cone]);
    }
    Ok(Lambda2Section {
        top,
        lambda,
        reps,
        internal,
    })
}

/// `H_n(Λ≤2, tr P^#)` against `HH_n + HH_{n-2} - rk B_{n-1} - rk B_{n-2}`,
/// compared in the degrees `< compared` where `H_*(Λ≤2, k)` is still
/// `k, 0, k, 0, …`; in characteristic 2 the automorphisms of `[2]` add
/// classes from degree 3 on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lambda2Report {
    pub homology: Vec<usize>,
    pub compared: usize,
    pub hh: Vec<usize>,
    pub b_ranks: Vec<usize>,
    pub predicted: Vec<usize>,
    pub agrees: bool,
}

/// Runs the section on a resolution of length `L ≥ 3` and compares in
/// total degrees `0..L-1`.
pub fn lambda2_check(res: &BimoduleResolution, order: SolveOrder) -> Result<Lambda2Report, Error> {
    let len = res.length();
    if len < 3 {
        return Err(Error::Truncation("the Λ≤2 comparison needs a resolution of length at least 3".into()));
    }
    let top = len - 1;
    let ts = tensor_res(res, top)?;
    let h = find_homotopy(res, &ts, order)?;
    let sec = lambda2_section(res, &ts, &h, top)?;
    let tot = tor_total_complex(&sec.lambda.category, &sec.reps, &sec.internal, top)?;
    let homology = tot.homology_dims();
    let hh: Vec<usize> = res.trace_complex().homology_dims();
    let tb = super::connes::connes_b_via_trace(res, len - 2, order)?;
    let b_ranks: Vec<usize> = tb.b.iter().map(rank).collect();
    let get = |v: &[usize], k: isize| if k < 0 { 0 } else { v[k as usize] };
    let predicted: Vec<usize> = (0..homology.len() as isize)
        .map(|n| get(&hh, n) + get(&hh, n - 2) - get(&b_ranks, n - 1) - get(&b_ranks, n - 2))
        .collect();
    let constant = category_homology(&sec.lambda.category, &Representation::constant(&sec.lambda.category, res.algebra.field()), top)?;
    let compared = (0..homology.len())
        .find(|&n| constant[n] != usize::from(n == 0 || n == 2))
        .unwrap_or(homology.len());
    let agrees = homology[..compared] == predicted[..compared];
    Ok(Lambda2Report {
        homology,
        compared,
        hh,
        b_ranks,
        predicted,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FinAlgebra;
    use crate::exactlin::Field;
    use crate::trace_res::{bar_resolution, periodic_resolution};

    #[test]
    fn section_for_k() {
        let k = FinAlgebra::ground(Field::Rationals);
        let r = bar_resolution(&k, 4).unwrap();
        let rep = lambda2_check(&r, SolveOrder::Natural).unwrap();
        assert_eq!(rep.homology, vec![1, 0, 1]);
        assert_eq!(rep.compared, 3);
        assert!(rep.agrees);
    }

    #[test]
    fn sigma_squares_to_one() {
        let r = periodic_resolution(2, Field::Rationals, 3).unwrap();
        let ts = tensor_res(&r, 2).unwrap();
        let h = find_homotopy(&r, &ts, SolveOrder::Natural).unwrap();
        for n in 0..=3 {
            let pc = pieces(&r, &ts, &h, n);
            assert_eq!(pc.sigma.compose(&pc.sigma), Matrix::identity(Field::Rationals, pc.sigma.rows()));
            assert_eq!(pc.s.compose(&pc.d), pc.id1);
            assert_eq!(pc.s2.compose(&pc.d), pc.id1);
        }
    }

    #[test]
    fn section_for_dual_numbers() {
        let r = periodic_resolution(2, Field::Rationals, 6).unwrap();
        let rep = lambda2_check(&r, SolveOrder::Natural).unwrap();
        assert_eq!(rep.homology, vec![2, 0, 2, 1, 1]);
        assert_eq!(rep.compared, 5);
        assert!(rep.agrees);
        let r = periodic_resolution(2, Field::Prime(2), 5).unwrap();
        let rep = lambda2_check(&r, SolveOrder::Reversed).unwrap();
        assert_eq!(rep.compared, 3);
        assert!(rep.agrees, "{rep:?}");
    }
}
