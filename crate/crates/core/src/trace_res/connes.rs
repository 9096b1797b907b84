//! Connes' `B` from a resolution: `ι = tr(h)`, `ι' = -tr(h) ∘ σ`, and
//! `ι' - ι` read on homology through `tr(τ₁)`.

use serde::{Deserialize, Serialize};

use super::free::FreeMap;
use super::resolution::{bar_resolution, BimoduleResolution};
use super::tensor::{find_homotopy, sigma_on_trace, tensor_res, HomotopyData, SolveOrder, TensorSquare};
use crate::cyclic_space::{build_a_sharp, connes_b, hochschild_b, hochschild_bases};
use crate::exactlin::{inverse, rank, ChainComplex, HomologyBasis, Matrix, Scalar, Solver};
use crate::Error;

/// Everything the recipe produces up to `max_degree`.
#[derive(Clone, Debug)]
pub struct TraceB {
    pub max_degree: usize,
    pub order: SolveOrder,
    pub tensor: TensorSquare,
    pub homotopy: HomotopyData,
    /// `x[n] = ι' - ι : tr(P ⊗ P)_n -> tr(P)_{n+1}`.
    pub x: Vec<Matrix>,
    /// `b[n] : HH_n -> HH_{n+1}` in the homology bases of `tr(P)`.
    pub b: Vec<Matrix>,
}

impl TraceB {
    pub fn ranks(&self) -> Vec<usize> {
        self.b.iter().map(rank).collect()
    }
}

fn basis(c: &ChainComplex, n: usize) -> HomologyBasis {
    c.homology_basis(n)
}

/// `B : HH_n -> HH_{n+1}` for `n ≤ max_degree`; needs `P` up to `P_{max_degree + 2}`.
pub fn connes_b_via_trace(res: &BimoduleResolution, max_degree: usize, order: SolveOrder) -> Result<TraceB, Error> {
    if res.length() < max_degree + 2 {
        return Err(Error::Truncation(format!(
            "B up to degree {max_degree} needs a resolution of length {}",
            max_degree + 2
        )));
    }
    let a = &res.algebra;
    let f = a.field();
    let ts = tensor_res(res, max_degree + 1)?;
    let h = find_homotopy(res, &ts, order)?;
    let trp = res.trace_complex();
    let trt = ts.trace_complex(res);
    let x: Vec<Matrix> = (0..=max_degree + 1)
        .map(|n| {
            let th = h.maps[n].trace(a, &ts.layouts[n], &res.layouts[n + 1]);
            let s = sigma_on_trace(res, &ts, n);
            th.compose(&s.add(&Matrix::identity(f, s.rows()))).neg()
        })
        .collect();
    for n in 0..=max_degree + 1 {
        let lhs = trp.d(n + 1).compose(&x[n]);
        let rhs = if n == 0 { Matrix::zeros(f, lhs.rows(), lhs.cols()) } else { x[n - 1].compose(&trt.d(n)).neg() };
        if lhs != rhs {
            return Err(Error::Audit(format!("ι' - ι does not commute with the differentials in degree {n}")));
        }
    }
    let mut b = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let (t1, _) = ts.trace_taus(res, n);
        let src = basis(&trt, n);
        let iso = src.induced(&t1, &basis(&trp, n))?;
        let inv = inverse(&iso).map_err(|_| Error::Audit(format!("tr(τ₁) is not an isomorphism on H_{n}")))?;
        let xn = src.induced(&x[n], &basis(&trp, n + 1))?;
        b.push(xn.compose(&inv));
    }
    Ok(TraceB {
        max_degree,
        order,
        tensor: ts,
        homotopy: h,
        x,
        b,
    })
}

/// A chain map `φ : P -> Bar` over the identity of `A`, by generators.
pub fn lift_to_bar(res: &BimoduleResolution, bar: &BimoduleResolution, top: usize) -> Result<Vec<FreeMap>, Error> {
    let a = &res.algebra;
    let eps = Solver::new(&bar.augmentation_matrix());
    let mut maps: Vec<FreeMap> = Vec::new();
    for n in 0..=top {
        let images = if n == 0 {
            res.augmentation
                .iter()
                .map(|e| eps.solve(e).ok_or_else(|| Error::Audit("augmentation of the bar resolution is not onto".into())))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            let solver = Solver::new(&bar.diff_matrix(n));
            let prev = maps[n - 1].after(a, res.diff(n), &res.layouts[n - 1], &bar.layouts[n - 1]);
            prev.images
                .iter()
                .map(|v| solver.solve(v).ok_or_else(|| Error::Audit(format!("cannot lift into the bar resolution in degree {n}"))))
                .collect::<Result<Vec<_>, _>>()?
        };
        maps.push(FreeMap { images });
    }
    Ok(maps)
}

/// `tr(Bar_n) -> A^{⊗(n+1)}`, `[1 ⊗ a_1 ⊗ … ⊗ a_n ⊗ c] ↦ c ⊗ a_1 ⊗ … ⊗ a_n`.
pub fn bar_trace_to_hochschild(bar: &BimoduleResolution, n: usize) -> Matrix {
    let a = &bar.algebra;
    let d = a.dim();
    let f = a.field();
    let dn = d.pow(n as u32);
    let cols = (0..bar.layouts[n].trace_dim()).map(|idx| vec![((idx % d) * dn + idx / d, f.one())]).collect();
    Matrix::from_columns(f, d * dn, cols)
}

/// How the recipe compares with `B` on the Hochschild complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BComparison {
    pub max_degree: usize,
    pub trace_ranks: Vec<usize>,
    pub bicomplex_ranks: Vec<usize>,
    /// The constant `c` with `B_trace = c · B_bicomplex`; `None` when both vanish.
    pub sign: Option<String>,
    pub agrees: bool,
}

/// Transports `B_trace` to the Hochschild complex along `P -> Bar ≅ C(A)`
/// and finds one global constant relating it to the bicomplex `B`.
pub fn compare_with_bicomplex(res: &BimoduleResolution, tb: &TraceB) -> Result<BComparison, Error> {
    let a = &res.algebra;
    let f = a.field();
    let top = tb.max_degree + 1;
    let bar = bar_resolution(a, top + 1)?;
    let phi = lift_to_bar(res, &bar, top)?;
    let e = build_a_sharp(a, top + 3);
    let bar_tr = bar.trace_complex();
    for n in 1..=top {
        let lhs = bar_trace_to_hochschild(&bar, n - 1).compose(&bar_tr.d(n));
        if lhs != hochschild_b(&e, n).compose(&bar_trace_to_hochschild(&bar, n)) {
            return Err(Error::Audit(format!("tr(Bar) and the Hochschild complex disagree in degree {n}")));
        }
    }
    let trp = res.trace_complex();
    let transport = |n: usize, target: &HomologyBasis| -> Result<Matrix, Error> {
        let m = bar_trace_to_hochschild(&bar, n).compose(&phi[n].trace(a, &res.layouts[n], &bar.layouts[n]));
        trp.homology_basis(n).induced(&m, target)
    };
    let mut sign: Option<Scalar> = None;
    let mut agrees = true;
    let mut bicomplex_ranks = Vec::new();
    for n in 0..=tb.max_degree {
        let (lo, hi) = hochschild_bases(&e, n)?;
        let bc = connes_b(&e, n)?;
        bicomplex_ranks.push(rank(&bc));
        let lhs = transport(n + 1, &hi)?.compose(&tb.b[n]);
        let rhs = bc.compose(&transport(n, &lo)?);
        if rhs.is_zero() {
            agrees &= lhs.is_zero();
            continue;
        }
        let (r, c, v) = rhs.triplets().next().map(|(r, c, v)| (r, c, v.clone())).expect("nonzero matrix");
        let ratio = &lhs.get(r, c) * &v.inv();
        match &sign {
            Some(s) if *s != ratio => agrees = false,
            _ => sign = Some(ratio.clone()),
        }
        agrees &= lhs == rhs.scale(&ratio);
    }
    if let Some(s) = &sign {
        agrees &= *s == f.one() || *s == -f.one();
    }
    Ok(BComparison {
        max_degree: tb.max_degree,
        trace_ranks: tb.ranks(),
        bicomplex_ranks,
        sign: sign.map(|s| if s == -f.one() { "-1".to_string() } else { s.to_string() }),
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FinAlgebra;
    use crate::exactlin::Field;
    use crate::trace_res::periodic_resolution;

    #[test]
    fn b_vanishes_for_k() {
        let k = FinAlgebra::ground(Field::Rationals);
        let r = bar_resolution(&k, 4).unwrap();
        let tb = connes_b_via_trace(&r, 2, SolveOrder::Natural).unwrap();
        assert!(tb.b.iter().all(Matrix::is_zero));
        let cmp = compare_with_bicomplex(&r, &tb).unwrap();
        assert!(cmp.agrees);
        assert_eq!(cmp.sign, None);
    }

    #[test]
    fn dual_numbers_periodic() {
        let r = periodic_resolution(2, Field::Rationals, 5).unwrap();
        let tb = connes_b_via_trace(&r, 3, SolveOrder::Natural).unwrap();
        assert_eq!(tb.ranks()[0], 1);
        let cmp = compare_with_bicomplex(&r, &tb).unwrap();
        assert!(cmp.agrees, "{cmp:?}");
        assert_eq!(cmp.trace_ranks, cmp.bicomplex_ranks);
        assert_eq!(cmp.sign.as_deref(), Some("-1"));
        let other = connes_b_via_trace(&r, 3, SolveOrder::Reversed).unwrap();
        assert_eq!(other.b, tb.b);
    }

    #[test]
    fn dual_numbers_bar_matches_periodic_ranks() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let bar = bar_resolution(&a, 4).unwrap();
        let tb = connes_b_via_trace(&bar, 2, SolveOrder::Natural).unwrap();
        let per = connes_b_via_trace(&periodic_resolution(2, Field::Rationals, 4).unwrap(), 2, SolveOrder::Natural).unwrap();
        assert_eq!(tb.ranks(), per.ranks());
        let cmp = compare_with_bicomplex(&bar, &tb).unwrap();
        assert!(cmp.agrees, "{cmp:?}");
    }

    #[test]
    fn sign_is_stable_across_fields() {
        for f in [Field::Prime(2), Field::Prime(3)] {
            let r = periodic_resolution(3, f, 4).unwrap();
            let tb = connes_b_via_trace(&r, 2, SolveOrder::Reversed).unwrap();
            let cmp = compare_with_bicomplex(&r, &tb).unwrap();
            assert!(cmp.agrees);
            assert_eq!(cmp.sign.as_deref(), Some("-1"));
        }
    }

    #[test]
    fn b_vanishes_for_matrices() {
        let a = FinAlgebra::matrix_algebra(Field::Rationals, 2);
        let r = bar_resolution(&a, 3).unwrap();
        let tb = connes_b_via_trace(&r, 1, SolveOrder::Natural).unwrap();
        assert!(tb.b.iter().all(Matrix::is_zero));
        assert!(compare_with_bicomplex(&r, &tb).unwrap().agrees);
    }

    #[test]
    fn psi_is_a_chain_map_for_matrices() {
        let a = FinAlgebra::matrix_algebra(Field::Rationals, 2);
        let bar = bar_resolution(&a, 2).unwrap();
        let e = build_a_sharp(&a, 3);
        let tr = bar.trace_complex();
        for n in 1..=2 {
            assert_eq!(
                bar_trace_to_hochschild(&bar, n - 1).compose(&tr.d(n)),
                hochschild_b(&e, n).compose(&bar_trace_to_hochschild(&bar, n))
            );
        }
    }
}
