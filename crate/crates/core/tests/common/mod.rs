//! Properties shared by the proptest suites and the acceptance run.
#![allow(dead_code)]

use cychom::algebra::{cocycle_violation, Bimodule, FinAlgebra};
use cychom::cyclic_bimod::{check_cyclic_structure, tautological_tau};
use cychom::deform::{coboundary, square_zero};
use cychom::exactlin::{kernel_basis, rank, Field, Matrix, SparseVec};
use cychom::trace_res::{connes_b_via_trace, periodic_resolution, sigma_on_trace, tensor_res, SolveOrder};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(7))]
}

/// Sparse matrices up to 9×9 with small integer entries.
pub fn sparse_matrix() -> impl Strategy<Value = Matrix> {
    (field_strategy(), 1usize..10, 1usize..10).prop_flat_map(|(f, r, c)| {
        prop::collection::vec((0..r, 0..c, -3i64..=3), 0..(r * c).min(20))
            .prop_map(move |t| Matrix::from_triplets(f, r, c, t.into_iter().map(|(i, j, v)| (i, j, f.from_i64(v)))).unwrap())
    })
}

pub fn rank_nullity(m: &Matrix) -> Result<(), TestCaseError> {
    let k = kernel_basis(m);
    prop_assert_eq!(rank(m) + k.len(), m.cols());
    for v in &k {
        prop_assert!(m.apply(v).is_empty());
    }
    Ok(())
}

/// Over `F_7`: the scaled tautological structure passes exactly when `λ³ = 1`.
pub fn scaled_tau_detection(lambda: i64) -> Result<(), TestCaseError> {
    let f = Field::Prime(7);
    let a = FinAlgebra::dual_numbers(f);
    let l = f.from_i64(lambda);
    let passes = check_cyclic_structure(&tautological_tau(&a).scaled(&l)).passed();
    prop_assert_eq!(passes, l.pow(3).is_one());
    Ok(())
}

pub fn corpus_algebra() -> impl Strategy<Value = FinAlgebra> {
    (prop::sample::select(vec!["k", "k[x]/x^2", "k[C2]", "T2"]), field_strategy())
        .prop_map(|(n, f)| FinAlgebra::builtin(n, f).unwrap())
}

/// A random 2-cochain, optionally forced to be a coboundary.
pub fn cochain_case() -> impl Strategy<Value = (FinAlgebra, SparseVec, bool)> {
    corpus_algebra().prop_flat_map(|a| {
        let d = a.dim();
        let f = a.field();
        (Just(a), prop::collection::vec(-2i64..=2, d * d * d), prop::collection::vec(-2i64..=2, d * d), any::<bool>()).prop_map(
            move |(a, c, h, exact)| {
                let m = Bimodule::diagonal(&a);
                let v: SparseVec = if exact {
                    let h: SparseVec = h.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, f.from_i64(*x))).collect();
                    coboundary(&a, &m, &h).unwrap()
                } else {
                    c.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, f.from_i64(*x))).collect()
                };
                (a, v, exact)
            },
        )
    })
}

/// `c` is a cocycle exactly when `A ⊕ M` with `c` is associative.
pub fn cocycle_iff_associative(a: &FinAlgebra, c: &SparseVec, exact: bool) -> Result<(), TestCaseError> {
    let m = Bimodule::diagonal(a);
    let cocycle = cocycle_violation(a, &m, c).is_none();
    let assoc = square_zero(a, &m, c).is_ok();
    prop_assert_eq!(cocycle, assoc);
    if exact {
        prop_assert!(cocycle);
    }
    Ok(())
}

pub fn resolution_case() -> impl Strategy<Value = (usize, Field)> {
    (2usize..=3, prop_oneof![Just(Field::Rationals), Just(Field::Prime(2)), Just(Field::Prime(3))])
}

pub fn sigma_squared(m: usize, f: Field) -> Result<(), TestCaseError> {
    let r = periodic_resolution(m, f, 3).unwrap();
    let ts = tensor_res(&r, 3).unwrap();
    for n in 0..=3 {
        let s = sigma_on_trace(&r, &ts, n);
        prop_assert_eq!(s.compose(&s), Matrix::identity(f, s.rows()));
    }
    Ok(())
}

/// `d X + X D = 0` for `X = ι' - ι`, checked again from the returned matrices.
pub fn iota_difference_is_chain_map(m: usize, f: Field) -> Result<(), TestCaseError> {
    let r = periodic_resolution(m, f, 4).unwrap();
    let tb = connes_b_via_trace(&r, 2, SolveOrder::Natural).unwrap();
    let trp = r.trace_complex();
    let trt = tb.tensor.trace_complex(&r);
    for n in 1..tb.x.len() {
        let lhs = trp.d(n + 1).compose(&tb.x[n]);
        let rhs = tb.x[n - 1].compose(&trt.d(n)).neg();
        prop_assert_eq!(lhs, rhs);
    }
    Ok(())
}

pub fn homotopy_independence(m: usize, f: Field) -> Result<(), TestCaseError> {
    let r = periodic_resolution(m, f, 5).unwrap();
    let a = connes_b_via_trace(&r, 3, SolveOrder::Natural).unwrap();
    let b = connes_b_via_trace(&r, 3, SolveOrder::Reversed).unwrap();
    prop_assert_eq!(a.ranks(), b.ranks());
    prop_assert_eq!(a.b, b.b);
    Ok(())
}

/// Runs every property with `cases` cases each; returns the failures.
pub fn run_all(cases: u32) -> Vec<String> {
    let mut failures = Vec::new();
    let runner = || TestRunner::new(Config::with_cases(cases));
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    record("rank-nullity", runner().run(&sparse_matrix(), |m| rank_nullity(&m)).map_err(|e| e.to_string()));
    record("scaled tau", runner().run(&(0i64..7), scaled_tau_detection).map_err(|e| e.to_string()));
    record(
        "cocycle iff associative",
        runner().run(&cochain_case(), |(a, c, e)| cocycle_iff_associative(&a, &c, e)).map_err(|e| e.to_string()),
    );
    record("sigma squared", runner().run(&resolution_case(), |(m, f)| sigma_squared(m, f)).map_err(|e| e.to_string()));
    record(
        "iota difference",
        runner().run(&resolution_case(), |(m, f)| iota_difference_is_chain_map(m, f)).map_err(|e| e.to_string()),
    );
    record(
        "homotopy independence",
        runner().run(&resolution_case(), |(m, f)| homotopy_independence(m, f)).map_err(|e| e.to_string()),
    );
    failures
}
