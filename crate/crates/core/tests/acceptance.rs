mod common;

use std::time::{Duration, Instant};

use cychom::algebra::{hh, hh_cohomology, Bimodule, FinAlgebra};
use cychom::cyclic_bimod::{build_m_sharp, j_shriek, restrict, tautological_tau};
use cychom::cyclic_space::{build_a_sharp, connes_sequence_check, hc, hp, periodicity_map, CyclicVectorSpace, ModelKind};
use cychom::deform::{gauss_manin_splitting, goodwillie_check, hp_objects, square_zero};
use cychom::exactlin::{Field, SparseVec};
use cychom::lambda_cat::{category_homology, hom_set, lambda_leq, Representation};
use cychom::trace_res::{bar_resolution, compare_with_bicomplex, connes_b_via_trace, periodic_resolution, BimoduleResolution, SolveOrder};

const Q: Field = Field::Rationals;

fn corpus(f: Field) -> Vec<(&'static str, FinAlgebra)> {
    FinAlgebra::BUILTINS.iter().map(|&n| (n, FinAlgebra::builtin(n, f).unwrap())).collect()
}

/// Prints one line per criterion and fails the test when the criterion does.
fn record(n: usize, name: &str, start: Instant, limit: Option<Duration>, ok: bool, detail: String) {
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let status = if ok && in_time { "PASS" } else { "FAIL" };
    println!("[{status}] {n:>2}. {name} ({:.2} s) {detail}", elapsed.as_secs_f64());
    assert!(ok, "criterion {n} ({name}) failed: {detail}");
    assert!(in_time, "criterion {n} ({name}) took {elapsed:?}, limit {limit:?}");
}

#[test]
fn c01_cyclic_hom_set_sizes() {
    let t = Instant::now();
    let sizes: Vec<usize> = (1..=5).map(|n| hom_set(1, n).len()).collect();
    let ok = sizes == vec![1, 2, 3, 4, 5];
    record(1, "|Hom([1],[n])| = n", t, Some(Duration::from_secs(1)), ok, format!("{sizes:?}"));
}

#[test]
fn c02_homology_of_truncations() {
    let t = Instant::now();
    let mut detail = Vec::new();
    let mut ok = true;
    for f in [Q, Field::Prime(5)] {
        for n in 1..=3 {
            let lam = lambda_leq(n);
            let h = category_homology(&lam.category, &Representation::constant(&lam.category, f), 5).unwrap();
            let expected: Vec<usize> = (0..=5).map(|i| usize::from(i % 2 == 0 && i <= 2 * (n - 1))).collect();
            ok &= h == expected;
            detail.push(format!("{f:?} n={n}: {h:?}"));
        }
    }
    record(2, "H_*(Λ≤n, k)", t, Some(Duration::from_secs(60)), ok, detail.join("; "));
}

#[test]
fn c03_hc_of_constant() {
    let t = Instant::now();
    let h = hc(&CyclicVectorSpace::constant(Q, 8), 6).unwrap();
    let ok = h == vec![1, 0, 1, 0, 1, 0, 1];
    record(3, "HC_*(k)", t, None, ok, format!("{h:?}"));
}

#[test]
fn c04_hh_of_free_bimodule() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for f in [Q, Field::Prime(3)] {
        for name in ["k[x]/x^2", "k[C2]", "M2"] {
            let a = FinAlgebra::builtin(name, f).unwrap();
            let h = hh(&a, &Bimodule::free(&a), 3);
            ok &= h == vec![a.dim(), 0, 0, 0];
            detail.push(format!("{name}/{f:?}: {h:?}"));
        }
    }
    record(4, "HH_*(A, A ⊗ A)", t, None, ok, detail.join("; "));
}

#[test]
fn c05_connes_sequence_exact() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for f in [Q, Field::Prime(3)] {
        for (name, a) in corpus(f) {
            let rep = connes_sequence_check(&build_a_sharp(&a, 7), 5).unwrap();
            if !rep.exact() {
                bad.push(format!("{name}/{f:?}"));
            }
        }
    }
    record(5, "Connes sequence exact in degrees 0..5", t, None, bad.is_empty(), format!("failures: {bad:?}"));
}

#[test]
fn c06_periodicity_vanishes_on_induced() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for f in [Q, Field::Prime(2)] {
        for name in ["k", "k[x]/x^2"] {
            let a = FinAlgebra::builtin(name, f).unwrap();
            let n = hp_objects(4, 1);
            let je = j_shriek(&restrict(&build_a_sharp(&a, n)), n).unwrap();
            let u_zero = (2..=6).all(|i| periodicity_map(&je, i).unwrap().is_zero());
            let dims: Vec<usize> = hp(&je, 4, 1).unwrap().iter().map(|d| d.dim).collect();
            ok &= u_zero && dims.iter().all(|&d| d == 0);
            detail.push(format!("{name}/{f:?}: u=0 {u_zero}, HP {dims:?}"));
        }
    }
    record(6, "u = 0 and HP = 0 on j_! j^* A_#", t, None, ok, detail.join("; "));
}

#[test]
fn c07_tautological_m_sharp() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for f in [Q, Field::Prime(3)] {
        for (name, a) in corpus(f) {
            let m = build_m_sharp(&tautological_tau(&a), 4).unwrap();
            if m != build_a_sharp(&a, 4) {
                bad.push(format!("{name}/{f:?}"));
            }
        }
    }
    record(7, "M_# = A_# for the tautological τ", t, None, bad.is_empty(), format!("failures: {bad:?}"));
}

#[test]
fn c08_trace_b_matches_bicomplex() {
    let t = Instant::now();
    let dual = FinAlgebra::dual_numbers(Q);
    let m2 = FinAlgebra::builtin("M2", Q).unwrap();
    let cases: Vec<(&str, BimoduleResolution)> = vec![
        ("k[x]/x^2 bar", bar_resolution(&dual, 5).unwrap()),
        ("k[x]/x^2 periodic", periodic_resolution(2, Q, 5).unwrap()),
        ("M2 bar", bar_resolution(&m2, 5).unwrap()),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, res) in &cases {
        let tb = connes_b_via_trace(res, 3, SolveOrder::Natural).unwrap();
        let cmp = compare_with_bicomplex(res, &tb).unwrap();
        let sign_ok = matches!(cmp.sign.as_deref(), None | Some("1") | Some("-1"));
        ok &= cmp.agrees && sign_ok;
        detail.push(format!("{name}: ranks {:?}, sign {:?}", cmp.trace_ranks, cmp.sign));
    }
    record(8, "B via traces against the bicomplex", t, Some(Duration::from_secs(300)), ok, detail.join("; "));
}

#[test]
fn c09_gauss_manin_splitting() {
    let t = Instant::now();
    let a = FinAlgebra::dual_numbers(Q);
    let m = Bimodule::diagonal(&a);
    let classes = hh_cohomology(&a, &m, 2).unwrap().degree_two;
    let mut cocycles: Vec<(&str, SparseVec)> = vec![("c = 0", Vec::new())];
    if let Some(c) = classes.first() {
        cocycles.push(("c ∈ HH²", c.clone()));
    }
    let mut ok = classes.len() == 1;
    let mut detail = Vec::new();
    for (name, c) in &cocycles {
        let ext = square_zero(&a, &m, c).unwrap();
        let rep = gauss_manin_splitting(&ext, &tautological_tau(&a), 1, 3).unwrap();
        let stable: Vec<_> = rep.degrees.iter().filter(|d| d.stabilized).collect();
        let dims_ok = !stable.is_empty() && stable.iter().all(|d| d.hp_ahat == d.hp_a + d.hp_m);
        ok &= dims_ok && rep.passed();
        let dims: Vec<(usize, usize, usize, bool)> = rep.degrees.iter().map(|d| (d.hp_ahat, d.hp_a, d.hp_m, d.stabilized)).collect();
        detail.push(format!("{name}: (Â, A, M, stable) {dims:?}"));
    }
    record(9, "HP(Â_#) = HP(A_#) ⊕ HP(M_#)", t, None, ok, detail.join("; "));
}

#[test]
fn c10_goodwillie() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    let dual = FinAlgebra::dual_numbers(Q);
    let k = FinAlgebra::ground(Q);
    for (name, a, window) in [("k[x]/x^2 ⊕ A", &dual, 2), ("k ⊕ k", &k, 3)] {
        let ext = square_zero(a, &Bimodule::diagonal(a), &[]).unwrap();
        let rep = goodwillie_check(&ext, 1, window, ModelKind::Tsygan).unwrap();
        ok &= rep.asserted && rep.passed() && rep.degrees.iter().any(|d| d.stabilized);
        let dims: Vec<(usize, usize)> = rep.degrees.iter().map(|d| (d.hp_tilde, d.hp_a)).collect();
        detail.push(format!("{name}/Q: {dims:?}"));
    }
    let k2 = FinAlgebra::ground(Field::Prime(2));
    let ext = square_zero(&k2, &Bimodule::diagonal(&k2), &[]).unwrap();
    let rep = goodwillie_check(&ext, 1, 3, ModelKind::Tsygan).unwrap();
    ok &= !rep.asserted;
    let dims: Vec<(usize, usize)> = rep.degrees.iter().map(|d| (d.hp_tilde, d.hp_a)).collect();
    detail.push(format!("k ⊕ k/F2 (recorded): {dims:?}"));
    record(10, "HP(Ã) = HP(A) in characteristic 0", t, None, ok, detail.join("; "));
}

#[test]
fn c11_properties() {
    let t = Instant::now();
    let failures = common::run_all(16);
    record(11, "property suite", t, None, failures.is_empty(), format!("failures: {failures:?}"));
}
