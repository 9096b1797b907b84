//! Cyclic bimodule structures `τ : A ⊗ M -> M ⊗ A`.
//!
//! `A ⊗ M` uses the index `a * dim M + m`, `M ⊗ A` uses `m * d + a`.

use serde::Serialize;

use crate::algebra::{Bimodule, FinAlgebra};
use crate::exactlin::{Matrix, Scalar};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicBimodule {
    pub base: FinAlgebra,
    pub module: Bimodule,
    pub tau: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureFailure {
    pub identity: String,
    /// Basis labels of the offending triple.
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub failures: Vec<StructureFailure>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl CyclicBimodule {
    /// Wraps the data after a shape check; use [`check_cyclic_structure`]
    /// for the identities.
    pub fn new(base: FinAlgebra, module: Bimodule, tau: Matrix) -> Result<Self, Error> {
        let n = base.dim() * module.dim();
        if tau.rows() != n || tau.cols() != n {
            return Err(Error::DimensionMismatch(format!("tau must be {n}x{n}")));
        }
        if module.alg_dim() != base.dim() || module.field() != base.field() {
            return Err(Error::DimensionMismatch("bimodule over a different algebra".into()));
        }
        Ok(CyclicBimodule { base, module, tau })
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        CyclicBimodule {
            base: self.base.clone(),
            module: self.module.clone(),
            tau: self.tau.scale(c),
        }
    }

    fn m_label(&self, m: usize) -> String {
        format!("m{m}")
    }
}

/// The tautological structure on the diagonal bimodule: in the index
/// conventions above it is the identity matrix, sending `a ⊗ m` to `a ⊗ m`
/// with `a` now read in `M` and `m` in `A`.
pub fn tautological_tau(a: &FinAlgebra) -> CyclicBimodule {
    let n = a.dim() * a.dim();
    CyclicBimodule {
        base: a.clone(),
        module: Bimodule::diagonal(a),
        tau: Matrix::identity(a.field(), n),
    }
}

/// `τ_{31} τ_{12} τ_{23} : A ⊗ A ⊗ M -> A ⊗ A ⊗ M`.
pub fn triple_composite(cb: &CyclicBimodule) -> Matrix {
    let d = cb.base.dim();
    let dm = cb.module.dim();
    let field = cb.base.field();
    let id_a = Matrix::identity(field, d);
    // A⊗(A⊗M) -> A⊗(M⊗A) -> (M⊗A)⊗A
    let t23 = id_a.kron(&cb.tau);
    let t12 = cb.tau.kron(&id_a);
    // M⊗A⊗A -> A⊗A⊗M, applying τ to the third and first factors
    let cols = (0..dm * d * d)
        .map(|idx| {
            let (m, a, b) = (idx / (d * d), (idx / d) % d, idx % d);
            let mut col: Vec<(usize, Scalar)> = cb
                .tau
                .column(b * dm + m)
                .iter()
                .map(|(r, c)| {
                    let (m2, a2) = (r / d, r % d);
                    ((a2 * d + a) * dm + m2, c.clone())
                })
                .collect();
            col.sort_by_key(|(r, _)| *r);
            col
        })
        .collect();
    let t31 = Matrix::from_columns(field, d * d * dm, cols);
    t31.compose(&t12).compose(&t23)
}

/// Checks the four action compatibilities and the triple identity, with a
/// witness for each failure.
pub fn check_cyclic_structure(cb: &CyclicBimodule) -> StructureReport {
    let a = &cb.base;
    let m = &cb.module;
    let d = a.dim();
    let dm = m.dim();
    let field = a.field();
    let (id_a, id_m) = (Matrix::identity(field, d), Matrix::identity(field, dm));
    let mut report = StructureReport::default();
    let checks: [(&str, Box<dyn Fn(usize) -> (Matrix, Matrix)>); 4] = [
        ("left action on A matches left action on M", Box::new(|x| (a.left_mult(x).kron(&id_m), m.left(x).kron(&id_a)))),
        ("right action on A matches right action on M", Box::new(|x| (a.right_mult(x).kron(&id_m), m.right(x).kron(&id_a)))),
        ("left action on M matches left action on A", Box::new(|x| (id_a.kron(m.left(x)), id_m.kron(&a.left_mult(x))))),
        ("right action on M matches right action on A", Box::new(|x| (id_a.kron(m.right(x)), id_m.kron(&a.right_mult(x))))),
    ];
    for (name, pair) in &checks {
        for x in 0..d {
            let (before, after) = pair(x);
            let lhs = cb.tau.compose(&before);
            let rhs = after.compose(&cb.tau);
            if let Some(c) = (0..lhs.cols()).find(|&c| lhs.column(c) != rhs.column(c)) {
                report.failures.push(StructureFailure {
                    identity: name.to_string(),
                    witness: vec![a.labels()[x].clone(), a.labels()[c / dm].clone(), cb.m_label(c % dm)],
                });
                break;
            }
        }
    }
    let triple = triple_composite(cb);
    let id = Matrix::identity(field, d * d * dm);
    if let Some(c) = (0..id.cols()).find(|&c| triple.column(c) != id.column(c)) {
        report.failures.push(StructureFailure {
            identity: "τ31 τ12 τ23 = id".into(),
            witness: vec![
                a.labels()[c / (d * dm)].clone(),
                a.labels()[(c / dm) % d].clone(),
                cb.m_label(c % dm),
            ],
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;

    #[test]
    fn trivial_and_tautological_pass() {
        let k = FinAlgebra::ground(Field::Rationals);
        assert!(check_cyclic_structure(&tautological_tau(&k)).passed());
        for name in FinAlgebra::BUILTINS {
            let a = FinAlgebra::builtin(name, Field::Prime(3)).unwrap();
            assert!(check_cyclic_structure(&tautological_tau(&a)).passed(), "{name}");
        }
    }

    #[test]
    fn scaled_tau_breaks_triple_identity() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let cb = tautological_tau(&a).scaled(&Field::Rationals.from_i64(2));
        let r = check_cyclic_structure(&cb);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].identity, "τ31 τ12 τ23 = id");
        assert_eq!(r.failures[0].witness, vec!["1", "1", "m0"]);
    }

    #[test]
    fn cube_roots_of_unity_pass() {
        // 2³ = 8 = 1 in F_7
        let a = FinAlgebra::dual_numbers(Field::Prime(7));
        let cb = tautological_tau(&a).scaled(&Field::Prime(7).from_i64(2));
        assert!(check_cyclic_structure(&cb).passed());
    }

    #[test]
    fn non_equivariant_tau_rejected() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let mut cb = tautological_tau(&a);
        cb.tau = Matrix::from_i64_rows(Field::Rationals, &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        let r = check_cyclic_structure(&cb);
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f.identity.contains("action")));
    }
}
