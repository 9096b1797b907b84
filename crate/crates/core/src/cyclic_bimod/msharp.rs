//! The cyclic vector space `M_#` of a cyclic bimodule and the map `τ_#`.

use rayon::prelude::*;

use super::simplicial::{rotation_power, simplicial_m, SimplicialVectorSpace};
use super::structure::{check_cyclic_structure, CyclicBimodule};
use crate::cyclic_space::{hc, CyclicMap, CyclicVectorSpace};
use crate::exactlin::{Matrix, Scalar};
use crate::Error;

/// `t_n` on `M ⊗ A^{⊗(n-1)}`: `τ` moves the last `A` factor past `M`,
/// `m ⊗ a_1 ⊗ … ⊗ a_{n-1} ↦ τ(a_{n-1} ⊗ m) ⊗ a_1 ⊗ … ⊗ a_{n-2}`.
pub fn m_sharp_rotation(cb: &CyclicBimodule, n: usize) -> Matrix {
    let d = cb.base.dim();
    let dm = cb.module.dim();
    let field = cb.base.field();
    if n == 1 {
        return Matrix::identity(field, dm);
    }
    let low = d.pow(n as u32 - 1);
    let rest_size = low / d;
    let cols = (0..dm * low)
        .into_par_iter()
        .map(|idx| {
            let (m, rest_full) = (idx / low, idx % low);
            let (rest, a_last) = (rest_full / d, rest_full % d);
            let mut col: Vec<(usize, Scalar)> = cb
                .tau
                .column(a_last * dm + m)
                .iter()
                .map(|(r, c)| (r * rest_size + rest, c.clone()))
                .collect();
            col.sort_by_key(|(r, _)| *r);
            col
        })
        .collect();
    Matrix::from_columns(field, dm * low, cols)
}

/// `M_#` up to `[n_max]` without the cyclic-structure check.
pub fn build_m_sharp_unchecked(cb: &CyclicBimodule, n_max: usize) -> CyclicVectorSpace {
    let x = simplicial_m(&cb.base, &cb.module, n_max);
    let dims = (1..=n_max).map(|n| x.dim(n - 1)).collect();
    let faces = (1..n_max).map(|n| (0..=n).map(|i| x.face(n, i).clone()).collect()).collect();
    let degens = (1..n_max).map(|n| (0..n).map(|i| x.degeneracy(n - 1, i).clone()).collect()).collect();
    let rots = (1..=n_max).map(|n| m_sharp_rotation(cb, n)).collect();
    CyclicVectorSpace::from_parts(cb.base.field(), dims, faces, degens, rots).expect("M_# shapes")
}

/// `M_#` up to `[n_max]`; rejects structures failing the cyclic identities.
pub fn build_m_sharp(cb: &CyclicBimodule, n_max: usize) -> Result<CyclicVectorSpace, Error> {
    let report = check_cyclic_structure(cb);
    if let Some(f) = report.failures.first() {
        return Err(Error::Audit(format!("{} fails at ({})", f.identity, f.witness.join(", "))));
    }
    Ok(build_m_sharp_unchecked(cb, n_max))
}

/// `τ_# : j_!M^Δ_# -> M_#`, summand `v` of `[n]` mapping by `M_#(t^v)`.
pub fn tau_sharp(cb: &CyclicBimodule, n_max: usize) -> Result<(CyclicVectorSpace, CyclicVectorSpace, CyclicMap), Error> {
    let ms = build_m_sharp(cb, n_max)?;
    let x: SimplicialVectorSpace = simplicial_m(&cb.base, &cb.module, n_max);
    let j = super::simplicial::j_shriek(&x, n_max)?;
    let components = (1..=n_max)
        .map(|n| {
            let blocks: Vec<Matrix> = (0..n).map(|v| ms.eval(&rotation_power(n, v))).collect();
            let refs: Vec<Option<&Matrix>> = blocks.iter().map(Some).collect();
            Matrix::from_blocks(ms.field(), &[ms.dim(n)], &vec![ms.dim(n); n], &[refs])
        })
        .collect();
    Ok((j, ms, CyclicMap { components }))
}

/// `HC_i(A, M_#)` for `i ≤ max_degree`.
pub fn hc_with_coefficients(cb: &CyclicBimodule, max_degree: usize) -> Result<Vec<usize>, Error> {
    let ms = build_m_sharp(cb, max_degree + 2)?;
    hc(&ms, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{hh, trace, Bimodule, FinAlgebra};
    use crate::cyclic_bimod::tautological_tau;
    use crate::cyclic_space::{build_a_sharp, hh_of_cyclic};
    use crate::exactlin::Field;

    #[test]
    fn tautological_m_sharp_is_a_sharp() {
        for name in FinAlgebra::BUILTINS {
            let a = FinAlgebra::builtin(name, Field::Rationals).unwrap();
            let n = if a.dim() > 3 { 3 } else { 4 };
            assert_eq!(build_m_sharp(&tautological_tau(&a), n).unwrap(), build_a_sharp(&a, n), "{name}");
        }
    }

    #[test]
    fn trivial_coefficients() {
        let k = FinAlgebra::ground(Field::Rationals);
        let cb = tautological_tau(&k);
        assert_eq!(hc_with_coefficients(&cb, 4).unwrap(), vec![1, 0, 1, 0, 1]);
        // A = k with M = k^2 and τ = id
        let m = Bimodule::new(&k, 2, vec![Matrix::identity(Field::Rationals, 2)], vec![Matrix::identity(Field::Rationals, 2)]).unwrap();
        let cb = CyclicBimodule::new(k.clone(), m, Matrix::identity(Field::Rationals, 2)).unwrap();
        let ms = build_m_sharp(&cb, 4).unwrap();
        ms.audit_relations(4).unwrap();
        assert_eq!(ms.dims(), &[2, 2, 2, 2]);
        assert_eq!(hc(&ms, 2).unwrap(), vec![2, 0, 2]);
    }

    #[test]
    fn hh_of_m_sharp_is_hochschild() {
        let a = FinAlgebra::dual_numbers(Field::Prime(3));
        let cb = tautological_tau(&a);
        let ms = build_m_sharp(&cb, 5).unwrap();
        assert_eq!(hh_of_cyclic(&ms, 3).unwrap(), hh(&a, &cb.module, 3));
        assert_eq!(hc_with_coefficients(&cb, 2).unwrap()[0], trace(&cb.module).dim());
    }

    #[test]
    fn rotation_has_order_n() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let ms = build_m_sharp(&tautological_tau(&a), 4).unwrap();
        for n in 1..=4 {
            assert_eq!(ms.rotation(n).pow(n), Matrix::identity(Field::Rationals, ms.dim(n)));
        }
    }

    #[test]
    fn tau_sharp_is_natural() {
        for f in [Field::Rationals, Field::Prime(2)] {
            let a = FinAlgebra::dual_numbers(f);
            let (j, ms, t) = tau_sharp(&tautological_tau(&a), 3).unwrap();
            t.audit(&j, &ms).unwrap();
            // identity on the distinguished summand
            for n in 1..=3 {
                let d = ms.dim(n);
                let first: Vec<usize> = (0..d).collect();
                assert_eq!(t.component(n).select_columns(&first), Matrix::identity(f, d));
            }
        }
        // A = k, τ = id: the fold map
        let k = FinAlgebra::ground(Field::Rationals);
        let (_, _, t) = tau_sharp(&tautological_tau(&k), 3).unwrap();
        assert_eq!(t.component(3), &Matrix::from_i64_rows(Field::Rationals, &[&[1, 1, 1]]));
    }

    #[test]
    fn cube_root_scaling() {
        // λ = 2 in F_7 has λ³ = 1: the identities hold and the rotations change
        let f = Field::Prime(7);
        let a = FinAlgebra::dual_numbers(f);
        let taut = tautological_tau(&a);
        let scaled = taut.scaled(&f.from_i64(2));
        let base = build_m_sharp(&taut, 4).unwrap();
        let ms = build_m_sharp(&scaled, 4).unwrap();
        for n in 2..=4 {
            assert_ne!(ms.rotation(n), base.rotation(n));
        }
        assert_eq!(ms.rotation(3).pow(3), Matrix::identity(f, ms.dim(3)));
        // t_n^n = λ^n, so the relation t_n^n = id only survives for 3 | n
        assert_eq!(ms.rotation(2).pow(2), Matrix::identity(f, ms.dim(2)).scale(&f.from_i64(4)));
        assert!(ms.audit_relations(3).is_err());
    }
}
