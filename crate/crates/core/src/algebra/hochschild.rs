//! Hochschild chain and cochain complexes.
//!
//! Chains `C_n = M ⊗ A^{⊗n}` use the basis index `m·d^n + Σ a_k d^{n-k}`.
//! Cochains `C^n = Hom(A^{⊗n}, M)` use `(Σ a_k d^{n-k})·dim M + m`.

use rayon::prelude::*;

use super::algebra::FinAlgebra;
use super::bimodule::Bimodule;
use crate::exactlin::{ChainComplex, Field, HomologyBasis, Matrix, SparseVec, Subspace};
use crate::Error;

pub(crate) fn decode(mut idx: usize, d: usize, n: usize) -> (usize, Vec<usize>) {
    let mut a = vec![0; n];
    for k in (0..n).rev() {
        a[k] = idx % d;
        idx /= d;
    }
    (idx, a)
}

pub(crate) fn encode(m: usize, a: &[usize], d: usize) -> usize {
    a.iter().fold(m, |acc, &x| acc * d + x)
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Faces `d_0, …, d_n : C_n -> C_{n-1}` for `n ≥ 1`.
pub fn hochschild_faces(a: &FinAlgebra, m: &Bimodule, n: usize) -> Vec<Matrix> {
    assert!(n >= 1);
    let d = a.dim();
    let f = a.field();
    let src = m.dim() * d.pow(n as u32);
    let tgt = m.dim() * d.pow(n as u32 - 1);
    (0..=n)
        .map(|i| {
            let cols = (0..src)
                .map(|idx| {
                    let (x, t) = decode(idx, d, n);
                    let mut col: SparseVec = if i == 0 {
                        m.right(t[0])
                            .column(x)
                            .iter()
                            .map(|(y, c)| (encode(*y, &t[1..], d), c.clone()))
                            .collect()
                    } else if i == n {
                        m.left(t[n - 1])
                            .column(x)
                            .iter()
                            .map(|(y, c)| (encode(*y, &t[..n - 1], d), c.clone()))
                            .collect()
                    } else {
                        let mut s = t.clone();
                        s.remove(i);
                        a.basis_product(t[i - 1], t[i])
                            .iter()
                            .map(|(p, c)| {
                                s[i - 1] = *p;
                                (encode(x, &s, d), c.clone())
                            })
                            .collect()
                    };
                    col.sort_by_key(|(r, _)| *r);
                    col
                })
                .collect();
            Matrix::from_columns(f, tgt, cols)
        })
        .collect()
}

/// Degeneracies `s_0, …, s_n : C_n -> C_{n+1}`, `s_i` inserting the unit after slot `i`.
pub fn hochschild_degeneracies(a: &FinAlgebra, m: &Bimodule, n: usize) -> Vec<Matrix> {
    let d = a.dim();
    let f = a.field();
    let src = m.dim() * d.pow(n as u32);
    let tgt = src * d;
    (0..=n)
        .map(|i| {
            let cols = (0..src)
                .map(|idx| {
                    let (x, t) = decode(idx, d, n);
                    let mut s = t.clone();
                    s.insert(i, 0);
                    a.unit()
                        .iter()
                        .map(|(u, c)| {
                            s[i] = *u;
                            (encode(x, &s, d), c.clone())
                        })
                        .collect()
                })
                .collect();
            Matrix::from_columns(f, tgt, cols)
        })
        .collect()
}

/// `b = Σ (-1)^i d_i`.
pub fn alternating_sum(field: Field, faces: &[Matrix]) -> Matrix {
    let mut acc = Matrix::zeros(field, faces[0].rows(), faces[0].cols());
    for (i, f) in faces.iter().enumerate() {
        acc = acc.axpy(&field.from_i64(sign(i)), f).expect("faces share a shape");
    }
    acc
}

/// The standard complex in degrees `0..=n_max`.
pub fn hochschild_chain_complex(a: &FinAlgebra, m: &Bimodule, n_max: usize) -> ChainComplex {
    let f = a.field();
    let diffs: Vec<Matrix> = (1..=n_max)
        .into_par_iter()
        .map(|n| alternating_sum(f, &hochschild_faces(a, m, n)))
        .collect();
    ChainComplex::new_unchecked(f, m.dim(), diffs)
}

/// The quotient of the standard complex by degenerate chains.
pub fn normalized_hochschild_complex(a: &FinAlgebra, m: &Bimodule, n_max: usize) -> Result<ChainComplex, Error> {
    let f = a.field();
    let full = hochschild_chain_complex(a, m, n_max);
    let subs: Vec<Subspace> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return Subspace::zero(f, m.dim());
            }
            let degens = hochschild_degeneracies(a, m, n - 1);
            // s_n inserts after the last slot, s_0 after M; all are degenerate
            let vectors = degens.iter().flat_map(|s| s.columns().to_vec());
            Subspace::span(f, full.dim(n), vectors)
        })
        .collect();
    Ok(full.quotient(subs)?.0)
}

/// `HH_i(A, M)` for `i ≤ max_degree`.
pub fn hh(a: &FinAlgebra, m: &Bimodule, max_degree: usize) -> Vec<usize> {
    hochschild_chain_complex(a, m, max_degree + 1).homology_dims()
}

/// A cochain complex `C^0 -> C^1 -> …` with `codiffs[n] : C^n -> C^{n+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    field: Field,
    dims: Vec<usize>,
    codiffs: Vec<Matrix>,
}

impl CochainComplex {
    pub fn new(field: Field, codiffs: Vec<Matrix>) -> Result<Self, Error> {
        let mut dims: Vec<usize> = codiffs.iter().map(|c| c.cols()).collect();
        if let Some(last) = codiffs.last() {
            dims.push(last.rows());
        }
        for n in 1..codiffs.len() {
            if codiffs[n].cols() != codiffs[n - 1].rows() {
                return Err(Error::DimensionMismatch(format!("δ^{n} does not compose with δ^{}", n - 1)));
            }
            if !codiffs[n].compose(&codiffs[n - 1]).is_zero() {
                return Err(Error::NotAComplex(format!("δ^{n} ∘ δ^{} ≠ 0", n - 1)));
            }
        }
        Ok(CochainComplex { field, dims, codiffs })
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn codiff(&self, n: usize) -> &Matrix {
        &self.codiffs[n]
    }

    fn incoming(&self, n: usize) -> Matrix {
        if n == 0 {
            Matrix::zeros(self.field, self.dims[0], 0)
        } else {
            self.codiffs[n - 1].clone()
        }
    }

    /// Cohomology dimensions in degrees `0..len(codiffs)`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.codiffs.iter().map(crate::exactlin::rank).collect();
        (0..self.codiffs.len())
            .map(|n| self.dims[n] - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] })
            .collect()
    }

    pub fn cohomology_basis(&self, n: usize) -> HomologyBasis {
        HomologyBasis::new(&self.codiffs[n], &self.incoming(n))
    }
}

/// The Hochschild cochain complex in degrees `0..=n_max`.
pub fn hochschild_cochain_complex(a: &FinAlgebra, m: &Bimodule, n_max: usize) -> Result<CochainComplex, Error> {
    let f = a.field();
    let codiffs = (0..n_max).map(|n| cochain_codiff(a, m, n)).collect::<Result<Vec<_>, _>>()?;
    CochainComplex::new(f, codiffs)
}

fn cochain_codiff(a: &FinAlgebra, m: &Bimodule, n: usize) -> Result<Matrix, Error> {
    let d = a.dim();
    let md = m.dim();
    let f = a.field();
    let src = d.pow(n as u32) * md;
    let tgt = d.pow(n as u32 + 1) * md;
    let mut trips = Vec::new();
    for multi in 0..d.pow(n as u32 + 1) {
        let (_, t) = decode(multi, d, n + 1);
        // a_1 · f(a_2, …)
        let col_base = encode(0, &t[1..], d) * md;
        for k in 0..md {
            for (k2, c) in m.left(t[0]).column(k) {
                trips.push((multi * md + k2, col_base + k, c.clone()));
            }
        }
        // f(…, a_i a_{i+1}, …)
        for i in 1..=n {
            let mut s = t.clone();
            s.remove(i);
            for (p, c) in a.basis_product(t[i - 1], t[i]) {
                s[i - 1] = *p;
                let cb = encode(0, &s, d) * md;
                let c = &f.from_i64(sign(i)) * c;
                for k in 0..md {
                    trips.push((multi * md + k, cb + k, c.clone()));
                }
            }
        }
        // f(a_1, …, a_n) · a_{n+1}
        let cb = encode(0, &t[..n], d) * md;
        let sg = f.from_i64(sign(n + 1));
        for k in 0..md {
            for (k2, c) in m.right(t[n]).column(k) {
                trips.push((multi * md + k2, cb + k, &sg * c));
            }
        }
    }
    Matrix::from_triplets(f, tgt, src, trips)
}

/// Cohomology dimensions and a basis of 2-cocycles modulo coboundaries.
#[derive(Clone, Debug)]
pub struct HHCohomology {
    pub dims: Vec<usize>,
    /// Representatives `c : A ⊗ A -> M` as vectors in `C^2`.
    pub degree_two: Vec<SparseVec>,
}

pub fn hh_cohomology(a: &FinAlgebra, m: &Bimodule, max_degree: usize) -> Result<HHCohomology, Error> {
    let top = max_degree.max(2) + 1;
    let c = hochschild_cochain_complex(a, m, top)?;
    let mut dims = c.cohomology_dims();
    dims.truncate(max_degree + 1);
    let degree_two = c.cohomology_basis(2).reps().to_vec();
    Ok(HHCohomology { dims, degree_two })
}

/// Checks `a·c(b,e) − c(ab,e) + c(a,be) − c(a,b)·e = 0` on all basis
/// triples; returns the first failing triple.
pub fn cocycle_violation(a: &FinAlgebra, m: &Bimodule, c: &[(usize, crate::Scalar)]) -> Option<(usize, usize, usize)> {
    let d = a.dim();
    let delta = cochain_codiff(a, m, 2).ok()?;
    let img = delta.apply(c);
    img.first().map(|(row, _)| {
        let (_, t) = decode(row / m.dim(), d, 3);
        (t[0], t[1], t[2])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(f: Field) -> Vec<FinAlgebra> {
        FinAlgebra::BUILTINS.iter().map(|n| FinAlgebra::builtin(n, f).unwrap()).collect()
    }

    #[test]
    fn faces_square_to_zero() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let m = Bimodule::diagonal(&a);
        hochschild_chain_complex(&a, &m, 5).check().unwrap();
        hochschild_cochain_complex(&a, &m, 4).unwrap();
    }

    #[test]
    fn simplicial_identities() {
        let a = FinAlgebra::matrix_algebra(Field::Prime(3), 2);
        let m = Bimodule::diagonal(&a);
        for n in 2..=3 {
            let dn = hochschild_faces(&a, &m, n);
            let dn1 = hochschild_faces(&a, &m, n - 1);
            for j in 0..=n {
                for i in 0..j {
                    // d_i d_j = d_{j-1} d_i
                    assert_eq!(dn1[i].compose(&dn[j]), dn1[j - 1].compose(&dn[i]));
                }
            }
            let sn = hochschild_degeneracies(&a, &m, n - 1);
            let id = Matrix::identity(a.field(), m.dim() * a.dim().pow(n as u32 - 1));
            for i in 0..n {
                assert_eq!(dn[i].compose(&sn[i]), id);
                assert_eq!(dn[i + 1].compose(&sn[i]), id);
            }
        }
    }

    #[test]
    fn free_bimodule_is_acyclic() {
        for f in [Field::Rationals, Field::Prime(3)] {
            for a in corpus(f) {
                let dims = hh(&a, &Bimodule::free(&a), 3);
                assert_eq!(dims, vec![a.dim(), 0, 0, 0]);
            }
        }
    }

    #[test]
    fn normalized_complex_has_same_homology() {
        for a in corpus(Field::Rationals) {
            let m = Bimodule::diagonal(&a);
            let full = hochschild_chain_complex(&a, &m, 4).homology_dims();
            let norm = normalized_hochschild_complex(&a, &m, 4).unwrap().homology_dims();
            assert_eq!(full, norm);
        }
    }

    #[test]
    fn centers_and_degree_two() {
        let q = Field::Rationals;
        let m2 = FinAlgebra::matrix_algebra(q, 2);
        let h = hh_cohomology(&m2, &Bimodule::diagonal(&m2), 2).unwrap();
        assert_eq!(h.dims, vec![1, 0, 0]);
        let k = FinAlgebra::ground(q);
        assert_eq!(hh_cohomology(&k, &Bimodule::diagonal(&k), 2).unwrap().dims, vec![1, 0, 0]);
        let a = FinAlgebra::dual_numbers(q);
        let m = Bimodule::diagonal(&a);
        let h = hh_cohomology(&a, &m, 2).unwrap();
        for c in &h.degree_two {
            assert_eq!(cocycle_violation(&a, &m, c), None);
        }
    }
}
