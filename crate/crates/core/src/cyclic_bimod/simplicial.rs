//! Simplicial vector spaces, `M^Δ_#`, and the Kan extension `j_!`.
//!
//! Degree `n` corresponds to the marked object `⟨[n+1], 0⟩`; a morphism of
//! Λ fixing the point `0` acts through its face/degeneracy word.

use rayon::prelude::*;

use crate::algebra::{alternating_sum, hochschild_degeneracies, hochschild_faces, Bimodule, FinAlgebra};
use crate::cyclic_space::{CyclicMap, CyclicVectorSpace};
use crate::exactlin::{ChainComplex, Field, Matrix};
use crate::lambda_cat::{hom_set, CycMor, Generator};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialVectorSpace {
    field: Field,
    /// `dims[n] = dim X_n`.
    dims: Vec<usize>,
    /// `faces[n-1][i] = d_i : X_n -> X_{n-1}`.
    faces: Vec<Vec<Matrix>>,
    /// `degens[n][i] = s_i : X_n -> X_{n+1}`.
    degens: Vec<Vec<Matrix>>,
}

impl SimplicialVectorSpace {
    pub fn new(field: Field, dims: Vec<usize>, faces: Vec<Vec<Matrix>>, degens: Vec<Vec<Matrix>>) -> Result<Self, Error> {
        let top = dims.len() - 1;
        if faces.len() != top || degens.len() != top {
            return Err(Error::DimensionMismatch("one list of faces and degeneracies per degree".into()));
        }
        let x = SimplicialVectorSpace {
            field,
            dims,
            faces,
            degens,
        };
        x.audit()?;
        Ok(x)
    }

    /// The constant simplicial space `k`.
    pub fn constant(field: Field, top: usize) -> Self {
        let id = Matrix::identity(field, 1);
        SimplicialVectorSpace {
            field,
            dims: vec![1; top + 1],
            faces: (1..=top).map(|n| vec![id.clone(); n + 1]).collect(),
            degens: (0..top).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn face(&self, n: usize, i: usize) -> &Matrix {
        &self.faces[n - 1][i]
    }

    pub fn degeneracy(&self, n: usize, i: usize) -> &Matrix {
        &self.degens[n][i]
    }

    /// `F(g)` for a morphism of Λ with `g(0) = 0`.
    pub fn eval_based(&self, g: &CycMor) -> Matrix {
        assert_eq!(g.lift()[0], 0, "{g:?} does not fix the marked point");
        let mut acc = Matrix::identity(self.field, self.dim(g.source() - 1));
        for gen in g.decompose() {
            let m = match gen {
                Generator::Face { n, i } => self.face(n, i),
                Generator::Degeneracy { n, i } => self.degeneracy(n - 1, i),
                Generator::Rotation { .. } => unreachable!("based morphisms have no rotations"),
            };
            acc = m.compose(&acc);
        }
        acc
    }

    /// Functoriality on all composable pairs of based morphisms between
    /// objects up to `[top+1]`, which covers the simplicial identities.
    pub fn audit(&self) -> Result<(), Error> {
        let objs = self.top() + 1;
        let based = |s: usize, t: usize| -> Vec<CycMor> { hom_set(s, t).into_iter().filter(|f| f.lift()[0] == 0).collect() };
        for a in 1..=objs {
            for b in 1..=objs {
                for f in based(a, b) {
                    let ff = self.eval_based(&f);
                    for c in 1..=objs {
                        for g in based(b, c) {
                            if self.eval_based(&g.after(&f)) != self.eval_based(&g).compose(&ff) {
                                return Err(Error::Audit(format!("simplicial identity fails on {g:?} ∘ {f:?}")));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The standard complex with `d = Σ (-1)^i d_i`.
    pub fn chain_complex(&self) -> ChainComplex {
        let diffs = (1..=self.top()).map(|n| alternating_sum(self.field, &self.faces[n - 1])).collect();
        ChainComplex::new_unchecked(self.field, self.dims[0], diffs)
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        self.chain_complex().homology_dims()
    }
}

/// `M^Δ_#` with `X_n = M ⊗ A^{⊗n}` for `n < n_max`, i.e. objects up to `[n_max]`.
pub fn simplicial_m(a: &FinAlgebra, m: &Bimodule, n_max: usize) -> SimplicialVectorSpace {
    assert!(n_max >= 1);
    let top = n_max - 1;
    let d = a.dim();
    let dims = (0..=top).map(|n| m.dim() * d.pow(n as u32)).collect();
    let faces = (1..=top).into_par_iter().map(|n| hochschild_faces(a, m, n)).collect();
    let degens = (0..top).into_par_iter().map(|n| hochschild_degeneracies(a, m, n)).collect();
    SimplicialVectorSpace {
        field: a.field(),
        dims,
        faces,
        degens,
    }
}

/// `t^k : [n] -> [n]`.
pub(crate) fn rotation_power(n: usize, k: usize) -> CycMor {
    let k = (k % n) as i64;
    CycMor::new(n, n, (k..k + n as i64).collect()).expect("rotation lift")
}

/// The based morphism `t^{-f(v)} ∘ f ∘ t^{v}` carrying summand `v` of the
/// source to summand `f(v)` of the target.
pub(crate) fn based_part(f: &CycMor, v: usize) -> (usize, CycMor) {
    let w = f.apply(v);
    let n = f.target();
    let g = rotation_power(n, n - w).after(f).after(&rotation_power(f.source(), v));
    (w, g)
}

/// `(j_!F)([n]) = ⊕_{v ∈ [n]} F_{n-1}`, summand `v` at offset `v · dim F_{n-1}`.
pub fn j_shriek_map(x: &SimplicialVectorSpace, f: &CycMor) -> Matrix {
    let (s, t) = (f.source(), f.target());
    let (ds, dt) = (x.dim(s - 1), x.dim(t - 1));
    let blocks: Vec<(usize, Matrix)> = (0..s)
        .map(|v| {
            let (w, g) = based_part(f, v);
            (w, x.eval_based(&g))
        })
        .collect();
    let mut grid: Vec<Vec<Option<&Matrix>>> = vec![vec![None; s]; t];
    for (v, (w, m)) in blocks.iter().enumerate() {
        grid[*w][v] = Some(m);
    }
    Matrix::from_blocks(x.field, &vec![dt; t], &vec![ds; s], &grid)
}

pub fn j_shriek(x: &SimplicialVectorSpace, n_max: usize) -> Result<CyclicVectorSpace, Error> {
    if n_max > x.top() + 1 {
        return Err(Error::Truncation(format!(
            "j_! up to [{n_max}] needs simplicial degrees up to {}",
            n_max - 1
        )));
    }
    let dims = (1..=n_max).map(|n| n * x.dim(n - 1)).collect();
    CyclicVectorSpace::from_generators(x.field, dims, |f| j_shriek_map(x, f))
}

/// The counit `j_!j^*E -> E`: summand `v` of `[n]` maps by `E(t^v)`.
pub fn counit(e: &CyclicVectorSpace, n_max: usize) -> CyclicMap {
    let components = (1..=n_max)
        .map(|n| {
            let blocks: Vec<Matrix> = (0..n).map(|v| e.eval(&rotation_power(n, v))).collect();
            let refs: Vec<Option<&Matrix>> = blocks.iter().map(Some).collect();
            Matrix::from_blocks(e.field(), &[e.dim(n)], &vec![e.dim(n); n], &[refs])
        })
        .collect();
    CyclicMap { components }
}

/// `j^*E`: the restriction to based morphisms.
pub fn restrict(e: &CyclicVectorSpace) -> SimplicialVectorSpace {
    let top = e.n_max() - 1;
    SimplicialVectorSpace {
        field: e.field(),
        dims: (0..=top).map(|n| e.dim(n + 1)).collect(),
        faces: (1..=top).map(|n| (0..=n).map(|i| e.face(n, i).clone()).collect()).collect(),
        degens: (0..top).map(|n| (0..=n).map(|i| e.degeneracy(n + 1, i).clone()).collect()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hh;
    use crate::cyclic_space::{build_a_sharp, hc, hh_of_cyclic, periodicity_map};

    #[test]
    fn simplicial_m_matches_hochschild() {
        let q = Field::Rationals;
        let a = FinAlgebra::dual_numbers(q);
        for m in [Bimodule::diagonal(&a), Bimodule::free(&a)] {
            let x = simplicial_m(&a, &m, 4);
            x.audit().unwrap();
            assert_eq!(x.dims(), &[m.dim(), m.dim() * 2, m.dim() * 4, m.dim() * 8]);
            assert_eq!(x.homology_dims(), hh(&a, &m, 2));
        }
    }

    #[test]
    fn j_shriek_of_constant() {
        let q = Field::Rationals;
        let e = j_shriek(&SimplicialVectorSpace::constant(q, 5), 6).unwrap();
        e.audit_relations(5).unwrap();
        e.audit_functoriality(3, 200, 7).unwrap();
        assert_eq!(e.dims(), &[1, 2, 3, 4, 5, 6]);
        // rotation is the cyclic permutation of summands
        let t = e.rotation(3);
        for v in 0..3 {
            assert_eq!(t.column(v), &[((v + 1) % 3, q.one())]);
        }
        // HC(j_!F) = HH(F) = k in degree 0, and u vanishes
        assert_eq!(hc(&e, 4).unwrap(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn hc_of_j_shriek_is_hh() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let e = build_a_sharp(&a, 6);
        let je = j_shriek(&restrict(&e), 6).unwrap();
        je.audit_relations(6).unwrap();
        assert_eq!(hc(&je, 4).unwrap(), hh_of_cyclic(&e, 4).unwrap());
        for i in 2..=4 {
            assert!(periodicity_map(&je, i).unwrap().is_zero());
        }
        let c = counit(&e, 6);
        c.audit(&je, &e).unwrap();
    }
}
