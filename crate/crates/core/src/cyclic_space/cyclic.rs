//! Cyclic vector spaces: functors `Λ≤N -> Vect` stored by generator matrices.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::FinAlgebra;
use crate::exactlin::{Field, Matrix, SparseVec};
use crate::lambda_cat::{hom_set, CycMor, Generator, LambdaTruncation, Representation};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicVectorSpace {
    field: Field,
    /// `dims[n-1] = dim E([n])`.
    dims: Vec<usize>,
    /// `faces[n-1][i] = E(δ_i) : E([n+1]) -> E([n])`.
    faces: Vec<Vec<Matrix>>,
    /// `degens[n-1][i] = E(s_i) : E([n]) -> E([n+1])`.
    degens: Vec<Vec<Matrix>>,
    /// `rots[n-1] = E(t_n)`.
    rots: Vec<Matrix>,
}

impl CyclicVectorSpace {
    /// Evaluates `eval` on the generators of `Λ≤n_max`; no audit is run.
    pub fn from_generators(
        field: Field,
        dims: Vec<usize>,
        eval: impl Fn(&CycMor) -> Matrix + Sync,
    ) -> Result<Self, Error> {
        let n_max = dims.len();
        if n_max == 0 {
            return Err(Error::Invalid("a cyclic vector space needs at least [1]".into()));
        }
        let check = |m: &Matrix, f: &CycMor| -> Result<(), Error> {
            if m.cols() != dims[f.source() - 1] || m.rows() != dims[f.target() - 1] {
                return Err(Error::DimensionMismatch(format!("E({f:?}) has shape {}x{}", m.rows(), m.cols())));
            }
            Ok(())
        };
        let run = |f: CycMor| -> Result<Matrix, Error> {
            let m = eval(&f);
            check(&m, &f)?;
            Ok(m)
        };
        let faces = (1..n_max)
            .into_par_iter()
            .map(|n| (0..=n).map(|i| run(CycMor::face(n, i))).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let degens = (1..n_max)
            .into_par_iter()
            .map(|n| (0..n).map(|i| run(CycMor::degeneracy(n, i))).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let rots = (1..=n_max)
            .into_par_iter()
            .map(|n| run(CycMor::rotation(n)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CyclicVectorSpace {
            field,
            dims,
            faces,
            degens,
            rots,
        })
    }

    /// Assembles from generator matrices, checking shapes only.
    pub fn from_parts(
        field: Field,
        dims: Vec<usize>,
        faces: Vec<Vec<Matrix>>,
        degens: Vec<Vec<Matrix>>,
        rots: Vec<Matrix>,
    ) -> Result<Self, Error> {
        let n_max = dims.len();
        let bad = |what: &str| Err(Error::DimensionMismatch(format!("{what} have the wrong shape")));
        if n_max == 0 || faces.len() != n_max - 1 || degens.len() != n_max - 1 || rots.len() != n_max {
            return bad("generator lists");
        }
        for n in 1..=n_max {
            if rots[n - 1].rows() != dims[n - 1] || rots[n - 1].cols() != dims[n - 1] {
                return bad("rotations");
            }
            if n < n_max {
                let (lo, hi) = (dims[n - 1], dims[n]);
                if faces[n - 1].len() != n + 1 || faces[n - 1].iter().any(|m| m.rows() != lo || m.cols() != hi) {
                    return bad("faces");
                }
                if degens[n - 1].len() != n || degens[n - 1].iter().any(|m| m.rows() != hi || m.cols() != lo) {
                    return bad("degeneracies");
                }
            }
        }
        Ok(CyclicVectorSpace {
            field,
            dims,
            faces,
            degens,
            rots,
        })
    }

    /// The constant functor `k`.
    pub fn constant(field: Field, n_max: usize) -> Self {
        Self::from_generators(field, vec![1; n_max], |_| Matrix::identity(field, 1)).expect("constant functor")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n_max(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n - 1]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `E(δ_i) : E([n+1]) -> E([n])`.
    pub fn face(&self, n: usize, i: usize) -> &Matrix {
        &self.faces[n - 1][i]
    }

    /// `E(s_i) : E([n]) -> E([n+1])`.
    pub fn degeneracy(&self, n: usize, i: usize) -> &Matrix {
        &self.degens[n - 1][i]
    }

    pub fn rotation(&self, n: usize) -> &Matrix {
        &self.rots[n - 1]
    }

    pub fn generator(&self, g: Generator) -> &Matrix {
        match g {
            Generator::Face { n, i } => self.face(n, i),
            Generator::Degeneracy { n, i } => self.degeneracy(n, i),
            Generator::Rotation { n } => self.rotation(n),
        }
    }

    /// `E(f)` for any morphism of `Λ≤n_max`, through its generator word.
    pub fn eval(&self, f: &CycMor) -> Matrix {
        assert!(f.source() <= self.n_max() && f.target() <= self.n_max());
        let word = f.decompose();
        let mut acc = Matrix::identity(self.field, self.dim(f.source()));
        for g in word {
            acc = self.generator(g).compose(&acc);
        }
        acc
    }

    /// The first `n` objects.
    pub fn truncate(&self, n: usize) -> Self {
        assert!(n >= 1 && n <= self.n_max());
        CyclicVectorSpace {
            field: self.field,
            dims: self.dims[..n].to_vec(),
            faces: self.faces[..n - 1].to_vec(),
            degens: self.degens[..n - 1].to_vec(),
            rots: self.rots[..n].to_vec(),
        }
    }

    /// Checks `E(g)E(h) = E(g∘h)` for all pairs of generators, and
    /// `E(t_n)^n = id`, on objects up to `[max_obj]`.
    pub fn audit_relations(&self, max_obj: usize) -> Result<(), Error> {
        let top = max_obj.min(self.n_max());
        let mut gens = Vec::new();
        for n in 1..=top {
            gens.push(Generator::Rotation { n });
            if n < top {
                gens.extend((0..=n).map(|i| Generator::Face { n, i }));
                gens.extend((0..n).map(|i| Generator::Degeneracy { n, i }));
            }
        }
        let pairs: Vec<(Generator, Generator)> = gens
            .iter()
            .flat_map(|&g| gens.iter().map(move |&h| (g, h)))
            .filter(|(g, h)| h.to_mor().target() == g.to_mor().source())
            .collect();
        pairs.par_iter().try_for_each(|&(g, h)| {
            let gh = g.to_mor().after(&h.to_mor());
            if self.generator(g).compose(self.generator(h)) != self.eval(&gh) {
                return Err(Error::Audit(format!("E({g:?})·E({h:?}) ≠ E({gh:?})")));
            }
            Ok(())
        })?;
        for n in 1..=top {
            if self.rotation(n).pow(n) != Matrix::identity(self.field, self.dim(n)) {
                return Err(Error::Audit(format!("E(t_{n})^{n} ≠ id")));
            }
        }
        Ok(())
    }

    /// Checks `E(g∘f) = E(g)E(f)` on composable pairs: exhaustively up to
    /// `[exhaustive]`, then on `samples` random pairs up to `[n_max]`.
    pub fn audit_functoriality(&self, exhaustive: usize, samples: usize, seed: u64) -> Result<(), Error> {
        let top = exhaustive.min(self.n_max());
        let check = |g: &CycMor, f: &CycMor| -> Result<(), Error> {
            if self.eval(&g.after(f)) != self.eval(g).compose(&self.eval(f)) {
                return Err(Error::Audit(format!("E is not functorial on {g:?} ∘ {f:?}")));
            }
            Ok(())
        };
        for a in 1..=top {
            for b in 1..=top {
                for c in 1..=top {
                    for f in hom_set(a, b) {
                        for g in hom_set(b, c) {
                            check(&g, &f)?;
                        }
                    }
                }
            }
        }
        let n = self.n_max();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let objs: Vec<usize> = (1..=n).collect();
        for _ in 0..samples {
            let a = *objs.choose(&mut rng).unwrap();
            let b = *objs.choose(&mut rng).unwrap();
            let c = *objs.choose(&mut rng).unwrap();
            let f = hom_set(a, b).choose(&mut rng).unwrap().clone();
            let g = hom_set(b, c).choose(&mut rng).unwrap().clone();
            check(&g, &f)?;
        }
        Ok(())
    }

    /// The restriction to `Λ≤N` as a representation of that finite category.
    pub fn to_representation(&self, lam: &LambdaTruncation) -> Result<Representation, Error> {
        let maps = lam.morphisms.iter().map(|f| self.eval(f)).collect();
        let n = lam.category.num_objects();
        Representation::new(&lam.category, self.field, self.dims[..n].to_vec(), maps)
    }
}

/// A natural transformation between cyclic vector spaces, by components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicMap {
    /// `components[n-1] : E([n]) -> F([n])`.
    pub components: Vec<Matrix>,
}

impl CyclicMap {
    pub fn component(&self, n: usize) -> &Matrix {
        &self.components[n - 1]
    }

    /// Checks `F(g) φ = φ E(g)` for all generators.
    pub fn audit(&self, src: &CyclicVectorSpace, tgt: &CyclicVectorSpace) -> Result<(), Error> {
        let n_max = src.n_max().min(tgt.n_max()).min(self.components.len());
        for n in 1..=n_max {
            let c = self.component(n);
            if c.cols() != src.dim(n) || c.rows() != tgt.dim(n) {
                return Err(Error::DimensionMismatch(format!("component at [{n}] has the wrong shape")));
            }
        }
        let mut gens = Vec::new();
        for n in 1..=n_max {
            gens.push(Generator::Rotation { n });
            if n < n_max {
                gens.extend((0..=n).map(|i| Generator::Face { n, i }));
                gens.extend((0..n).map(|i| Generator::Degeneracy { n, i }));
            }
        }
        for g in gens {
            let f = g.to_mor();
            let lhs = tgt.generator(g).compose(self.component(f.source()));
            let rhs = self.component(f.target()).compose(src.generator(g));
            if lhs != rhs {
                return Err(Error::Audit(format!("naturality fails at {g:?}")));
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &CyclicMap) -> CyclicMap {
        CyclicMap {
            components: self.components.iter().zip(&first.components).map(|(a, b)| a.compose(b)).collect(),
        }
    }
}

/// Expands `v_0 ⊗ v_1 ⊗ …` in the product basis, first factor most significant.
pub fn tensor_vectors(factors: &[SparseVec], dims: &[usize]) -> SparseVec {
    let mut acc: SparseVec = vec![(0, factors.first().map_or_else(|| unreachable!(), |v| v[0].1.field().one()))];
    for (v, &d) in factors.iter().zip(dims) {
        let mut next = Vec::with_capacity(acc.len() * v.len());
        for (i, x) in &acc {
            for (j, y) in v {
                next.push((i * d + j, x * y));
            }
        }
        acc = next;
    }
    acc
}

/// `A_#(f) : A^{⊗n'} -> A^{⊗n}`, multiplying each fiber in its linear order.
pub fn a_sharp_map(a: &FinAlgebra, f: &CycMor) -> Matrix {
    let d = a.dim();
    let field = a.field();
    let fibers = f.fibers();
    let np = f.source();
    let src = d.pow(np as u32);
    let tgt = d.pow(f.target() as u32);
    let dims = vec![d; f.target()];
    let cols = (0..src)
        .map(|idx| {
            let slots = digits(idx, d, np);
            let factors: Vec<SparseVec> = fibers
                .iter()
                .map(|fib| {
                    let mut p = a.unit().clone();
                    for &x in fib {
                        p = a.mul(&p, &[(slots[x], field.one())]);
                    }
                    p
                })
                .collect();
            if factors.iter().any(|v| v.is_empty()) {
                return Vec::new();
            }
            let mut col = tensor_vectors(&factors, &dims);
            col.sort_by_key(|(r, _)| *r);
            col
        })
        .collect();
    Matrix::from_columns(field, tgt, cols)
}

/// Base-`d` digits of `idx`, most significant first.
pub(crate) fn digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = idx % d;
        idx /= d;
    }
    out
}

/// The cyclic object `A_#` on `Λ≤n_max`.
pub fn build_a_sharp(a: &FinAlgebra, n_max: usize) -> CyclicVectorSpace {
    let d = a.dim();
    let dims = (1..=n_max).map(|n| d.pow(n as u32)).collect();
    CyclicVectorSpace::from_generators(a.field(), dims, |f| a_sharp_map(a, f)).expect("A_# has consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_functor_is_constant() {
        let e = CyclicVectorSpace::constant(Field::Rationals, 4);
        e.audit_relations(4).unwrap();
        for f in hom_set(3, 2) {
            assert_eq!(e.eval(&f), Matrix::identity(Field::Rationals, 1));
        }
    }

    #[test]
    fn a_sharp_is_a_functor() {
        for name in ["k", "k[x]/x^2", "M2"] {
            let a = FinAlgebra::builtin(name, Field::Rationals).unwrap();
            let e = build_a_sharp(&a, 3);
            e.audit_relations(3).unwrap();
            e.audit_functoriality(3, 0, 0).unwrap();
            // the generator word and the fiber formula agree
            for s in 1..=3 {
                for t in 1..=3 {
                    for f in hom_set(s, t) {
                        assert_eq!(e.eval(&f), a_sharp_map(&a, &f));
                    }
                }
            }
        }
    }

    #[test]
    fn a_sharp_faces_multiply_neighbours() {
        let a = FinAlgebra::dual_numbers(Field::Rationals);
        let e = build_a_sharp(&a, 2);
        // δ_1 on [2] sends x ⊗ 1 to 1·x = x, and 1 ⊗ x to x·1 = x
        let last = e.face(1, 1);
        assert_eq!(last.column(2), &[(1, Field::Rationals.one())]);
        assert_eq!(last.column(1), &[(1, Field::Rationals.one())]);
        // x ⊗ x ↦ 0
        assert!(last.column(3).is_empty());
    }
}
