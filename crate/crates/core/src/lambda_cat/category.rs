//! Finite categories and their linear representations.

use std::collections::HashMap;

use super::morphism::{hom_set, CycMor};
use crate::exactlin::{Field, Matrix};
use crate::Error;

/// A finite category with an explicit composition table.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    object_names: Vec<String>,
    source: Vec<usize>,
    target: Vec<usize>,
    identity: Vec<usize>,
    /// `comp[g][f]` is `g ∘ f` when `target f = source g`.
    comp: Vec<Vec<Option<usize>>>,
}

impl FiniteCategory {
    /// Builds and audits associativity and unitality.
    pub fn new(
        object_names: Vec<String>,
        source: Vec<usize>,
        target: Vec<usize>,
        identity: Vec<usize>,
        comp: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, Error> {
        let c = FiniteCategory {
            object_names,
            source,
            target,
            identity,
            comp,
        };
        c.audit()?;
        Ok(c)
    }

    fn audit(&self) -> Result<(), Error> {
        let m = self.num_morphisms();
        if self.target.len() != m || self.comp.len() != m || self.identity.len() != self.num_objects() {
            return Err(Error::Invalid("inconsistent category tables".into()));
        }
        for (o, &id) in self.identity.iter().enumerate() {
            if self.source[id] != o || self.target[id] != o {
                return Err(Error::Audit(format!("identity of object {o} has wrong ends")));
            }
        }
        for g in 0..m {
            for f in 0..m {
                let composable = self.target[f] == self.source[g];
                match self.comp[g][f] {
                    Some(h) if composable => {
                        if self.source[h] != self.source[f] || self.target[h] != self.target[g] {
                            return Err(Error::Audit(format!("composite {g}∘{f} has wrong ends")));
                        }
                    }
                    None if !composable => {}
                    _ => return Err(Error::Audit(format!("composition table wrong at {g}∘{f}"))),
                }
            }
            if self.comp[g][self.identity[self.source[g]]] != Some(g)
                || self.comp[self.identity[self.target[g]]][g] != Some(g)
            {
                return Err(Error::Audit(format!("identity law fails for morphism {g}")));
            }
        }
        for f in 0..m {
            for g in self.out_of(self.target[f]) {
                let gf = self.comp[g][f].unwrap();
                for h in self.out_of(self.target[g]) {
                    let hg = self.comp[h][g].unwrap();
                    if self.comp[h][gf] != self.comp[hg][f] {
                        return Err(Error::Audit(format!("associativity fails at ({h},{g},{f})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.object_names.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.source.len()
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.object_names[o]
    }

    pub fn source(&self, f: usize) -> usize {
        self.source[f]
    }

    pub fn target(&self, f: usize) -> usize {
        self.target[f]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.source[f]] == f
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g][f]
    }

    /// Morphisms with the given source.
    pub fn out_of(&self, o: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_morphisms()).filter(move |&f| self.source[f] == o)
    }

    /// Morphisms with the given target.
    pub fn into(&self, o: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_morphisms()).filter(move |&f| self.target[f] == o)
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.out_of(a).filter(|&f| self.target[f] == b).collect()
    }

    /// The category with one object and one morphism.
    pub fn point() -> Self {
        FiniteCategory::new(vec!["*".into()], vec![0], vec![0], vec![0], vec![vec![Some(0)]])
            .expect("the point is a category")
    }
}

/// The full subcategory `Λ≤N` together with its morphisms as lifts.
#[derive(Clone, Debug)]
pub struct LambdaTruncation {
    pub category: FiniteCategory,
    /// Morphism `k` of `category` is `morphisms[k]`; object `o` is `[o+1]`.
    pub morphisms: Vec<CycMor>,
}

impl LambdaTruncation {
    pub fn index_of(&self, f: &CycMor) -> Option<usize> {
        self.morphisms.iter().position(|g| g == f)
    }
}

pub fn lambda_leq(n_max: usize) -> LambdaTruncation {
    assert!(n_max >= 1, "Λ≤N needs N ≥ 1");
    let mut morphisms = Vec::new();
    for s in 1..=n_max {
        for t in 1..=n_max {
            morphisms.extend(hom_set(s, t));
        }
    }
    let index: HashMap<CycMor, usize> = morphisms.iter().cloned().zip(0..).collect();
    let source: Vec<usize> = morphisms.iter().map(|f| f.source() - 1).collect();
    let target: Vec<usize> = morphisms.iter().map(|f| f.target() - 1).collect();
    let identity = (1..=n_max).map(|n| index[&CycMor::identity(n)]).collect();
    let comp = morphisms
        .iter()
        .map(|g| {
            morphisms
                .iter()
                .map(|f| (f.target() == g.source()).then(|| index[&g.after(f)]))
                .collect()
        })
        .collect();
    let names = (1..=n_max).map(|n| format!("[{n}]")).collect();
    let category = FiniteCategory::new(names, source, target, identity, comp)
        .expect("Λ≤N is a category");
    LambdaTruncation {
        category,
        morphisms,
    }
}

/// A covariant functor from a finite category to finite-dimensional vector spaces.
#[derive(Clone, Debug)]
pub struct Representation {
    field: Field,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl Representation {
    /// Builds and audits `E(g∘f) = E(g)E(f)` and `E(id) = id`.
    pub fn new(cat: &FiniteCategory, field: Field, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self, Error> {
        if dims.len() != cat.num_objects() || maps.len() != cat.num_morphisms() {
            return Err(Error::DimensionMismatch("representation tables do not match the category".into()));
        }
        for (f, m) in maps.iter().enumerate() {
            if m.cols() != dims[cat.source(f)] || m.rows() != dims[cat.target(f)] {
                return Err(Error::DimensionMismatch(format!("E(morphism {f}) has the wrong shape")));
            }
        }
        for o in 0..cat.num_objects() {
            if maps[cat.identity(o)] != Matrix::identity(field, dims[o]) {
                return Err(Error::Audit(format!("E(id) ≠ id at object {o}")));
            }
        }
        for f in 0..cat.num_morphisms() {
            for g in cat.out_of(cat.target(f)) {
                let gf = cat.compose(g, f).unwrap();
                if maps[gf] != maps[g].compose(&maps[f]) {
                    return Err(Error::Audit(format!(
                        "E is not functorial on the pair ({g}, {f})"
                    )));
                }
            }
        }
        Ok(Representation { field, dims, maps })
    }

    /// The constant functor with value `k`.
    pub fn constant(cat: &FiniteCategory, field: Field) -> Self {
        Representation {
            field,
            dims: vec![1; cat.num_objects()],
            maps: vec![Matrix::identity(field, 1); cat.num_morphisms()],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, o: usize) -> usize {
        self.dims[o]
    }

    pub fn map(&self, f: usize) -> &Matrix {
        &self.maps[f]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_counts() {
        assert_eq!(lambda_leq(1).category.num_morphisms(), 1);
        assert_eq!(lambda_leq(2).category.num_morphisms(), 11);
        assert_eq!(lambda_leq(3).category.num_morphisms(), 71);
    }

    #[test]
    fn broken_composition_rejected() {
        let mut comp = vec![vec![None; 2]; 2];
        comp[0][0] = Some(0);
        comp[1][1] = Some(1);
        comp[1][0] = Some(1);
        comp[0][1] = Some(1);
        // two endomorphisms of one object with 1 as identity but 0∘0 = 0 fine;
        // identity law 0∘1 must equal 0
        let r = FiniteCategory::new(vec!["a".into()], vec![0, 0], vec![0, 0], vec![1], comp);
        assert!(r.is_err());
    }

    #[test]
    fn non_functor_rejected() {
        let lam = lambda_leq(2);
        let q = Field::Rationals;
        let mut maps = vec![Matrix::identity(q, 1); lam.category.num_morphisms()];
        let t = lam.index_of(&CycMor::rotation(2)).unwrap();
        maps[t] = Matrix::scalar_identity(1, &q.from_i64(2));
        assert!(Representation::new(&lam.category, q, vec![1, 1], maps).is_err());
    }
}
