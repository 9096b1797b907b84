//! Chain complexes, homology and induced maps.

use super::echelon::{kernel_basis, rank, Echelon, Quotient, Subspace};
use super::matrix::{Matrix, SparseVec};
use super::scalar::Field;
use crate::Error;

/// A bounded chain complex `C_0 <- C_1 <- ... <- C_top`.
///
/// `diffs[n]` is `d_n : C_n -> C_{n-1}`; `diffs[0]` has zero rows.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    field: Field,
    diffs: Vec<Matrix>,
}

impl ChainComplex {
    /// Builds from `d_1, d_2, ...` and the dimension of `C_0`; checks `d∘d = 0`.
    pub fn new(field: Field, dim0: usize, higher: Vec<Matrix>) -> Result<Self, Error> {
        let mut diffs = vec![Matrix::zeros(field, 0, dim0)];
        diffs.extend(higher);
        for n in 1..diffs.len() {
            if diffs[n].rows() != diffs[n - 1].cols() {
                return Err(Error::DimensionMismatch(format!(
                    "d_{n} has {} rows but C_{} has dimension {}",
                    diffs[n].rows(),
                    n - 1,
                    diffs[n - 1].cols()
                )));
            }
        }
        let c = ChainComplex { field, diffs };
        c.check()?;
        Ok(c)
    }

    /// Skips the `d∘d = 0` audit; for complexes already known to be valid.
    pub fn new_unchecked(field: Field, dim0: usize, higher: Vec<Matrix>) -> Self {
        let mut diffs = vec![Matrix::zeros(field, 0, dim0)];
        diffs.extend(higher);
        ChainComplex { field, diffs }
    }

    pub fn check(&self) -> Result<(), Error> {
        for n in 2..self.diffs.len() {
            if !self.diffs[n - 1].compose(&self.diffs[n]).is_zero() {
                return Err(Error::NotAComplex(format!("d_{} ∘ d_{n} ≠ 0", n - 1)));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Highest degree present.
    pub fn top(&self) -> usize {
        self.diffs.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.diffs.get(n).map_or(0, |d| d.cols())
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top()).map(|n| self.dim(n)).collect()
    }

    /// `d_n`, with zero maps outside the stored range.
    pub fn d(&self, n: usize) -> Matrix {
        match self.diffs.get(n) {
            Some(d) => d.clone(),
            None => Matrix::zeros(self.field, self.dim(n.wrapping_sub(1)), 0),
        }
    }

    pub fn d_ref(&self, n: usize) -> Option<&Matrix> {
        self.diffs.get(n)
    }

    /// Homology dimensions in degrees `0..top`. The top degree is omitted
    /// because its boundaries are unknown.
    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.diffs.iter().map(rank).collect();
        (0..self.top())
            .map(|n| self.dim(n) - ranks[n] - ranks[n + 1])
            .collect()
    }

    pub fn homology_dim(&self, n: usize) -> usize {
        assert!(n < self.top(), "degree {n} is not below the top of the complex");
        self.dim(n) - rank(&self.diffs[n]) - rank(&self.diffs[n + 1])
    }

    /// The quotient by a subcomplex given degreewise; errors if `d` does not
    /// preserve the subspaces.
    pub fn quotient(&self, subs: Vec<Subspace>) -> Result<(ChainComplex, Vec<Quotient>), Error> {
        if subs.len() != self.diffs.len() {
            return Err(Error::DimensionMismatch("one subspace per degree expected".into()));
        }
        let quots: Vec<Quotient> = subs.into_iter().map(Quotient::new).collect();
        let mut higher = Vec::with_capacity(self.top());
        for n in 1..=self.top() {
            higher.push(quots[n].induced(&self.diffs[n], &quots[n - 1])?);
        }
        let c = ChainComplex::new_unchecked(self.field, quots[0].dim(), higher);
        Ok((c, quots))
    }

    pub fn homology_basis(&self, n: usize) -> HomologyBasis {
        assert!(n < self.top(), "degree {n} is not below the top of the complex");
        HomologyBasis::new(&self.diffs[n], &self.diffs[n + 1])
    }
}

/// `ker d_n / im d_{n+1}` with chosen cycle representatives.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    field: Field,
    reps: Vec<SparseVec>,
    ech: Echelon,
    d_out: Matrix,
}

impl HomologyBasis {
    pub fn new(d_out: &Matrix, d_in: &Matrix) -> Self {
        let field = d_out.field();
        let dim = d_out.cols();
        let mut ech = Echelon::new_labeled(field, dim);
        for c in d_in.columns() {
            ech.insert_labeled(c, Vec::new());
        }
        let mut reps = Vec::new();
        for z in kernel_basis(d_out) {
            let k = reps.len();
            if ech.insert_labeled(&z, vec![(k, field.one())]).is_none() {
                reps.push(z);
            }
        }
        HomologyBasis {
            field,
            reps,
            ech,
            d_out: d_out.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn chain_dim(&self) -> usize {
        self.d_out.cols()
    }

    pub fn reps(&self) -> &[SparseVec] {
        &self.reps
    }

    pub fn rep_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.chain_dim(), self.reps.clone())
    }

    /// Class of a cycle in the representative basis.
    pub fn coordinates(&self, z: &[(usize, crate::Scalar)]) -> Result<SparseVec, Error> {
        if !self.d_out.apply(z).is_empty() {
            return Err(Error::Audit("vector is not a cycle".into()));
        }
        let (res, coords) = self.ech.reduce_labeled(z);
        if !res.is_empty() {
            return Err(Error::Audit("cycle escaped the homology basis".into()));
        }
        Ok(coords)
    }

    pub fn is_boundary(&self, z: &[(usize, crate::Scalar)]) -> bool {
        self.coordinates(z).map(|c| c.is_empty()).unwrap_or(false)
    }

    /// Matrix of the map on homology induced by a chain-level map `f`
    /// from this complex's degree into `target`'s.
    pub fn induced(&self, f: &Matrix, target: &HomologyBasis) -> Result<Matrix, Error> {
        let cols = self
            .reps
            .iter()
            .map(|z| target.coordinates(&f.apply(z)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_columns(self.field, target.dim(), cols))
    }
}

/// Checks `d' f = f d` between two complexes in degrees `0..=top`, where
/// `maps[n] : C_n -> D_{n+shift}`; with `anti` the identity checked is
/// `d' f = -f d`.
pub fn check_chain_map(
    source: &ChainComplex,
    target: &ChainComplex,
    maps: &[Matrix],
    shift: usize,
    anti: bool,
) -> Result<(), Error> {
    for n in 1..maps.len() {
        let lhs = target.d(n + shift).compose(&maps[n]);
        let rhs = maps[n - 1].compose(&source.d(n));
        let ok = if anti { lhs.add(&rhs).is_zero() } else { lhs == rhs };
        if !ok {
            return Err(Error::Audit(format!("chain map fails in degree {n}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_homology() {
        // simplicial circle: two vertices, two edges
        let q = Field::Rationals;
        let d1 = Matrix::from_i64_rows(q, &[&[-1, 1], &[1, -1]]);
        let c = ChainComplex::new(q, 2, vec![d1, Matrix::zeros(q, 2, 0)]).unwrap();
        assert_eq!(c.homology_dims(), vec![1, 1]);
        let h1 = c.homology_basis(1);
        assert_eq!(h1.dim(), 1);
        let z = h1.reps()[0].clone();
        let doubled: Vec<_> = z.iter().map(|(i, x)| (*i, x + x)).collect();
        assert_eq!(h1.coordinates(&doubled).unwrap(), vec![(0, q.from_i64(2))]);
    }

    #[test]
    fn non_complex_rejected() {
        let q = Field::Rationals;
        let d1 = Matrix::from_i64_rows(q, &[&[1]]);
        let d2 = Matrix::from_i64_rows(q, &[&[1]]);
        assert!(matches!(
            ChainComplex::new(q, 1, vec![d1, d2]),
            Err(Error::NotAComplex(_))
        ));
    }

    #[test]
    fn boundaries_have_zero_class() {
        let q = Field::Rationals;
        let d1 = Matrix::from_i64_rows(q, &[&[1, 1, 0], &[0, 0, 0]]);
        let c = ChainComplex::new(q, 2, vec![d1.clone(), Matrix::zeros(q, 3, 0)]).unwrap();
        let h0 = c.homology_basis(0);
        assert_eq!(h0.dim(), 1);
        assert!(h0.is_boundary(d1.column(0)));
    }
}
