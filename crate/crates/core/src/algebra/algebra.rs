//! Finite-dimensional associative unital algebras by structure constants.

use crate::exactlin::{sparse_axpy, Field, Matrix, Scalar, SparseVec};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlgebra {
    field: Field,
    labels: Vec<String>,
    unit: SparseVec,
    /// `table[i * d + j] = e_i e_j`.
    table: Vec<SparseVec>,
}

impl FinAlgebra {
    /// Builds and audits associativity and the unit laws.
    pub fn new(field: Field, labels: Vec<String>, unit: SparseVec, table: Vec<SparseVec>) -> Result<Self, Error> {
        let d = labels.len();
        if d == 0 {
            return Err(Error::Invalid("an algebra needs a nonzero basis".into()));
        }
        if table.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "{} products given for a {d}-dimensional algebra",
                table.len()
            )));
        }
        let in_range = |v: &SparseVec| v.iter().all(|(i, x)| *i < d && field.contains(x));
        if !in_range(&unit) || !table.iter().all(in_range) {
            return Err(Error::Invalid("structure constants out of range or over the wrong field".into()));
        }
        let a = FinAlgebra {
            field,
            labels,
            unit,
            table,
        };
        a.audit()?;
        Ok(a)
    }

    /// Builds from `(i, j, k, c)` entries meaning `e_i e_j ∋ c e_k`.
    pub fn from_entries(
        field: Field,
        labels: Vec<String>,
        unit: SparseVec,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self, Error> {
        let d = labels.len();
        let mut triplets = Vec::new();
        for (i, j, k, c) in entries {
            if i >= d || j >= d || k >= d {
                return Err(Error::Invalid(format!("product entry ({i},{j},{k}) out of range")));
            }
            triplets.push((k, i * d + j, c));
        }
        let m = Matrix::from_triplets(field, d, d * d, triplets)?;
        Self::new(field, labels, unit, m.into_columns())
    }

    fn audit(&self) -> Result<(), Error> {
        let d = self.dim();
        for i in 0..d {
            let e = vec![(i, self.field.one())];
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::Audit(format!("unit law fails on basis element {}", self.labels[i])));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = &self.table[i * d + j];
                for k in 0..d {
                    let left = self.mul(ij, &[(k, self.field.one())]);
                    let right = self.mul(&[(i, self.field.one())], &self.table[j * d + k]);
                    if left != right {
                        return Err(Error::Audit(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                acc = sparse_axpy(&acc, &(x * y), self.basis_product(*i, *j));
            }
        }
        acc
    }

    /// Matrix of `x ↦ e_i x`.
    pub fn left_mult(&self, i: usize) -> Matrix {
        let d = self.dim();
        Matrix::from_columns(self.field, d, (0..d).map(|j| self.basis_product(i, j).clone()).collect())
    }

    /// Matrix of `x ↦ x e_i`.
    pub fn right_mult(&self, i: usize) -> Matrix {
        let d = self.dim();
        Matrix::from_columns(self.field, d, (0..d).map(|j| self.basis_product(j, i).clone()).collect())
    }

    /// The multiplication map `A ⊗ A -> A` on the basis `e_i ⊗ e_j ↦ i*d+j`.
    pub fn mult_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.dim(), self.table.clone())
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// The same structure constants read in another field. Fails when a
    /// constant has no image (a denominator divisible by `p`).
    pub fn with_field(&self, field: Field) -> Result<Self, Error> {
        let conv = |v: &SparseVec| -> Result<SparseVec, Error> {
            let mut out = Vec::new();
            for (i, x) in v {
                let y = field.parse_scalar(&x.to_string())?;
                if !y.is_zero() {
                    out.push((*i, y));
                }
            }
            Ok(out)
        };
        let table = self.table.iter().map(conv).collect::<Result<Vec<_>, _>>()?;
        Self::new(field, self.labels.clone(), conv(&self.unit)?, table)
    }

    /// The ground field `k`.
    pub fn ground(field: Field) -> Self {
        Self::truncated_polynomial(field, 1)
    }

    /// `k[x]/x^n` with basis `1, x, …, x^{n-1}`.
    pub fn truncated_polynomial(field: Field, n: usize) -> Self {
        assert!(n >= 1);
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        let entries = (0..n).flat_map(|i| (0..n).filter(move |j| i + j < n).map(move |j| (i, j, i + j, field.one())));
        Self::from_entries(field, labels, vec![(0, field.one())], entries).expect("k[x]/x^n is an algebra")
    }

    pub fn dual_numbers(field: Field) -> Self {
        Self::truncated_polynomial(field, 2)
    }

    /// The group algebra of the cyclic group of order `n`.
    pub fn cyclic_group(field: Field, n: usize) -> Self {
        let labels = (0..n).map(|i| if i == 0 { "1".into() } else { format!("g^{i}") }).collect();
        let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j, (i + j) % n, field.one())));
        Self::from_entries(field, labels, vec![(0, field.one())], entries).expect("k[C_n] is an algebra")
    }

    /// `M_n(k)` with matrix units `E_ij` at index `i*n + j`.
    pub fn matrix_algebra(field: Field, n: usize) -> Self {
        let labels = (0..n * n).map(|k| format!("E{}{}", k / n + 1, k % n + 1)).collect();
        let entries = (0..n).flat_map(move |i| {
            (0..n).flat_map(move |j| (0..n).map(move |l| (i * n + j, j * n + l, i * n + l, field.one())))
        });
        let unit = (0..n).map(|i| (i * n + i, field.one())).collect();
        Self::from_entries(field, labels, unit, entries).expect("M_n(k) is an algebra")
    }

    /// Upper triangular 2×2 matrices, basis `E11, E12, E22`.
    pub fn upper_triangular(field: Field) -> Self {
        let one = field.one();
        let entries = vec![
            (0, 0, 0, one.clone()),
            (0, 1, 1, one.clone()),
            (1, 2, 1, one.clone()),
            (2, 2, 2, one.clone()),
        ];
        Self::from_entries(
            field,
            vec!["E11".into(), "E12".into(), "E22".into()],
            vec![(0, one.clone()), (2, one)],
            entries,
        )
        .expect("T_2(k) is an algebra")
    }

    /// Named corpus algebras: `k`, `k[x]/x^2`, `k[x]/x^3`, `k[C2]`, `M2`, `T2`.
    pub fn builtin(name: &str, field: Field) -> Result<Self, Error> {
        Ok(match name {
            "k" | "ground" => Self::ground(field),
            "k[x]/x^2" | "dual" | "dual_numbers" => Self::dual_numbers(field),
            "k[x]/x^3" => Self::truncated_polynomial(field, 3),
            "k[C2]" | "C2" => Self::cyclic_group(field, 2),
            "M2" | "M2(k)" => Self::matrix_algebra(field, 2),
            "T2" => Self::upper_triangular(field),
            _ => return Err(Error::Parse(format!("unknown builtin algebra `{name}`"))),
        })
    }

    pub const BUILTINS: [&'static str; 6] = ["k", "k[x]/x^2", "k[x]/x^3", "k[C2]", "M2", "T2"];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_algebras_pass_audits() {
        for f in [Field::Rationals, Field::Prime(2), Field::Prime(3), Field::Prime(5)] {
            for name in FinAlgebra::BUILTINS {
                FinAlgebra::builtin(name, f).unwrap();
            }
        }
        assert_eq!(FinAlgebra::matrix_algebra(Field::Rationals, 2).dim(), 4);
    }

    #[test]
    fn broken_tables_rejected() {
        let q = Field::Rationals;
        let labels = || vec!["1".to_string(), "a".to_string(), "b".to_string()];
        let unit = vec![(0, q.one())];
        let mut entries: Vec<_> = (0..3).map(|i| (0, i, i, q.one())).collect();
        entries.extend((1..3).map(|i| (i, 0, i, q.one())));
        // (aa)a = ba = a but a(aa) = ab = 0
        let mut bad = entries.clone();
        bad.push((1, 1, 2, q.one()));
        bad.push((2, 1, 1, q.one()));
        assert!(matches!(
            FinAlgebra::from_entries(q, labels(), unit.clone(), bad),
            Err(Error::Audit(_))
        ));
        // 1·a = a + b breaks the unit law
        let mut bad = entries;
        bad.push((0, 1, 2, q.one()));
        assert!(FinAlgebra::from_entries(q, labels(), unit, bad).is_err());
    }

    #[test]
    fn field_change_keeps_structure() {
        let a = FinAlgebra::matrix_algebra(Field::Rationals, 2);
        let b = a.with_field(Field::Prime(3)).unwrap();
        assert_eq!(b, FinAlgebra::matrix_algebra(Field::Prime(3), 2));
    }
}
