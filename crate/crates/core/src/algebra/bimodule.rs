//! Bimodules, tensor products over `A`, and the trace functor `M / [A, M]`.

use super::algebra::FinAlgebra;
use crate::exactlin::{Field, Matrix, Quotient, Scalar, SparseVec, Subspace};
use crate::Error;

/// An `A`-bimodule given by the actions of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    field: Field,
    dim: usize,
    /// `left[i]` is `m ↦ e_i m`.
    left: Vec<Matrix>,
    /// `right[i]` is `m ↦ m e_i`.
    right: Vec<Matrix>,
}

impl Bimodule {
    /// Builds and audits the bimodule axioms.
    pub fn new(a: &FinAlgebra, dim: usize, left: Vec<Matrix>, right: Vec<Matrix>) -> Result<Self, Error> {
        let d = a.dim();
        if left.len() != d || right.len() != d {
            return Err(Error::DimensionMismatch(format!("expected {d} action matrices per side")));
        }
        if left.iter().chain(&right).any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("action matrices must be {dim}x{dim}")));
        }
        let b = Bimodule {
            field: a.field(),
            dim,
            left,
            right,
        };
        b.audit(a)?;
        Ok(b)
    }

    fn audit(&self, a: &FinAlgebra) -> Result<(), Error> {
        let d = a.dim();
        let id = Matrix::identity(self.field, self.dim);
        if self.left_of(a.unit()) != id {
            return Err(Error::Audit("the unit does not act as the identity on the left".into()));
        }
        if self.right_of(a.unit()) != id {
            return Err(Error::Audit("the unit does not act as the identity on the right".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let p = a.basis_product(i, j);
                if self.left_of(p) != self.left[i].compose(&self.left[j]) {
                    return Err(Error::Audit(format!("left action fails on ({}, {})", a.labels()[i], a.labels()[j])));
                }
                if self.right_of(p) != self.right[j].compose(&self.right[i]) {
                    return Err(Error::Audit(format!("right action fails on ({}, {})", a.labels()[i], a.labels()[j])));
                }
                if self.left[i].compose(&self.right[j]) != self.right[j].compose(&self.left[i]) {
                    return Err(Error::Audit(format!(
                        "left action of {} does not commute with right action of {}",
                        a.labels()[i],
                        a.labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `A` acting on itself.
    pub fn diagonal(a: &FinAlgebra) -> Self {
        let d = a.dim();
        Bimodule {
            field: a.field(),
            dim: d,
            left: (0..d).map(|i| a.left_mult(i)).collect(),
            right: (0..d).map(|i| a.right_mult(i)).collect(),
        }
    }

    /// `A ⊗ A` with outer actions, basis `e_x ⊗ e_y ↦ x*d + y`.
    pub fn free(a: &FinAlgebra) -> Self {
        let d = a.dim();
        let id = Matrix::identity(a.field(), d);
        Bimodule {
            field: a.field(),
            dim: d * d,
            left: (0..d).map(|i| a.left_mult(i).kron(&id)).collect(),
            right: (0..d).map(|i| id.kron(&a.right_mult(i))).collect(),
        }
    }

    /// The zero bimodule.
    pub fn zero(a: &FinAlgebra) -> Self {
        let z = Matrix::zeros(a.field(), 0, 0);
        Bimodule {
            field: a.field(),
            dim: 0,
            left: vec![z.clone(); a.dim()],
            right: vec![z; a.dim()],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alg_dim(&self) -> usize {
        self.left.len()
    }

    pub fn left(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn left_of(&self, a: &[(usize, Scalar)]) -> Matrix {
        combine(self.field, self.dim, &self.left, a)
    }

    pub fn right_of(&self, a: &[(usize, Scalar)]) -> Matrix {
        combine(self.field, self.dim, &self.right, a)
    }

    /// The left action as a map `A ⊗ M -> M`, basis `(a, m) ↦ a*dim + m`.
    pub fn left_action_map(&self) -> Matrix {
        let cols = (0..self.alg_dim())
            .flat_map(|i| (0..self.dim).map(move |m| (i, m)))
            .map(|(i, m)| self.left[i].column(m).to_vec())
            .collect();
        Matrix::from_columns(self.field, self.dim, cols)
    }

    /// The right action as a map `M ⊗ A -> M`, basis `(m, a) ↦ m*d + a`.
    pub fn right_action_map(&self) -> Matrix {
        let d = self.alg_dim();
        let cols = (0..self.dim)
            .flat_map(|m| (0..d).map(move |i| (m, i)))
            .map(|(m, i)| self.right[i].column(m).to_vec())
            .collect();
        Matrix::from_columns(self.field, self.dim, cols)
    }
}

fn combine(field: Field, dim: usize, mats: &[Matrix], a: &[(usize, Scalar)]) -> Matrix {
    a.iter().fold(Matrix::zeros(field, dim, dim), |acc, (i, c)| {
        acc.axpy(c, &mats[*i]).expect("action matrices share a shape")
    })
}

fn unit_vec(field: Field, i: usize) -> SparseVec {
    vec![(i, field.one())]
}

/// Relations `m r ⊗ n - m ⊗ r n` inside `M ⊗_k N`.
fn balance_relations(m: &Bimodule, n: &Bimodule) -> Vec<SparseVec> {
    let f = m.field;
    let mut out = Vec::new();
    for r in 0..m.alg_dim() {
        for x in 0..m.dim {
            let mr = Matrix::from_columns(f, m.dim, vec![m.right[r].column(x).to_vec()]);
            let ex = Matrix::from_columns(f, m.dim, vec![unit_vec(f, x)]);
            for y in 0..n.dim {
                let ey = Matrix::from_columns(f, n.dim, vec![unit_vec(f, y)]);
                let rn = Matrix::from_columns(f, n.dim, vec![n.left[r].column(y).to_vec()]);
                let v = mr.kron(&ey).sub(&ex.kron(&rn));
                out.push(v.column(0).to_vec());
            }
        }
    }
    out
}

/// Relations `a (m ⊗ n) - (m ⊗ n) a` inside `M ⊗_k N`.
fn commutator_relations(m: &Bimodule, n: &Bimodule) -> Vec<SparseVec> {
    let f = m.field;
    let idm = Matrix::identity(f, m.dim);
    let idn = Matrix::identity(f, n.dim);
    let mut out = Vec::new();
    for a in 0..m.alg_dim() {
        let c = m.left[a].kron(&idn).sub(&idm.kron(&n.right[a]));
        out.extend(c.into_columns().into_iter().filter(|v| !v.is_empty()));
    }
    out
}

/// `M ⊗_A N` as a quotient of `M ⊗_k N`, with its induced bimodule structure.
#[derive(Clone, Debug)]
pub struct TensorOverA {
    pub bimodule: Bimodule,
    pub quotient: Quotient,
}

impl TensorOverA {
    pub fn projection(&self) -> Matrix {
        self.quotient.projection()
    }
}

pub fn tensor_over_a(a: &FinAlgebra, m: &Bimodule, n: &Bimodule) -> Result<TensorOverA, Error> {
    if m.alg_dim() != a.dim() || n.alg_dim() != a.dim() {
        return Err(Error::DimensionMismatch("bimodules over different algebras".into()));
    }
    let f = a.field();
    let total = m.dim * n.dim;
    let quotient = Quotient::new(Subspace::span(f, total, balance_relations(m, n)));
    let idm = Matrix::identity(f, m.dim);
    let idn = Matrix::identity(f, n.dim);
    let left = (0..a.dim())
        .map(|i| quotient.induced(&m.left[i].kron(&idn), &quotient))
        .collect::<Result<Vec<_>, _>>()?;
    let right = (0..a.dim())
        .map(|i| quotient.induced(&idm.kron(&n.right[i]), &quotient))
        .collect::<Result<Vec<_>, _>>()?;
    let bimodule = Bimodule::new(a, quotient.dim(), left, right)?;
    Ok(TensorOverA { bimodule, quotient })
}

/// `tr(M) = M / span{am - ma}`.
pub fn trace(m: &Bimodule) -> Quotient {
    let rels = (0..m.alg_dim())
        .flat_map(|a| m.left[a].sub(&m.right[a]).into_columns())
        .filter(|v| !v.is_empty());
    Quotient::new(Subspace::span(m.field, m.dim, rels))
}

/// `tr(M ⊗_A N)` as a quotient of `M ⊗_k N`.
pub fn trace_of_tensor(m: &Bimodule, n: &Bimodule) -> Quotient {
    let mut rels = balance_relations(m, n);
    rels.extend(commutator_relations(m, n));
    Quotient::new(Subspace::span(m.field, m.dim * n.dim, rels))
}

/// The factor swap `M ⊗ N -> N ⊗ M` on `k`-tensors.
pub fn swap_matrix(field: Field, dm: usize, dn: usize) -> Matrix {
    let cols = (0..dm)
        .flat_map(|x| (0..dn).map(move |y| (x, y)))
        .map(|(x, y)| unit_vec(field, y * dm + x))
        .collect();
    Matrix::from_columns(field, dm * dn, cols)
}

/// The isomorphism `tr(M ⊗_A N) -> tr(N ⊗_A M)` induced by `m ⊗ n ↦ n ⊗ m`.
pub fn trace_swap(a: &FinAlgebra, m: &Bimodule, n: &Bimodule) -> Result<Matrix, Error> {
    if m.alg_dim() != a.dim() || n.alg_dim() != a.dim() {
        return Err(Error::DimensionMismatch("bimodules over different algebras".into()));
    }
    let q1 = trace_of_tensor(m, n);
    let q2 = trace_of_tensor(n, m);
    q1.induced(&swap_matrix(a.field(), m.dim, n.dim), &q2)
}
