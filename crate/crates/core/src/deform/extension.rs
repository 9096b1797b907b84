//! Square-zero extensions `Ã = A ⊕ M` from Hochschild 2-cocycles.
//!
//! A cochain `c : A ⊗ A -> M` is a vector in `C^2` with index
//! `(i * d + j) * dim M + k`.

use crate::algebra::{cocycle_violation, hochschild_cochain_complex, Bimodule, FinAlgebra};
use crate::exactlin::{Matrix, Scalar, SparseVec};
use crate::Error;

#[derive(Clone, Debug)]
pub struct SquareZeroExtension {
    pub base: FinAlgebra,
    pub fiber: Bimodule,
    pub cocycle: SparseVec,
    /// Basis: `A`'s basis, then `M`'s basis at offset `dim A`.
    pub total: FinAlgebra,
}

impl SquareZeroExtension {
    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    /// Basis index of `m_k` in `Ã`.
    pub fn fiber_index(&self, k: usize) -> usize {
        self.base.dim() + k
    }

    /// 1 for basis elements of `M`, 0 for those of `A`.
    pub fn weights(&self) -> Vec<usize> {
        (0..self.total.dim()).map(|i| usize::from(i >= self.base.dim())).collect()
    }

    /// `p : Ã -> A`.
    pub fn projection(&self) -> Matrix {
        let d = self.base.dim();
        let cols = (0..self.total.dim())
            .map(|i| if i < d { vec![(i, self.base.field().one())] } else { Vec::new() })
            .collect();
        Matrix::from_columns(self.base.field(), d, cols)
    }

    /// `i : M -> Ã`.
    pub fn inclusion(&self) -> Matrix {
        let d = self.base.dim();
        let cols = (0..self.fiber.dim()).map(|k| vec![(d + k, self.base.field().one())]).collect();
        Matrix::from_columns(self.base.field(), self.total.dim(), cols)
    }

    /// Audits that `p` is multiplicative, that `ker p = M` squares to zero, and
    /// that `i` is a map of `A`-bimodules.
    pub fn audit(&self) -> Result<(), Error> {
        let (d, dm) = (self.base.dim(), self.fiber.dim());
        let one = self.base.field().one();
        let p = self.projection();
        for x in 0..d + dm {
            for y in 0..d + dm {
                let prod = self.total.mul(&[(x, one.clone())], &[(y, one.clone())]);
                let lhs = p.apply(&prod);
                let rhs = self.base.mul(&p.apply(&[(x, one.clone())]), &p.apply(&[(y, one.clone())]));
                if lhs != rhs {
                    return Err(Error::Audit("the projection is not multiplicative".into()));
                }
                if x >= d && y >= d && !prod.is_empty() {
                    return Err(Error::Audit("the ideal M does not square to zero".into()));
                }
                if x < d && y >= d {
                    let expect: SparseVec = self.fiber.left(x).column(y - d).iter().map(|(k, c)| (d + k, c.clone())).collect();
                    if prod != expect {
                        return Err(Error::Audit("left action on M differs from the bimodule".into()));
                    }
                }
                if x >= d && y < d {
                    let expect: SparseVec = self.fiber.right(y).column(x - d).iter().map(|(k, c)| (d + k, c.clone())).collect();
                    if prod != expect {
                        return Err(Error::Audit("right action on M differs from the bimodule".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Reads a cochain from a `dim M × d²` matrix whose column `i * d + j` is `c(e_i, e_j)`.
pub fn cochain_from_matrix(c: &Matrix) -> SparseVec {
    let dm = c.rows();
    let mut out: SparseVec = (0..c.cols())
        .flat_map(|col| c.column(col).iter().map(move |(k, x)| (col * dm + k, x.clone())))
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out
}

/// `Ã = A ⊕ M` with `(a, m)(a', m') = (aa', am' + ma' + c(a, a'))`; the unit
/// is `(1, -c(1, 1))`.
pub fn square_zero(a: &FinAlgebra, m: &Bimodule, c: &[(usize, Scalar)]) -> Result<SquareZeroExtension, Error> {
    let d = a.dim();
    let dm = m.dim();
    let field = a.field();
    if c.iter().any(|(i, _)| *i >= d * d * dm) {
        return Err(Error::DimensionMismatch(format!("a 2-cochain has {} coordinates", d * d * dm)));
    }
    if let Some((i, j, k)) = cocycle_violation(a, m, c) {
        let l = a.labels();
        return Err(Error::Audit(format!(
            "not a 2-cocycle: the identity fails on ({}, {}, {})",
            l[i], l[j], l[k]
        )));
    }
    let mut entries = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for (k, x) in a.basis_product(i, j) {
                entries.push((i, j, *k, x.clone()));
            }
        }
    }
    for (idx, x) in c {
        let (ij, k) = (idx / dm, idx % dm);
        entries.push((ij / d, ij % d, d + k, x.clone()));
    }
    for i in 0..d {
        for k in 0..dm {
            for (k2, x) in m.left(i).column(k) {
                entries.push((i, d + k, d + k2, x.clone()));
            }
            for (k2, x) in m.right(i).column(k) {
                entries.push((d + k, i, d + k2, x.clone()));
            }
        }
    }
    // c(1, 1)
    let mut unit: SparseVec = a.unit().clone();
    let c_dense = |i: usize, j: usize, k: usize| -> Scalar {
        c.iter().find(|(idx, _)| *idx == (i * d + j) * dm + k).map_or_else(|| field.zero(), |(_, x)| x.clone())
    };
    for k in 0..dm {
        let mut s = field.zero();
        for (u, x) in a.unit() {
            for (v, y) in a.unit() {
                s = &s + &(&(x * y) * &c_dense(*u, *v, k));
            }
        }
        if !s.is_zero() {
            unit.push((d + k, -s));
        }
    }
    let mut labels: Vec<String> = a.labels().to_vec();
    labels.extend((0..dm).map(|k| format!("m{k}")));
    let total = FinAlgebra::from_entries(field, labels, unit, entries)?;
    let ext = SquareZeroExtension {
        base: a.clone(),
        fiber: m.clone(),
        cocycle: c.to_vec(),
        total,
    };
    ext.audit()?;
    Ok(ext)
}

/// For `c' = c + δh`, the map `Ã_{c'} -> Ã_c`, `(a, m) ↦ (a, m + h(a))`;
/// `h` is a 1-cochain with index `i * dim M + k`.
pub fn cohomologous_isomorphism(a: &FinAlgebra, m: &Bimodule, h: &[(usize, Scalar)]) -> Matrix {
    let d = a.dim();
    let dm = m.dim();
    let field = a.field();
    let cols = (0..d + dm)
        .map(|x| {
            let mut col = vec![(x, field.one())];
            if x < d {
                col.extend(h.iter().filter(|(i, _)| i / dm == x).map(|(i, c)| (d + i % dm, c.clone())));
            }
            col
        })
        .collect();
    Matrix::from_columns(field, d + dm, cols)
}

/// `δh` for a 1-cochain `h`.
pub fn coboundary(a: &FinAlgebra, m: &Bimodule, h: &[(usize, Scalar)]) -> Result<SparseVec, Error> {
    let cx = hochschild_cochain_complex(a, m, 2)?;
    Ok(cx.codiff(1).apply(h))
}
