//! First-quadrant bicomplexes and the cyclic bicomplex of a cyclic vector space.

use rayon::prelude::*;

use super::cyclic::CyclicVectorSpace;
use crate::exactlin::{ChainComplex, Field, Matrix};
use crate::Error;

/// `C_{p,q}` for `p ≤ width`, `q ≤ height`, with `v : C_{p,q} -> C_{p,q-1}`
/// and `h : C_{p,q} -> C_{p-1,q}`.
#[derive(Clone, Debug)]
pub struct Bicomplex {
    field: Field,
    /// `dims[p][q]`.
    dims: Vec<Vec<usize>>,
    /// `vert[p][q]` for `q ≥ 1`; index 0 holds an empty map.
    vert: Vec<Vec<Matrix>>,
    /// `horiz[p][q]` for `p ≥ 1`; row 0 is empty.
    horiz: Vec<Vec<Matrix>>,
}

impl Bicomplex {
    pub fn new(field: Field, dims: Vec<Vec<usize>>, vert: Vec<Vec<Matrix>>, horiz: Vec<Vec<Matrix>>) -> Result<Self, Error> {
        let b = Bicomplex {
            field,
            dims,
            vert,
            horiz,
        };
        b.check()?;
        Ok(b)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn width(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn height(&self) -> usize {
        self.dims[0].len() - 1
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims[p][q]
    }

    pub fn vertical(&self, p: usize, q: usize) -> &Matrix {
        &self.vert[p][q]
    }

    pub fn horizontal(&self, p: usize, q: usize) -> &Matrix {
        &self.horiz[p][q]
    }

    /// `v² = 0`, `h² = 0` and `vh + hv = 0` wherever defined.
    pub fn check(&self) -> Result<(), Error> {
        let (w, h) = (self.width(), self.height());
        for p in 0..=w {
            for q in 0..=h {
                if q >= 2 && !self.vert[p][q - 1].compose(&self.vert[p][q]).is_zero() {
                    return Err(Error::NotAComplex(format!("v² ≠ 0 at ({p},{q})")));
                }
                if p >= 2 && !self.horiz[p - 1][q].compose(&self.horiz[p][q]).is_zero() {
                    return Err(Error::NotAComplex(format!("h² ≠ 0 at ({p},{q})")));
                }
                if p >= 1 && q >= 1 {
                    let vh = self.vert[p - 1][q].compose(&self.horiz[p][q]);
                    let hv = self.horiz[p][q - 1].compose(&self.vert[p][q]);
                    if !vh.add(&hv).is_zero() {
                        return Err(Error::NotAComplex(format!("v and h do not anticommute at ({p},{q})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Block dimensions of `Tot_n = ⊕_p C_{p,n-p}`, ordered by `p`.
    pub fn total_blocks(&self, n: usize) -> Vec<usize> {
        (0..=n.min(self.width()))
            .map(|p| if n - p <= self.height() { self.dims[p][n - p] } else { 0 })
            .collect()
    }

    /// `Tot_n` for `n ≤ top`, truncated to the stored grid.
    pub fn total(&self, top: usize) -> ChainComplex {
        let diffs: Vec<Matrix> = (1..=top).into_par_iter().map(|n| self.total_differential(n)).collect();
        ChainComplex::new_unchecked(self.field, self.total_blocks(0).iter().sum(), diffs)
    }

    /// `D_n = v + h : Tot_n -> Tot_{n-1}`.
    pub fn total_differential(&self, n: usize) -> Matrix {
        let src = self.total_blocks(n);
        let tgt = self.total_blocks(n - 1);
        let mut grid: Vec<Vec<Option<&Matrix>>> = vec![vec![None; src.len()]; tgt.len()];
        for p in 0..src.len() {
            let q = n - p;
            if q > self.height() {
                continue;
            }
            if q >= 1 && p < tgt.len() {
                grid[p][p] = Some(&self.vert[p][q]);
            }
            if p >= 1 {
                grid[p - 1][p] = Some(&self.horiz[p][q]);
            }
        }
        Matrix::from_blocks(self.field, &tgt, &src, &grid)
    }
}

/// Signed rotation `τ = (-1)^q E(t_{q+1})` on `E([q+1])`.
pub(crate) fn signed_rotation(e: &CyclicVectorSpace, q: usize) -> Matrix {
    let t = e.rotation(q + 1);
    if q % 2 == 1 {
        t.neg()
    } else {
        t.clone()
    }
}

/// `N = Σ τ^i` on `E([q+1])`.
pub(crate) fn norm_map(e: &CyclicVectorSpace, q: usize) -> Matrix {
    let tau = signed_rotation(e, q);
    let mut acc = Matrix::identity(e.field(), e.dim(q + 1));
    let mut pow = Matrix::identity(e.field(), e.dim(q + 1));
    for _ in 0..q {
        pow = tau.compose(&pow);
        acc = acc.add(&pow);
    }
    acc
}

/// `1 - τ` on `E([q+1])`.
pub(crate) fn one_minus_tau(e: &CyclicVectorSpace, q: usize) -> Matrix {
    Matrix::identity(e.field(), e.dim(q + 1)).sub(&signed_rotation(e, q))
}

/// `b = Σ_{i=0}^{q} (-1)^i δ_i : E([q+1]) -> E([q])`.
pub fn hochschild_b(e: &CyclicVectorSpace, q: usize) -> Matrix {
    alternating_faces(e, q, q + 1)
}

/// `b' = Σ_{i<q} (-1)^i δ_i`, omitting the wrap-around face.
pub fn bar_b_prime(e: &CyclicVectorSpace, q: usize) -> Matrix {
    alternating_faces(e, q, q)
}

fn alternating_faces(e: &CyclicVectorSpace, q: usize, count: usize) -> Matrix {
    let mut acc = Matrix::zeros(e.field(), e.dim(q), e.dim(q + 1));
    for i in 0..count {
        let f = e.face(q, i);
        acc = if i % 2 == 0 { acc.add(f) } else { acc.sub(f) };
    }
    acc
}

/// The extra degeneracy `E([q+1]) -> E([q+2])`, a contraction of `b'`.
pub fn extra_degeneracy(e: &CyclicVectorSpace, q: usize) -> Matrix {
    e.rotation(q + 2).compose(e.degeneracy(q + 1, q))
}

/// The cyclic bicomplex: column `p` holds `E([q+1])` in row `q`, with `b` on
/// even columns, `-b'` on odd columns, `1 - τ` out of odd columns and `N` out
/// of even ones.
pub fn cyclic_bicomplex(e: &CyclicVectorSpace, width: usize, height: usize) -> Result<Bicomplex, Error> {
    if height + 1 > e.n_max() {
        return Err(Error::Truncation(format!(
            "rows up to {height} need objects up to [{}], have [{}]",
            height + 1,
            e.n_max()
        )));
    }
    let field = e.field();
    let dims = vec![(0..=height).map(|q| e.dim(q + 1)).collect::<Vec<_>>(); width + 1];
    let b: Vec<Matrix> = (0..=height)
        .into_par_iter()
        .map(|q| if q == 0 { Matrix::zeros(field, 0, e.dim(1)) } else { hochschild_b(e, q) })
        .collect();
    let neg_bp: Vec<Matrix> = (0..=height)
        .into_par_iter()
        .map(|q| if q == 0 { Matrix::zeros(field, 0, e.dim(1)) } else { bar_b_prime(e, q).neg() })
        .collect();
    let omt: Vec<Matrix> = (0..=height).into_par_iter().map(|q| one_minus_tau(e, q)).collect();
    let norm: Vec<Matrix> = (0..=height).into_par_iter().map(|q| norm_map(e, q)).collect();
    let vert = (0..=width).map(|p| if p % 2 == 0 { b.clone() } else { neg_bp.clone() }).collect();
    let horiz = (0..=width)
        .map(|p| match p {
            0 => Vec::new(),
            p if p % 2 == 1 => omt.clone(),
            _ => norm.clone(),
        })
        .collect();
    Ok(Bicomplex {
        field,
        dims,
        vert,
        horiz,
    })
}
