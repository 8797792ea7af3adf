//! Sublattices of `Z^m` in canonical form, integer kernels and intersections.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Integer};
use crate::normal_forms::hnf;

/// A sublattice of `Z^m`, stored by its row-HNF basis so that lattice
/// equality is matrix equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: IntMatrix,
}

impl Lattice {
    /// The lattice spanned by the rows of `generators` (which may be dependent).
    pub fn from_rows(generators: &IntMatrix) -> Self {
        let r = hnf(generators);
        Lattice {
            basis: r.h.top_rows(r.rank),
        }
    }

    /// The lattice spanned by the columns of `generators`.
    pub fn from_columns(generators: &IntMatrix) -> Self {
        Self::from_rows(&generators.transpose())
    }

    pub fn full(m: usize) -> Self {
        Lattice {
            basis: IntMatrix::identity(m),
        }
    }

    pub fn zero(m: usize) -> Self {
        Lattice {
            basis: IntMatrix::zeros(0, m),
        }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> IntMatrix {
        self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn contains(&self, v: &[Integer]) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        // reduce against the echelon basis
        let mut rest = v.to_vec();
        for i in 0..self.rank() {
            let row = self.basis.row(i);
            let p = row.iter().position(|x| !x.is_zero()).unwrap();
            if rest[p].is_zero() {
                continue;
            }
            if !(&rest[p] % &row[p]).is_zero() {
                return false;
            }
            let q = &rest[p] / &row[p];
            for (x, b) in rest.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        rest.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.row_iter().all(|r| self.contains(r))
    }

    /// Index in `Z^m`; `None` when the lattice is not of full rank.
    pub fn index(&self) -> Option<Integer> {
        if self.rank() != self.ambient_dim() {
            return None;
        }
        // triangular basis
        Some((0..self.rank()).map(|i| self.basis[(i, i)].clone()).product())
    }

    /// The smallest saturated lattice containing this one.
    pub fn saturation(&self) -> Lattice {
        kernel_saturation(&kernel_saturation(&self.basis).basis)
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation() == *self
    }
}

/// The lattice `{x in Z^m : M x^T = 0}` for an `r x m` matrix `M`.
///
/// Read off the rows of the HNF transform of `M^T` that annihilate it; the
/// transform is unimodular so the result is automatically saturated.
pub fn kernel_saturation(m: &IntMatrix) -> Lattice {
    let r = hnf(&m.transpose());
    let dim = m.cols();
    Lattice::from_rows(&r.u.bottom_rows(dim - r.rank))
}

/// Intersection of two sublattices of the same `Z^m`.
pub fn lattice_intersection(a: &Lattice, b: &Lattice) -> Result<Lattice> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::Shape(format!(
            "lattices live in Z^{} and Z^{}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    let m = a.ambient_dim();
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(Lattice::zero(m));
    }
    // x*A = y*B  <=>  (x, y) * [A; -B] = 0
    let stacked = a.basis.vstack(&b.basis.neg())?;
    let relations = kernel_saturation(&stacked.transpose());
    let xs = relations.basis.select_columns(&(0..a.rank()).collect::<Vec<_>>());
    Ok(Lattice::from_rows(&(&xs * &a.basis)))
}

/// Intersection of a non-empty family of lattices in the same ambient space.
pub fn intersect_all<'a>(lattices: impl IntoIterator<Item = &'a Lattice>) -> Result<Option<Lattice>> {
    let mut acc: Option<Lattice> = None;
    for l in lattices {
        acc = Some(match acc {
            None => l.clone(),
            Some(prev) => lattice_intersection(&prev, l)?,
        });
    }
    Ok(acc)
}
