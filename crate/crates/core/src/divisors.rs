//! Class group generators, Picard lattices and Cartier bases.
//!
//! Divisor coordinates are taken in the basis `D_1 … D_{n+r}` of torus-invariant
//! Weil divisors; the free part `F ≅ Z^r` of the class group is written in the
//! basis `L_1 … L_r` given by the upper rows of the switching matrix `U_Q`.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::covering::{covering_decomposition, torsion_generators};
use crate::error::{Error, Result};
use crate::fans::PicardIndexFamily;
use crate::gale::{gale_dual, require_w};
use crate::lattice::{intersect_all, Lattice};
use crate::matrix::{IntMatrix, Integer};
use crate::normal_forms::hnf;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroupData {
    pub rank: usize,
    pub torsion: Vec<Integer>,
    /// Rows `L_i`, with `Q·L_iᵀ = e_i`.
    pub free_generators: IntMatrix,
    /// Rows `T_k` generating the torsion subgroup.
    pub torsion_generator_rows: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardData {
    /// Canonical (HNF) basis of `Pic(X)` in the `L_i` coordinates.
    pub b: IntMatrix,
    /// `[F : Pic(X)] = |det B|`
    pub index: Integer,
    /// Least common multiple of `|det Q_I|` over the index family.
    pub delta_sigma: Integer,
}

/// A unimodular `U_Q` with `U_Q·Qᵀ = [I_r; 0]`.
///
/// When `covering` is given, the lower `n` rows are replaced by it; it must
/// span the same lattice as the Gale dual of `Q`.
pub fn weight_switching_matrix(q: &IntMatrix, covering: Option<&IntMatrix>) -> Result<IntMatrix> {
    require_w(q)?;
    let r = q.rows();
    let m = q.cols();
    let h = hnf(&q.transpose());
    let expected = IntMatrix::identity(r).vstack(&IntMatrix::zeros(m - r, r))?;
    if h.h != expected {
        return Err(Error::Inconsistent(
            "the rows of Q do not span a saturated lattice".into(),
        ));
    }
    let Some(v_hat) = covering else {
        return Ok(h.u);
    };
    if v_hat.shape() != (m - r, m) {
        return Err(Error::Shape(format!(
            "covering matrix must be {}x{m}, got {}x{}",
            m - r,
            v_hat.rows(),
            v_hat.cols()
        )));
    }
    let lower = h.u.bottom_rows(m - r);
    if Lattice::from_rows(&lower) != Lattice::from_rows(v_hat) {
        return Err(Error::Inconsistent(
            "covering matrix does not span the Gale dual lattice of Q".into(),
        ));
    }
    h.u.top_rows(r).vstack(v_hat)
}

/// Generators `L_1 … L_r` of the free part: the upper rows of `U_Q`.
pub fn free_part_generators(q: &IntMatrix) -> Result<IntMatrix> {
    Ok(weight_switching_matrix(q, None)?.top_rows(q.rows()))
}

/// Free and torsion generators of the class group of the variety with fan
/// matrix `v`.
pub fn class_group(v: &IntMatrix) -> Result<ClassGroupData> {
    let cd = covering_decomposition(v)?;
    let q = gale_dual(v)?;
    Ok(ClassGroupData {
        rank: q.rows(),
        free_generators: free_part_generators(&q)?,
        torsion_generator_rows: torsion_generators(&cd),
        torsion: cd.torsion_invariants,
    })
}

/// `Pic(X) = ∩_I L_c(Q_I)` inside `F ≅ Z^r`.
pub fn picard_basis(q: &IntMatrix, family: &PicardIndexFamily) -> Result<PicardData> {
    let r = q.rows();
    let mut lattices = Vec::with_capacity(family.sets.len());
    let mut delta_sigma = Integer::one();
    for set in &family.sets {
        if set.len() != r {
            return Err(Error::Shape(format!(
                "index set {set:?} should have {r} elements"
            )));
        }
        if let Some(&j) = set.iter().find(|&&j| j >= q.cols()) {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: q.cols(),
            });
        }
        let q_i = q.select_columns(set);
        let det = q_i.det()?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        delta_sigma = delta_sigma.lcm(&det.abs());
        lattices.push(Lattice::from_columns(&q_i));
    }
    let pic = intersect_all(&lattices)?
        .ok_or_else(|| Error::InvalidFan("empty index family".into()))?;
    let b = pic.into_basis();
    let index = b.det()?.abs();
    Ok(PicardData {
        b,
        index,
        delta_sigma,
    })
}

/// `C_X = diag(B, β)·U_Q`, whose rows span the Cartier divisors.
pub fn cartier_basis(b: &IntMatrix, u_q: &IntMatrix, beta: &IntMatrix) -> Result<IntMatrix> {
    check_blocks(b.rows(), u_q, beta)?;
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    u_q.rows().checked_sub(beta.rows()).filter(|&r| r == b.rows()).ok_or_else(|| {
        Error::Shape("B, β and U_Q sizes are incompatible".into())
    })?;
    IntMatrix::block_diag(b, beta).checked_mul(u_q)
}

fn check_blocks(r: usize, u_q: &IntMatrix, beta: &IntMatrix) -> Result<()> {
    for a in [u_q, beta] {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
    }
    if u_q.rows() != r + beta.rows() {
        return Err(Error::Shape(format!(
            "U_Q is {0}x{0} but the blocks have sizes {r} and {1}",
            u_q.rows(),
            beta.rows()
        )));
    }
    Ok(())
}

/// `A = U_Qᵀ·diag(I_r, βᵀ)·(U_Qᵀ)⁻¹`, mapping `C_Yᵀ` to `C_Xᵀ`.
pub fn weil_inclusion(u_q: &IntMatrix, beta: &IntMatrix) -> Result<IntMatrix> {
    let r = u_q
        .rows()
        .checked_sub(beta.rows())
        .ok_or_else(|| Error::Shape("β is larger than U_Q".into()))?;
    check_blocks(r, u_q, beta)?;
    let u_t = u_q.transpose();
    let inv = u_t.inverse_unimodular()?;
    let middle = IntMatrix::block_diag(&IntMatrix::identity(r), &beta.transpose());
    Ok(&(&u_t * &middle) * &inv)
}

/// Whether `index` is divisible by `delta_sigma` and divides `cartier_index`.
pub fn divisibility_chain(p: &PicardData, cartier_index: &Integer) -> bool {
    !p.delta_sigma.is_zero()
        && p.index.is_multiple_of(&p.delta_sigma)
        && !p.index.is_zero()
        && cartier_index.is_multiple_of(&p.index)
}
