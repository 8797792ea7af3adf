//! Universal 1-coverings, the factor `β` with `V = β·V̂`, its Smith
//! alignment, torsion generators and the torsion matrix `Γ`.

use num_integer::Integer as _;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gale::{classify_f, gale_dual, require_reduced_f};
use crate::lattice::Lattice;
use crate::matrix::{IntMatrix, Integer};
use crate::normal_forms::{hnf, snf};

/// Output of [`covering_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringData {
    pub v: IntMatrix,
    pub v_hat: IntMatrix,
    pub beta: IntMatrix,
    pub delta: IntMatrix,
    pub mu: IntMatrix,
    pub nu: IntMatrix,
    /// `μ·V`
    pub v_aligned: IntMatrix,
    /// `ν⁻¹·V̂`
    pub v_hat_aligned: IntMatrix,
    pub torsion_invariants: Vec<Integer>,
}

impl CoveringData {
    pub fn n(&self) -> usize {
        self.v.rows()
    }

    pub fn s(&self) -> usize {
        self.torsion_invariants.len()
    }

    /// Order of the torsion subgroup of the class group.
    pub fn torsion_order(&self) -> Integer {
        self.torsion_invariants.iter().product()
    }
}

/// Rows of residues, row `k` taken modulo `moduli[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionMatrix {
    moduli: Vec<Integer>,
    entries: IntMatrix,
}

impl TorsionMatrix {
    /// Reduces `entries` row-wise; moduli must satisfy `1 < τ₁ | τ₂ | …`.
    pub fn new(moduli: Vec<Integer>, entries: IntMatrix) -> Result<Self> {
        if moduli.iter().any(|t| t <= &Integer::one()) {
            return Err(Error::InvalidTorsion("moduli must exceed 1".into()));
        }
        if moduli.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::InvalidTorsion(
                "moduli must form a divisibility chain".into(),
            ));
        }
        let entries = entries.reduce_rows_mod(&moduli)?;
        Ok(TorsionMatrix { moduli, entries })
    }

    /// The empty torsion matrix on `width` columns.
    pub fn empty(width: usize) -> Self {
        TorsionMatrix {
            moduli: Vec::new(),
            entries: IntMatrix::zeros(0, width),
        }
    }

    pub fn moduli(&self) -> &[Integer] {
        &self.moduli
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    pub fn width(&self) -> usize {
        self.entries.cols()
    }

    /// `Γ·Mᵀ` with row `k` reduced modulo `τ_k`.
    pub fn pair_mod(&self, m: &IntMatrix) -> Result<IntMatrix> {
        self.entries
            .checked_mul(&m.transpose())?
            .reduce_rows_mod(&self.moduli)
    }

    /// Whether `Γ·Mᵀ ≡ 0`.
    pub fn annihilates(&self, m: &IntMatrix) -> Result<bool> {
        Ok(self.pair_mod(m)?.is_zero())
    }

    /// Whether `Γ·Mᵀ ≡ I` for an `s x width` matrix `M`.
    pub fn is_dual_to(&self, m: &IntMatrix) -> Result<bool> {
        Ok(self.pair_mod(m)? == IntMatrix::identity(self.moduli.len()))
    }
}

/// The canonical universal 1-covering fan matrix `V̂` of a reduced F-matrix,
/// spanning the saturation of the row lattice of `V`.
///
/// Among all representatives the one returned makes `β` lower triangular in
/// column Hermite form.
pub fn universal_covering(v: &IntMatrix) -> Result<IntMatrix> {
    require_reduced_f(v)?;
    Ok(aligned_covering(v)?.0)
}

/// `(V̂, β)` with `β` in column Hermite form.
fn aligned_covering(v: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let v_hat0 = gale_dual(&gale_dual(v)?)?;
    let beta0 = beta_factor(v, &v_hat0)?;
    let col = hnf(&beta0.transpose());
    let g = col.u.transpose().inverse_unimodular()?;
    Ok((&g * &v_hat0, col.h.transpose()))
}

/// The unique `β` with `β·V̂ = V`, obtained from the Hermite forms of both
/// matrices.
pub fn beta_factor(v: &IntMatrix, v_hat: &IntMatrix) -> Result<IntMatrix> {
    if v.shape() != v_hat.shape() {
        return Err(Error::Shape(format!(
            "V is {}x{} but V̂ is {}x{}",
            v.rows(),
            v.cols(),
            v_hat.rows(),
            v_hat.cols()
        )));
    }
    let n = v.rows();
    let hv = hnf(v);
    let hw = hnf(v_hat);
    for r in [&hv, &hw] {
        if r.rank < n {
            return Err(Error::RankDeficient { rank: r.rank, rows: n });
        }
    }
    if hv.pivots != hw.pivots {
        return Err(Error::NoIntegralSolution(
            "row spaces of V and V̂ differ".into(),
        ));
    }
    // β_H·Ĥ = H on the pivot columns is a triangular system
    let mut beta_h = IntMatrix::zeros(n, n);
    for i in 0..n {
        for (j, &pj) in hw.pivots.iter().enumerate() {
            let mut rest = hv.h[(i, pj)].clone();
            for k in 0..j {
                rest -= &beta_h[(i, k)] * &hw.h[(k, pj)];
            }
            let (q, rem) = rest.div_rem(&hw.h[(j, pj)]);
            if !rem.is_zero() {
                return Err(Error::NoIntegralSolution(
                    "row lattice of V is not contained in that of V̂".into(),
                ));
            }
            beta_h[(i, j)] = q;
        }
    }
    if &beta_h * &hw.h != hv.h {
        return Err(Error::NoIntegralSolution(
            "row lattice of V is not contained in that of V̂".into(),
        ));
    }
    let beta = &(&hv.u.inverse_unimodular()? * &beta_h) * &hw.u;
    debug_assert_eq!(&beta * v_hat, *v);
    Ok(beta)
}

/// Smith alignment of `V = β·V̂` for the canonical covering.
pub fn covering_decomposition(v: &IntMatrix) -> Result<CoveringData> {
    require_reduced_f(v)?;
    let (v_hat, beta) = aligned_covering(v)?;
    decompose(v, v_hat, beta)
}

/// Smith alignment of `V = β·V̂` for a caller-chosen CF-matrix `V̂`.
pub fn covering_decomposition_with(v: &IntMatrix, v_hat: &IntMatrix) -> Result<CoveringData> {
    require_reduced_f(v)?;
    let report = classify_f(v_hat)?;
    if !report.is_cf {
        return Err(Error::Inconsistent(
            "the covering matrix must be a CF-matrix".into(),
        ));
    }
    let beta = beta_factor(v, v_hat)?;
    decompose(v, v_hat.clone(), beta)
}

fn decompose(v: &IntMatrix, v_hat: IntMatrix, beta: IntMatrix) -> Result<CoveringData> {
    let s = snf(&beta);
    let v_aligned = &s.left * v;
    let v_hat_aligned = &s.right.inverse_unimodular()? * &v_hat;
    let torsion_invariants = s
        .invariants()
        .into_iter()
        .filter(|c| c > &Integer::one())
        .collect();
    Ok(CoveringData {
        v: v.clone(),
        v_hat,
        beta,
        delta: s.d,
        mu: s.left,
        nu: s.right,
        v_aligned,
        v_hat_aligned,
        torsion_invariants,
    })
}

/// Rows `T_k` generating the torsion subgroup: the lower `s` rows of `V̂′`.
pub fn torsion_generators(cd: &CoveringData) -> IntMatrix {
    cd.v_hat_aligned.bottom_rows(cd.s())
}

/// The torsion matrix `Γ = ^sU_G·_{r+s}W mod τ`.
pub fn torsion_matrix(cd: &CoveringData) -> Result<TorsionMatrix> {
    let n = cd.n();
    let s = cd.s();
    let width = cd.v.cols();
    if s == 0 {
        return Ok(TorsionMatrix::empty(width));
    }
    let top = cd.v_aligned.top_rows(n - s);
    let w = hnf(&top.transpose());
    let w_low = w.u.bottom_rows(width - (n - s));
    let gens = torsion_generators(cd);
    let g = &gens * &w_low.transpose();
    let ug = hnf(&g.transpose());
    let expected = IntMatrix::identity(s).vstack(&IntMatrix::zeros(g.cols() - s, s))?;
    if ug.h != expected {
        return Err(Error::Inconsistent(
            "torsion pairing is not surjective".into(),
        ));
    }
    let gamma = TorsionMatrix::new(
        cd.torsion_invariants.clone(),
        &ug.u.top_rows(s) * &w_low,
    )?;
    debug_assert!(gamma.annihilates(&cd.v_aligned)?);
    debug_assert!(gamma.is_dual_to(&gens)?);
    Ok(gamma)
}

/// Whether `η` and `β·η⁻¹` are both integral and nonsingular.
pub fn is_divisor_of_beta(eta: &IntMatrix, beta: &IntMatrix) -> Result<bool> {
    for a in [eta, beta] {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
    }
    if eta.shape() != beta.shape() {
        return Err(Error::Shape("η and β differ in size".into()));
    }
    if eta.det()?.is_zero() || beta.det()?.is_zero() {
        return Err(Error::Singular);
    }
    // β = X·η with X integral iff every row of β lies in L_r(η)
    let lattice = Lattice::from_rows(eta);
    Ok(beta.row_iter().all(|r| lattice.contains(r)))
}
