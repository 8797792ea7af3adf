//! Fan matrices from quotient data `(Q, Γ)` and fan-matrix equivalence.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::covering::TorsionMatrix;
use crate::error::{Error, Result};
use crate::fans::Fan;
use crate::gale::{gale_dual, require_w};
use crate::lattice::Lattice;
use crate::matrix::IntMatrix;
use crate::normal_forms::hnf;

/// A weight matrix together with a torsion matrix acting on the same
/// `n + r` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPresentation {
    q: IntMatrix,
    gamma: TorsionMatrix,
    covering: Option<IntMatrix>,
}

impl QuotientPresentation {
    pub fn new(q: IntMatrix, gamma: TorsionMatrix) -> Result<Self> {
        require_w(&q)?;
        if gamma.width() != q.cols() {
            return Err(Error::Shape(format!(
                "torsion matrix has {} columns, expected {}",
                gamma.width(),
                q.cols()
            )));
        }
        Ok(QuotientPresentation {
            q,
            gamma,
            covering: None,
        })
    }

    /// Fixes the representative of `G(Q)` used in the construction.
    pub fn with_covering(mut self, v_hat: IntMatrix) -> Result<Self> {
        let dual = gale_dual(&self.q)?;
        if v_hat.shape() != dual.shape() {
            return Err(Error::Shape(format!(
                "covering matrix must be {}x{}",
                dual.rows(),
                dual.cols()
            )));
        }
        if Lattice::from_rows(&v_hat) != Lattice::from_rows(&dual) {
            return Err(Error::Inconsistent(
                "covering matrix does not span the Gale dual lattice of Q".into(),
            ));
        }
        self.covering = Some(v_hat);
        Ok(self)
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    pub fn gamma(&self) -> &TorsionMatrix {
        &self.gamma
    }

    /// The chosen `V̂`, or the canonical Gale dual of `Q`.
    pub fn v_hat(&self) -> Result<IntMatrix> {
        match &self.covering {
            Some(v) => Ok(v.clone()),
            None => gale_dual(&self.q),
        }
    }

    /// `K = [V̂·Cᵀ ; diag(τ)]` for the reduced representatives `C` of `Γ`.
    pub fn relation_matrix(&self) -> Result<IntMatrix> {
        let v_hat = self.v_hat()?;
        let top = &v_hat * &self.gamma.entries().transpose();
        top.vstack(&IntMatrix::diagonal(self.gamma.moduli().iter().cloned()))
    }
}

/// `β` with `β·V̂·Γᵀ ≡ 0`, read from the HNF transform of `K`.
pub fn reconstruct_beta(p: &QuotientPresentation) -> Result<IntMatrix> {
    let n = p.q.cols() - p.q.rows();
    let s = p.gamma.moduli().len();
    if s == 0 {
        return Ok(IntMatrix::identity(n));
    }
    let k = p.relation_matrix()?;
    let u = hnf(&k).u;
    let cols: Vec<usize> = (0..n).collect();
    let beta = u.bottom_rows(n).select_columns(&cols);
    if beta.det()?.is_zero() {
        return Err(Error::Singular);
    }
    Ok(beta)
}

/// `V = β·V̂`, checked against `V·Qᵀ = 0` and `V·Γᵀ ≡ 0`.
pub fn reconstruct_fan_matrix(p: &QuotientPresentation) -> Result<IntMatrix> {
    let beta = reconstruct_beta(p)?;
    let v = &beta * &p.v_hat()?;
    if !(&v * &p.q.transpose()).is_zero() || !p.gamma.annihilates(&v)? {
        return Err(Error::Inconsistent(
            "reconstructed matrix violates the defining relations".into(),
        ));
    }
    Ok(v)
}

/// `R` unimodular and a column permutation with `R·V1·S = V2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub r: IntMatrix,
    /// Column `j` of `V1·S` is column `permutation[j]` of `V1`.
    pub permutation: Vec<usize>,
}

impl EquivalenceWitness {
    /// The permutation matrix `S`.
    pub fn to_matrix(&self) -> IntMatrix {
        let m = self.permutation.len();
        let mut s = IntMatrix::zeros(m, m);
        for (j, &i) in self.permutation.iter().enumerate() {
            s[(i, j)] = 1.into();
        }
        s
    }

    pub fn verify(&self, v1: &IntMatrix, v2: &IntMatrix) -> bool {
        self.r.is_unimodular()
            && self.permutation.len() == v1.cols()
            && v1.cols() == v2.cols()
            && &self.r * &v1.select_columns(&self.permutation) == *v2
    }

    /// Whether the permutation carries the cones of `f1` onto those of `f2`.
    pub fn relates_fans(&self, f1: &Fan, f2: &Fan) -> bool {
        let m = self.permutation.len();
        if f1.ray_count() != m || f2.ray_count() != m {
            return false;
        }
        let mut position = vec![0; m];
        for (j, &i) in self.permutation.iter().enumerate() {
            position[i] = j;
        }
        let mapped: BTreeSet<Vec<usize>> = f1
            .cones()
            .iter()
            .map(|c| {
                let mut d: Vec<usize> = c.iter().map(|&i| position[i]).collect();
                d.sort_unstable();
                d
            })
            .collect();
        let target: BTreeSet<Vec<usize>> = f2.cones().iter().cloned().collect();
        mapped == target
    }
}

/// Permutation search for [`fan_matrix_equivalence`], optionally capped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceSearch {
    /// Maximum number of partial permutations examined.
    pub max_candidates: Option<u64>,
}

impl EquivalenceSearch {
    pub fn with_limit(max_candidates: u64) -> Self {
        EquivalenceSearch {
            max_candidates: Some(max_candidates),
        }
    }

    /// The first witness in lexicographic permutation order, if any.
    pub fn run(&self, v1: &IntMatrix, v2: &IntMatrix) -> Result<Option<EquivalenceWitness>> {
        if v1.shape() != v2.shape() {
            return Err(Error::Shape(format!(
                "{}x{} and {}x{} matrices",
                v1.rows(),
                v1.cols(),
                v2.rows(),
                v2.cols()
            )));
        }
        let mut g1: Vec<_> = v1.column_gcds().into_iter().map(|g| g.abs()).collect();
        let mut g2: Vec<_> = v2.column_gcds().into_iter().map(|g| g.abs()).collect();
        g1.sort();
        g2.sort();
        if g1 != g2 {
            return Ok(None);
        }
        let target_prefixes: Vec<IntMatrix> = (0..=v2.cols())
            .map(|k| hnf(&v2.select_columns(&(0..k).collect::<Vec<_>>())).h)
            .collect();
        let mut state = PermState {
            v1,
            targets: &target_prefixes,
            used: vec![false; v1.cols()],
            prefix: Vec::with_capacity(v1.cols()),
            visited: 0,
            limit: self.max_candidates,
        };
        if !state.descend()? {
            return Ok(None);
        }
        let u1 = hnf(&v1.select_columns(&state.prefix)).u;
        let u2 = hnf(v2).u;
        let r = &u2.inverse_unimodular()? * &u1;
        let witness = EquivalenceWitness {
            r,
            permutation: state.prefix,
        };
        debug_assert!(witness.verify(v1, v2));
        Ok(Some(witness))
    }
}

struct PermState<'a> {
    v1: &'a IntMatrix,
    targets: &'a [IntMatrix],
    used: Vec<bool>,
    prefix: Vec<usize>,
    visited: u64,
    limit: Option<u64>,
}

impl PermState<'_> {
    fn descend(&mut self) -> Result<bool> {
        let k = self.prefix.len();
        if k == self.v1.cols() {
            return Ok(true);
        }
        for i in 0..self.v1.cols() {
            if self.used[i] {
                continue;
            }
            self.visited += 1;
            if let Some(limit) = self.limit {
                if self.visited > limit {
                    return Err(Error::SearchLimit(limit));
                }
            }
            self.prefix.push(i);
            // R·V1·S = V2 forces equal HNFs on every column prefix
            if hnf(&self.v1.select_columns(&self.prefix)).h == self.targets[k + 1] {
                self.used[i] = true;
                if self.descend()? {
                    return Ok(true);
                }
                self.used[i] = false;
            }
            self.prefix.pop();
        }
        Ok(false)
    }
}

/// Decides whether `R·V1·S = V2` for some unimodular `R` and permutation `S`.
pub fn fan_matrix_equivalence(v1: &IntMatrix, v2: &IntMatrix) -> Result<Option<EquivalenceWitness>> {
    EquivalenceSearch::default().run(v1, v2)
}
