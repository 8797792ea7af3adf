//! Exact integer linear algebra for Q-factorial complete toric varieties.
//!
//! Starting from a fan matrix `V` this crate computes the weight matrix
//! `Q = G(V)`, the universal 1-covering fan matrix `V̂ = G(G(V))`, the factor
//! `β` with `V = β·V̂`, the torsion subgroup of the class group together with
//! generators and a torsion matrix `Γ`, Picard and Cartier bases for every
//! simplicial fan over `V`, and conversely rebuilds a fan matrix from the
//! quotient data `(Q, Γ)`.
//!
//! All arithmetic is exact ([`num_bigint::BigInt`]). Matrices multiply on the
//! left (`U·A = HNF(A)`) and lattices are compared through canonical
//! row-HNF bases.

pub mod covering;
pub mod divisors;
pub mod error;
pub mod fans;
pub mod gale;
pub mod lattice;
pub mod matrix;
pub mod normal_forms;
pub mod reconstruction;

pub use covering::{
    beta_factor, covering_decomposition, covering_decomposition_with, is_divisor_of_beta,
    torsion_generators, torsion_matrix, universal_covering, CoveringData, TorsionMatrix,
};
pub use divisors::{
    cartier_basis, class_group, free_part_generators, picard_basis, weight_switching_matrix,
    weil_inclusion, ClassGroupData, PicardData,
};
pub use error::{Error, FCondition, Result, WCondition};
pub use fans::{enumerate_fans, picard_index_sets, validate_fan, Fan, FanCheck, PicardIndexFamily};
pub use gale::{classify_f, classify_w, gale_dual, reduce_f, FMatrixReport, WMatrixReport};
pub use lattice::{kernel_saturation, lattice_intersection, Lattice};
pub use matrix::{IntMatrix, Integer};
pub use normal_forms::{hnf, snf, HnfResult, SnfResult};
pub use reconstruction::{
    fan_matrix_equivalence, reconstruct_beta, reconstruct_fan_matrix, EquivalenceSearch,
    EquivalenceWitness, QuotientPresentation,
};
