use std::fmt;

use thiserror::Error;

/// Labels for the fan-matrix conditions checked by [`crate::gale::classify_f`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FCondition {
    /// full row rank
    A,
    /// the columns positively span the whole space
    B,
    /// no zero column
    C,
    /// no pair of positively proportional columns
    D,
    /// the column lattice is the whole of `Z^n`
    E,
}

/// Labels for the weight-matrix conditions checked by [`crate::gale::classify_w`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WCondition {
    /// full row rank
    A,
    /// the row lattice is saturated
    B,
    /// the row lattice admits a basis of non-negative vectors
    C,
    /// no zero column
    D,
    /// no unit vector in the row lattice
    E,
    /// no vector with exactly two nonzero entries of opposite sign in the row lattice
    F,
}

impl FCondition {
    pub fn label(self) -> &'static str {
        match self {
            FCondition::A => "a",
            FCondition::B => "b",
            FCondition::C => "c",
            FCondition::D => "d",
            FCondition::E => "e",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            FCondition::A => "rank is not maximal",
            FCondition::B => "columns do not positively span the ambient space",
            FCondition::C => "a column is zero",
            FCondition::D => "two columns are positively proportional",
            FCondition::E => "column lattice has cotorsion",
        }
    }
}

impl WCondition {
    pub fn label(self) -> &'static str {
        match self {
            WCondition::A => "a",
            WCondition::B => "b",
            WCondition::C => "c",
            WCondition::D => "d",
            WCondition::E => "e",
            WCondition::F => "f",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            WCondition::A => "rank is not maximal",
            WCondition::B => "row lattice has cotorsion",
            WCondition::C => "row lattice has no non-negative basis",
            WCondition::D => "a column is zero",
            WCondition::E => "row lattice contains a unit vector",
            WCondition::F => "row lattice contains a two-term vector with entries of opposite sign",
        }
    }
}

impl fmt::Display for FCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.label(), self.description())
    }
}

impl fmt::Display for WCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.label(), self.description())
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed matrix: {0}")]
    Malformed(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix does not have full row rank (rank {rank}, {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("not an F-matrix: {}", join(.0))]
    NotFMatrix(Vec<FCondition>),

    #[error("F-matrix is not reduced: column {0} has non-coprime entries")]
    NotReduced(usize),

    #[error("not a W-matrix: {}", join(.0))]
    NotWMatrix(Vec<WCondition>),

    #[error("column {0} is zero")]
    ZeroColumn(usize),

    #[error("no integral solution: {0}")]
    NoIntegralSolution(String),

    #[error("index {index} out of range (must be below {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("invalid torsion data: {0}")]
    InvalidTorsion(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("permutation search exceeded the limit of {0} candidates")]
    SearchLimit(u64),
}

impl Error {
    /// True when the error reports a violated mathematical precondition rather
    /// than badly shaped input.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::Malformed(_)
                | Error::Shape(_)
                | Error::NotSquare { .. }
                | Error::IndexOutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
