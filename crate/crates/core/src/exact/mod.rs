//! Exact rational scalars, matrices and lattices.

pub mod lattice;
pub mod matrix;
pub mod normal_form;
pub mod rational;

pub use lattice::{dual_lattice, hnf, lattice_intersect, lattice_sum, membership, quotient_exponent, ZLattice};
pub use matrix::QMatrix;
pub use rational::{format_rational, int, parse_rational, rat, Rational};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("sublattice is not contained in the lattice")]
    NotContained,
    #[error("quotient is infinite (rank {rank} over rank {sub_rank})")]
    InfiniteQuotient { rank: usize, sub_rank: usize },
    #[error("bilinear form is degenerate on the span")]
    DegenerateForm,
    #[error("bilinear form is not symmetric")]
    NotSymmetric,
}
