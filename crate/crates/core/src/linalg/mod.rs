//! Linear algebra in signature `(d, d)`.

mod curve;
mod matrix;
mod mink;
mod ql;
mod solve;
mod split;

use thiserror::Error;

pub use curve::{chebyshev_curve_point, moment_curve_point, AnchorScheme};
pub use matrix::{dot, norm_sq, Matrix};
pub use mink::{mink_inner, squared_length, MinkVector};
pub use ql::{ql_decompose, QLResult};
pub use solve::{affine_rank, affinely_independent, rank, solve_pairing_system};
pub use split::{lorentz_defect, IsotropicSplit};
pub(crate) use solve::{exact_min_norm_solve, exact_rank, gram_schmidt_solve, modular_rank, pivot_rank, residues};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Minkowski vectors need a positive even number of coordinates, got {0}")]
    OddLength(usize),
    #[error("linear system is rank deficient: row {row} depends on earlier rows")]
    RankDeficient { row: usize },
    #[error("{rows} equations exceed the {d} unknowns")]
    Overdetermined { rows: usize, d: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty point set")]
    EmptyPointSet,
}

pub fn standard_split<S: Scalar>(d: usize) -> IsotropicSplit<S> {
    IsotropicSplit::standard(d)
}

pub fn project_delta<S: Scalar>(
    split: &IsotropicSplit<S>,
    v: &MinkVector<S>,
) -> Result<MinkVector<S>, LinalgError> {
    split.project_delta(v)
}

pub fn project_sigma<S: Scalar>(
    split: &IsotropicSplit<S>,
    v: &MinkVector<S>,
) -> Result<MinkVector<S>, LinalgError> {
    split.project_sigma(v)
}

pub fn delta_point<S: Scalar>(
    split: &IsotropicSplit<S>,
    w: &[S],
) -> Result<MinkVector<S>, LinalgError> {
    split.delta_point(w)
}
