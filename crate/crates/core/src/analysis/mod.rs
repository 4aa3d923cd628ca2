//! Tools for auditing RLCE keys and parameters.
//!
//! * [`square`]: star products and the square-code dimension distinguisher.
//! * [`experiment`]: the puncture-and-square experiment over many keys.
//! * [`equivalence`]: constructive block equivalences between generator
//!   matrices, which bound how large `r` may be.
//! * [`isd`]: information-set decoding work factors.

pub mod equivalence;
pub mod experiment;
pub mod isd;
pub mod square;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::rlce::RlceError;

pub use equivalence::{
    construct_equivalent, randomized_column_theorem_check, realize_column_block, BlockEquivalence,
    ColumnRealization,
};
pub use experiment::{distinguisher_experiment, ExperimentConfig, ExperimentReport, KeySource, PunctureRecord};
pub use isd::{isd_workfactor, log2_binomial, IsdAlgorithm, IsdEstimate};
pub use square::{puncture, square_code_dimension, star_product, Classification, SquareCodeReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("column {index} out of range for {len} columns")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no block equivalence: r + 1 = {block} is smaller than k = {k}")]
    Infeasible { block: usize, k: usize },
    #[error("input violates the construction hypothesis: {0}")]
    HypothesisViolated(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Rlce(#[from] RlceError),
}
