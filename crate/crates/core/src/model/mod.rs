//! Exact data model: grids, marginals, costs, capacities and plans.

mod capacity;
mod cost;
mod grid;
mod marginal;
mod matrix;
mod plan;
mod problem;
mod rational;
mod saturation;

pub use capacity::CapacityMatrix;
pub use cost::{CostKind, CostMatrix};
pub use grid::{Domain, Grid};
pub use marginal::DiscreteMarginal;
pub use matrix::Matrix;
pub use plan::{FeasibilityReport, TransportPlan};
pub use problem::Problem;
pub use rational::{format_rational, lcm_of_denominators, parse_rational, ratio, Rational};
pub use saturation::{CellState, SaturationPattern};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unsupported grid dimension {0} (only 1 and 2 are supported)")]
    UnsupportedDimension(usize),
    #[error("a grid needs at least one cell per axis")]
    EmptyGrid,
    #[error("grid dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("capacity density must be nonnegative, got {0}")]
    NegativeDensity(Rational),
    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: Rational },
    #[error("total mass is zero")]
    ZeroMass,
    #[error("malformed rational literal {0:?}")]
    BadRational(String),
}
