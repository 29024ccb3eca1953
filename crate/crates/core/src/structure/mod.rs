//! Discrete forms of the structural results: marginal-preserving exchanges,
//! the Hölder-conjugate complement/reflection map, cost identities, and the
//! closed-form optimisers on balanced grids.

mod conjugate;
mod exchange;
mod identities;
mod reference;
mod symmetry;

use thiserror::Error;

use crate::model::{CostKind, ModelError, Rational};
use crate::solver::SolveError;

pub use conjugate::{conjugate_problem, conjugate_transform, ConjugatePair};
pub use exchange::{
    apply_exchange, scan_exchanges, scan_exchanges_with, ExchangeQuad, ExchangeScan, ScanMode,
    EXHAUSTIVE_SCAN_MAX_CELLS, SAMPLED_SCAN_QUADS,
};
pub use identities::{center_of_mass, cost_complement_identity, ComplementIdentity};
pub use reference::{reference_checkerboard, reference_sign_plan};
pub use symmetry::{verify_symmetric_optimality, SymmetryReport, SymmetryTransform};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("exchange amount {amount} exceeds the admissible {admissible}")]
    InfeasibleAmount {
        amount: Box<Rational>,
        admissible: Box<Rational>,
    },
    #[error("exchange quadruple needs i != i' and j != j'")]
    DegenerateQuad,
    #[error("exchange amount must be nonnegative")]
    NegativeAmount,
    #[error("{0} needs centered grids")]
    NotCentered(&'static str),
    #[error("{0} needs uniform marginals")]
    NotUniform(&'static str),
    #[error("{op} needs a {expected} cost, got {found}")]
    WrongCost {
        op: &'static str,
        expected: CostKind,
        found: CostKind,
    },
    #[error("capacity is not the constant density {expected}")]
    DensityMismatch { expected: Rational },
    #[error("input plan is not feasible")]
    InfeasibleInput,
    #[error("{0} cells per axis is odd: a midpoint sits on a coordinate hyperplane")]
    OddGrid(usize),
    #[error("Hölder exponent must exceed 1, got {0}")]
    ExponentTooSmall(Rational),
    #[error("1/{p} + 1/{q} != 1")]
    NotConjugate { p: Box<Rational>, q: Box<Rational> },
    #[error("zero total mass has no center")]
    ZeroMass,
    #[error("transform not applicable: {0}")]
    Inapplicable(String),
    #[error("sign plan cannot meet the marginals: {0}")]
    SignPlanObstructed(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
