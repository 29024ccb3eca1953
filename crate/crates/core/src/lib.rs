//! Exact discrete optimal transport under capacity constraints.
//!
//! The crate is organised in four layers:
//!
//! * [`model`]: grids, marginals, cost and capacity matrices, transport plans,
//!   feasibility and saturation classification, all in exact rational arithmetic.
//! * [`solver`]: a bounded-variable transportation simplex that returns an
//!   optimal vertex, plus an independent cycle-cancelling oracle for small
//!   instances.
//! * [`structure`]: marginal-preserving exchanges, the Hölder-conjugate
//!   complement/reflection map, cost identities and closed-form reference plans.
//! * [`runner`]: JSON experiment configs, capacity sweeps with audits, and the
//!   CSV / PGM / JSON writers used by the `capot` binary.

pub mod model;
pub mod runner;
pub mod solver;
pub mod structure;

pub use model::{
    ratio, CapacityMatrix, CellState, CostKind, CostMatrix, DiscreteMarginal, Domain,
    FeasibilityReport, Grid, Matrix, ModelError, Problem, Rational, SaturationPattern,
    TransportPlan,
};
pub use solver::{
    brute_force_solve, feasibility_exists, solve, solve_with, Arithmetic, PivotRule, SolveError,
    SolveOptions, SolveResult, SolverTag,
};
