use num_traits::One;

use super::StructureError;
use crate::model::{CapacityMatrix, CostKind, Domain, Problem, Rational, TransportPlan};

/// Exponents `p, q > 1` with `1/p + 1/q = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjugatePair {
    p: Rational,
    q: Rational,
}

impl ConjugatePair {
    /// Pairs `p` with `q = p / (p - 1)`.
    pub fn new(p: Rational) -> Result<Self, StructureError> {
        let one = Rational::one();
        if p <= one {
            return Err(StructureError::ExponentTooSmall(p));
        }
        let q = &p / (&p - &one);
        Ok(Self { p, q })
    }

    pub fn from_pair(p: Rational, q: Rational) -> Result<Self, StructureError> {
        let one = Rational::one();
        if p <= one {
            return Err(StructureError::ExponentTooSmall(p));
        }
        if q <= one {
            return Err(StructureError::ExponentTooSmall(q));
        }
        if p.recip() + q.recip() != one {
            return Err(StructureError::NotConjugate {
                p: Box::new(p),
                q: Box::new(q),
            });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// `q / p`, the factor relating the two optimal values.
    pub fn value_ratio(&self) -> Rational {
        &self.q / &self.p
    }

    /// The same pair seen from the other side.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }
}

fn check_conjugate_setting(problem: &Problem, pair: &ConjugatePair) -> Result<(), StructureError> {
    const OP: &str = "conjugate transform";
    if problem.grid_x().domain() != Domain::Centered
        || problem.grid_y().domain() != Domain::Centered
    {
        return Err(StructureError::NotCentered(OP));
    }
    let uniform = |m: &crate::model::DiscreteMarginal| {
        let first = &m.mass()[0];
        *m.total() == Rational::one() && m.mass().iter().all(|x| x == first)
    };
    if !uniform(&problem.f) || !uniform(&problem.g) {
        return Err(StructureError::NotUniform(OP));
    }
    if problem.capacity.density() != Some(pair.p()) {
        return Err(StructureError::DensityMismatch {
            expected: pair.p().clone(),
        });
    }
    Ok(())
}

/// The density-`q` counterpart of a density-`p` problem: same grids,
/// marginals and cost.
pub fn conjugate_problem(
    problem: &Problem,
    pair: &ConjugatePair,
) -> Result<Problem, StructureError> {
    check_conjugate_setting(problem, pair)?;
    let capacity = CapacityMatrix::constant(problem.grid_x(), problem.grid_y(), pair.q().clone())?;
    Ok(problem.with_capacity(capacity)?)
}

/// Complement of `plan` in the density-`p` box, reflected in `y` and scaled
/// by `q/p`: `k[i][j] = (q/p) (u[i][σ(j)] - m[i][σ(j)])`.
///
/// The image is feasible for the density-`q` problem with the same uniform
/// marginals, and under the `neg_dot` cost it costs `q/p` times the input.
pub fn conjugate_transform(
    problem: &Problem,
    plan: &TransportPlan,
    pair: &ConjugatePair,
) -> Result<TransportPlan, StructureError> {
    check_conjugate_setting(problem, pair)?;
    if !problem.is_feasible_plan(plan)? {
        return Err(StructureError::InfeasibleInput);
    }
    let scale = pair.value_ratio();
    let (_, cols) = plan.shape();
    let grid_y = problem.grid_y();
    let sigma = |j: usize| grid_y.reflected_cell(j);
    debug_assert!(cols == grid_y.num_cells());
    Ok(TransportPlan::from_fn(
        *problem.grid_x(),
        *grid_y,
        |i, j| {
            let s = sigma(j);
            &scale * (problem.capacity.get(i, s) - plan.get(i, s))
        },
    ))
}

/// Whether the cost of the image is `q/p` times the input by the exact
/// identity; only the `neg_dot` cost carries it.
pub(crate) fn carries_value_identity(problem: &Problem) -> bool {
    problem.cost.kind() == CostKind::NegDot
}
