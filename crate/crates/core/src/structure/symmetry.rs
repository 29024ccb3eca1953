use num_traits::Signed;

use super::conjugate::carries_value_identity;
use super::{conjugate_problem, conjugate_transform, ConjugatePair, StructureError};
use crate::model::{CostKind, Domain, Problem, Rational, TransportPlan};
use crate::solver::{solve, SolveResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetryTransform {
    /// `(x, y) -> (y, x)`; needs `f = g` and symmetric cost and capacity.
    Transpose,
    /// `(x, y) -> (-x, -y)`; needs centered grids, the `neg_dot` cost and
    /// reflection-invariant data.
    Negate,
    /// Complement in the density-`p` box, reflect `y`, scale by `q/p`.
    ConjugateReflect(ConjugatePair),
}

impl SymmetryTransform {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Transpose => "transpose",
            Self::Negate => "negate",
            Self::ConjugateReflect(_) => "conjugate",
        }
    }
}

/// Value-level check that the image of an optimum is optimal for the
/// transformed problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub transform: SymmetryTransform,
    pub image_feasible: bool,
    /// Largest marginal, bound or sign defect of the image.
    pub feasibility_defect: Rational,
    pub image_cost: Rational,
    /// Optimal value of the transformed problem.
    pub target_value: Rational,
    /// `|image_cost - target_value|`.
    pub defect: Rational,
    pub holds: bool,
}

fn inapplicable(msg: &str) -> StructureError {
    StructureError::Inapplicable(msg.to_string())
}

fn check_transpose(problem: &Problem) -> Result<(), StructureError> {
    if problem.f != problem.g {
        return Err(inapplicable("transpose needs identical marginals"));
    }
    if problem.cost.entries() != &problem.cost.entries().transpose() {
        return Err(inapplicable("transpose needs a symmetric cost"));
    }
    if problem.capacity.bounds() != &problem.capacity.bounds().transpose() {
        return Err(inapplicable("transpose needs a symmetric capacity"));
    }
    Ok(())
}

fn check_negate(problem: &Problem) -> Result<(), StructureError> {
    let (gx, gy) = (problem.grid_x(), problem.grid_y());
    if gx.domain() != Domain::Centered || gy.domain() != Domain::Centered {
        return Err(StructureError::NotCentered("negate"));
    }
    if problem.cost.kind() != CostKind::NegDot {
        return Err(StructureError::WrongCost {
            op: "negate",
            expected: CostKind::NegDot,
            found: problem.cost.kind(),
        });
    }
    let reflected = |m: &[Rational], grid: &crate::model::Grid| {
        (0..m.len()).all(|i| m[i] == m[grid.reflected_cell(i)])
    };
    if !reflected(problem.f.mass(), gx) || !reflected(problem.g.mass(), gy) {
        return Err(inapplicable("negate needs reflection-symmetric marginals"));
    }
    let cap = &problem.capacity;
    let (rows, cols) = problem.shape();
    let symmetric = (0..rows).all(|i| {
        (0..cols).all(|j| cap.get(i, j) == cap.get(gx.reflected_cell(i), gy.reflected_cell(j)))
    });
    if !symmetric {
        return Err(inapplicable("negate needs a reflection-symmetric capacity"));
    }
    Ok(())
}

pub fn verify_symmetric_optimality(
    problem: &Problem,
    result: &SolveResult,
    transform: &SymmetryTransform,
) -> Result<SymmetryReport, StructureError> {
    let plan = &result.plan;
    let (image, target_problem, target_value): (TransportPlan, Problem, Rational) = match transform
    {
        SymmetryTransform::Transpose => {
            check_transpose(problem)?;
            (
                plan.transpose(),
                problem.transpose(),
                result.optimal_value.clone(),
            )
        }
        SymmetryTransform::Negate => {
            check_negate(problem)?;
            let (gx, gy) = (*problem.grid_x(), *problem.grid_y());
            let image = TransportPlan::from_fn(gx, gy, |i, j| {
                plan.get(gx.reflected_cell(i), gy.reflected_cell(j)).clone()
            });
            (image, problem.clone(), result.optimal_value.clone())
        }
        SymmetryTransform::ConjugateReflect(pair) => {
            if !carries_value_identity(problem) {
                return Err(StructureError::WrongCost {
                    op: "conjugate reflection",
                    expected: CostKind::NegDot,
                    found: problem.cost.kind(),
                });
            }
            let target = conjugate_problem(problem, pair)?;
            let image = conjugate_transform(problem, plan, pair)?;
            let value = if pair.p() == pair.q() {
                result.optimal_value.clone()
            } else {
                solve(&target)?.optimal_value
            };
            (image, target, value)
        }
    };
    let report = image.check_feasible(
        &target_problem.f,
        &target_problem.g,
        &target_problem.capacity,
    )?;
    let image_cost = image.total_cost(&target_problem.cost)?;
    let defect = (&image_cost - &target_value).abs();
    Ok(SymmetryReport {
        transform: transform.clone(),
        image_feasible: report.is_feasible,
        feasibility_defect: report.max_defect(),
        holds: report.is_feasible && defect == Rational::from_integer(0.into()),
        image_cost,
        target_value,
        defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ratio, DiscreteMarginal, Grid};

    fn centered(n: usize, density: Rational) -> Problem {
        Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, density).unwrap()
    }

    #[test]
    fn transpose_at_two() {
        let p = centered(4, ratio(2, 1));
        let r = solve(&p).unwrap();
        let rep = verify_symmetric_optimality(&p, &r, &SymmetryTransform::Transpose).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.image_cost, ratio(-1, 16));
    }

    #[test]
    fn negate_at_three() {
        let p = centered(4, ratio(3, 1));
        let r = solve(&p).unwrap();
        let rep = verify_symmetric_optimality(&p, &r, &SymmetryTransform::Negate).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.image_cost, r.optimal_value);
    }

    #[test]
    fn conjugate_self_dual_and_general() {
        let p = centered(4, ratio(2, 1));
        let r = solve(&p).unwrap();
        let pair = ConjugatePair::new(ratio(2, 1)).unwrap();
        let rep = verify_symmetric_optimality(&p, &r, &SymmetryTransform::ConjugateReflect(pair))
            .unwrap();
        assert!(rep.holds);
        assert_eq!(rep.image_cost, ratio(-1, 16));

        let p = centered(4, ratio(4, 1));
        let r = solve(&p).unwrap();
        let pair = ConjugatePair::new(ratio(4, 1)).unwrap();
        let rep = verify_symmetric_optimality(&p, &r, &SymmetryTransform::ConjugateReflect(pair))
            .unwrap();
        assert!(rep.holds);
        assert_eq!(rep.target_value, &r.optimal_value * ratio(1, 3));
    }

    #[test]
    fn inapplicable_transforms() {
        let unit = Problem::uniform(1, 4, Domain::Unit, CostKind::NegDot, ratio(2, 1)).unwrap();
        let r = solve(&unit).unwrap();
        assert_eq!(
            verify_symmetric_optimality(&unit, &r, &SymmetryTransform::Negate),
            Err(StructureError::NotCentered("negate"))
        );
        let grid = Grid::new(1, 4, Domain::Centered).unwrap();
        let skew = DiscreteMarginal::from_weights(
            grid,
            vec![ratio(1, 1), ratio(2, 1), ratio(3, 1), ratio(4, 1)],
        )
        .unwrap();
        let mut p = centered(4, ratio(4, 1));
        p.f = skew;
        let r = solve(&p).unwrap();
        assert!(matches!(
            verify_symmetric_optimality(&p, &r, &SymmetryTransform::Transpose),
            Err(StructureError::Inapplicable(_))
        ));
        assert!(matches!(
            verify_symmetric_optimality(&p, &r, &SymmetryTransform::Negate),
            Err(StructureError::Inapplicable(_))
        ));
    }
}
