use num_traits::{Signed, Zero};

use super::StructureError;
use crate::model::{
    ratio, CapacityMatrix, DiscreteMarginal, Domain, Grid, Rational, TransportPlan,
};

/// Density-2 plan on centered 1-d grids filling every pair with `x y > 0`.
pub fn reference_checkerboard(n: usize) -> Result<TransportPlan, StructureError> {
    reference_sign_plan(1, n)
}

/// Density-2 plan on centered `d`-dimensional grids: full mass on pairs with
/// `<x, y> > 0`, nothing on `<x, y> < 0`, and each row's remaining mass spread
/// evenly over its partners with `<x, y> = 0`.
///
/// Fails with [`StructureError::SignPlanObstructed`] when the spread breaks a
/// column marginal or the capacity.
pub fn reference_sign_plan(d: usize, n: usize) -> Result<TransportPlan, StructureError> {
    if n % 2 == 1 {
        return Err(StructureError::OddGrid(n));
    }
    let grid = Grid::new(d, n, Domain::Centered)?;
    let marginal = DiscreteMarginal::uniform(grid);
    let capacity = CapacityMatrix::constant(&grid, &grid, ratio(2, 1))?;
    let full = capacity.get(0, 0).clone();
    let points = grid.midpoints();
    let dot = |i: usize, j: usize| -> Rational {
        points[i].iter().zip(&points[j]).map(|(a, b)| a * b).sum()
    };

    let cells = grid.num_cells();
    let mut plan = TransportPlan::zeros(grid, grid);
    for i in 0..cells {
        let mut zeros = Vec::new();
        for j in 0..cells {
            let s = dot(i, j);
            if s.is_positive() {
                plan.set(i, j, full.clone());
            } else if s.is_zero() {
                zeros.push(j);
            }
        }
        let filled: Rational = plan.mass().row(i).iter().sum();
        let residual = &marginal.mass()[i] - filled;
        if residual.is_negative() {
            return Err(StructureError::SignPlanObstructed(format!(
                "row {i} overfilled by positive pairs"
            )));
        }
        if residual.is_zero() {
            continue;
        }
        if zeros.is_empty() {
            return Err(StructureError::SignPlanObstructed(format!(
                "row {i} short by {residual} with no zero-product partners"
            )));
        }
        let share = residual / Rational::from_integer(zeros.len().into());
        for j in zeros {
            plan.set(i, j, share.clone());
        }
    }

    let report = plan.check_feasible(&marginal, &marginal, &capacity)?;
    if !report.is_feasible {
        return Err(StructureError::SignPlanObstructed(format!(
            "column defect {}, bound violation {}",
            report.worst_col_defect, report.worst_bound_violation
        )));
    }
    Ok(plan)
}
