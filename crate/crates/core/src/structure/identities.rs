use num_traits::Zero;

use super::StructureError;
use crate::model::{
    CellState, CostKind, CostMatrix, DiscreteMarginal, Grid, ModelError, Rational,
    SaturationPattern,
};

/// Mass-weighted mean of the midpoints, one coordinate per axis.
pub fn center_of_mass(marginal: &DiscreteMarginal) -> Result<Vec<Rational>, StructureError> {
    let total = marginal.total();
    if total.is_zero() {
        return Err(StructureError::ZeroMass);
    }
    let grid = marginal.grid();
    let mut center = vec![Rational::zero(); grid.dim()];
    for (cell, m) in marginal.mass().iter().enumerate() {
        for (c, x) in center.iter_mut().zip(grid.midpoint(cell)) {
            *c += m * x;
        }
    }
    Ok(center.into_iter().map(|c| c / total).collect())
}

/// Both sides of the split of the `neg_dot` cost of the uniform measure
/// across a saturation set `W` and its complement.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementIdentity {
    /// `sum_W c vol_x vol_y`.
    pub saturated_part: Rational,
    /// `sum_{not W} c vol_x vol_y`.
    pub complement_part: Rational,
    pub lhs: Rational,
    /// `-b(x) . b(y)`.
    pub rhs: Rational,
    pub holds: bool,
}

pub fn cost_complement_identity(
    pattern: &SaturationPattern,
    cost: &CostMatrix,
    grid_x: &Grid,
    grid_y: &Grid,
) -> Result<ComplementIdentity, StructureError> {
    if cost.kind() != CostKind::NegDot {
        return Err(StructureError::WrongCost {
            op: "complement identity",
            expected: CostKind::NegDot,
            found: cost.kind(),
        });
    }
    let (rows, cols) = (grid_x.num_cells(), grid_y.num_cells());
    for shape in [pattern.shape(), cost.shape()] {
        if shape != (rows, cols) {
            return Err(ModelError::ShapeMismatch {
                expected_rows: rows,
                expected_cols: cols,
                rows: shape.0,
                cols: shape.1,
            }
            .into());
        }
    }
    let weight = grid_x.cell_volume() * grid_y.cell_volume();
    let mut saturated_part = Rational::zero();
    let mut complement_part = Rational::zero();
    for ((i, j), state) in pattern.labels().indexed() {
        let term = cost.get(i, j) * &weight;
        if *state == CellState::Saturated {
            saturated_part += term;
        } else {
            complement_part += term;
        }
    }
    let bx = center_of_mass(&DiscreteMarginal::uniform(*grid_x))?;
    let by = center_of_mass(&DiscreteMarginal::uniform(*grid_y))?;
    let rhs = -bx.iter().zip(&by).map(|(a, b)| a * b).sum::<Rational>();
    let lhs = &saturated_part + &complement_part;
    Ok(ComplementIdentity {
        holds: lhs == rhs,
        saturated_part,
        complement_part,
        lhs,
        rhs,
    })
}
