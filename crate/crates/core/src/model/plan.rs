use num_traits::{Signed, Zero};

use super::capacity::check_shape;
use super::{CapacityMatrix, CostMatrix, DiscreteMarginal, Grid, Matrix, ModelError, Rational};

/// Nonnegative mass per cell pair `(x-cell i, y-cell j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    grid_x: Grid,
    grid_y: Grid,
    mass: Matrix<Rational>,
}

/// Worst exact defects of a plan against marginals and bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub is_feasible: bool,
    /// `max_i |sum_j m[i][j] - f[i]|`.
    pub worst_row_defect: Rational,
    /// `max_j |sum_i m[i][j] - g[j]|`.
    pub worst_col_defect: Rational,
    /// `max (m[i][j] - u[i][j])^+`.
    pub worst_bound_violation: Rational,
    /// `max (-m[i][j])^+`.
    pub worst_negativity: Rational,
}

impl FeasibilityReport {
    /// Largest of the four defects.
    pub fn max_defect(&self) -> Rational {
        [
            &self.worst_row_defect,
            &self.worst_col_defect,
            &self.worst_bound_violation,
            &self.worst_negativity,
        ]
        .into_iter()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero)
    }
}

impl TransportPlan {
    pub fn new(grid_x: Grid, grid_y: Grid, mass: Matrix<Rational>) -> Result<Self, ModelError> {
        check_shape(&mass, grid_x.num_cells(), grid_y.num_cells())?;
        Ok(Self {
            grid_x,
            grid_y,
            mass,
        })
    }

    pub fn zeros(grid_x: Grid, grid_y: Grid) -> Self {
        Self::from_fn(grid_x, grid_y, |_, _| Rational::zero())
    }

    pub fn from_fn(grid_x: Grid, grid_y: Grid, f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mass = Matrix::from_fn(grid_x.num_cells(), grid_y.num_cells(), f);
        Self {
            grid_x,
            grid_y,
            mass,
        }
    }

    /// `f ⊗ g`, normalised by the total mass of `g`.
    pub fn product(f: &DiscreteMarginal, g: &DiscreteMarginal) -> Self {
        let total = g.total().clone();
        Self::from_fn(*f.grid(), *g.grid(), |i, j| {
            &f.mass()[i] * &g.mass()[j] / &total
        })
    }

    pub fn grid_x(&self) -> &Grid {
        &self.grid_x
    }

    pub fn grid_y(&self) -> &Grid {
        &self.grid_y
    }

    pub fn mass(&self) -> &Matrix<Rational> {
        &self.mass
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.mass[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.mass[(i, j)] = value;
    }

    pub fn shape(&self) -> (usize, usize) {
        self.mass.shape()
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        (0..self.mass.rows())
            .map(|i| self.mass.row(i).iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); self.mass.cols()];
        for ((_, j), m) in self.mass.indexed() {
            sums[j] += m;
        }
        sums
    }

    pub fn transpose(&self) -> Self {
        Self {
            grid_x: self.grid_y,
            grid_y: self.grid_x,
            mass: self.mass.transpose(),
        }
    }

    /// `sum_ij c[i][j] m[i][j]`.
    pub fn total_cost(&self, cost: &CostMatrix) -> Result<Rational, ModelError> {
        check_shape(cost.entries(), self.mass.rows(), self.mass.cols())?;
        Ok(self
            .mass
            .iter()
            .zip(cost.entries().iter())
            .filter(|(m, _)| !m.is_zero())
            .map(|(m, c)| m * c)
            .sum())
    }

    /// `alpha * self + (1 - alpha) * other`.
    pub fn convex_combination(&self, other: &Self, alpha: &Rational) -> Result<Self, ModelError> {
        check_shape(&other.mass, self.mass.rows(), self.mass.cols())?;
        let beta = Rational::from_integer(1.into()) - alpha;
        let mass = Matrix::from_fn(self.mass.rows(), self.mass.cols(), |i, j| {
            alpha * &self.mass[(i, j)] + &beta * &other.mass[(i, j)]
        });
        Ok(Self { mass, ..*self })
    }

    pub fn check_feasible(
        &self,
        f: &DiscreteMarginal,
        g: &DiscreteMarginal,
        capacity: &CapacityMatrix,
    ) -> Result<FeasibilityReport, ModelError> {
        let (rows, cols) = self.shape();
        if f.len() != rows {
            return Err(ModelError::LengthMismatch {
                expected: rows,
                found: f.len(),
            });
        }
        if g.len() != cols {
            return Err(ModelError::LengthMismatch {
                expected: cols,
                found: g.len(),
            });
        }
        check_shape(capacity.bounds(), rows, cols)?;

        let worst_abs = |sums: Vec<Rational>, target: &[Rational]| {
            sums.iter()
                .zip(target)
                .map(|(s, t)| (s - t).abs())
                .max()
                .unwrap_or_else(Rational::zero)
        };
        let worst_row_defect = worst_abs(self.row_sums(), f.mass());
        let worst_col_defect = worst_abs(self.col_sums(), g.mass());

        let zero = Rational::zero();
        let mut worst_bound_violation = zero.clone();
        let mut worst_negativity = zero.clone();
        for (m, u) in self.mass.iter().zip(capacity.bounds().iter()) {
            if m > u {
                worst_bound_violation = worst_bound_violation.max(m - u);
            }
            if m.is_negative() {
                worst_negativity = worst_negativity.max(-m);
            }
        }
        let is_feasible = worst_row_defect.is_zero()
            && worst_col_defect.is_zero()
            && worst_bound_violation.is_zero()
            && worst_negativity.is_zero();
        Ok(FeasibilityReport {
            is_feasible,
            worst_row_defect,
            worst_col_defect,
            worst_bound_violation,
            worst_negativity,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ratio, CostKind, Domain};

    fn setup(n: usize, domain: Domain) -> (Grid, DiscreteMarginal) {
        let g = Grid::new(1, n, domain).unwrap();
        (g, DiscreteMarginal::uniform(g))
    }

    fn diagonal(g: Grid) -> TransportPlan {
        let n = g.num_cells();
        TransportPlan::from_fn(g, g, |i, j| {
            if i == j {
                ratio(1, n as i64)
            } else {
                ratio(0, 1)
            }
        })
    }

    #[test]
    fn total_cost_examples() {
        let (g, f) = setup(2, Domain::Centered);
        let c = CostMatrix::build(&g, &g, CostKind::NegDot).unwrap();
        assert_eq!(
            TransportPlan::product(&f, &f).total_cost(&c).unwrap(),
            ratio(0, 1)
        );
        assert_eq!(diagonal(g).total_cost(&c).unwrap(), ratio(-1, 16));

        let (g, f) = setup(2, Domain::Unit);
        let c = CostMatrix::build(&g, &g, CostKind::NegDot).unwrap();
        assert_eq!(
            TransportPlan::product(&f, &f).total_cost(&c).unwrap(),
            ratio(-1, 4)
        );
    }

    #[test]
    fn total_cost_shape_mismatch() {
        let (g2, _) = setup(2, Domain::Unit);
        let (g3, _) = setup(3, Domain::Unit);
        let c = CostMatrix::build(&g3, &g3, CostKind::NegDot).unwrap();
        assert!(matches!(
            TransportPlan::zeros(g2, g2).total_cost(&c),
            Err(ModelError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn product_plan_feasible_for_density_at_least_one() {
        let (g, f) = setup(4, Domain::Centered);
        for d in [ratio(1, 1), ratio(3, 2), ratio(4, 1)] {
            let cap = CapacityMatrix::constant(&g, &g, d).unwrap();
            let r = TransportPlan::product(&f, &f)
                .check_feasible(&f, &f, &cap)
                .unwrap();
            assert!(r.is_feasible);
            assert!(r.max_defect().is_zero());
        }
    }

    #[test]
    fn diagonal_violates_density_one() {
        let (g, f) = setup(2, Domain::Centered);
        let cap = CapacityMatrix::constant(&g, &g, ratio(1, 1)).unwrap();
        let r = diagonal(g).check_feasible(&f, &f, &cap).unwrap();
        assert!(!r.is_feasible);
        assert_eq!(r.worst_bound_violation, ratio(1, 4));
        assert!(r.worst_row_defect.is_zero());
    }

    #[test]
    fn zero_plan_row_defect() {
        for n in [1, 2, 5] {
            let (g, f) = setup(n, Domain::Unit);
            let cap = CapacityMatrix::constant(&g, &g, ratio(1, 1)).unwrap();
            let r = TransportPlan::zeros(g, g)
                .check_feasible(&f, &f, &cap)
                .unwrap();
            assert!(!r.is_feasible);
            assert_eq!(r.worst_row_defect, ratio(1, n as i64));
            assert_eq!(r.worst_col_defect, ratio(1, n as i64));
        }
    }
}
