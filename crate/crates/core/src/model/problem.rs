use super::capacity::check_shape;
use super::{
    CapacityMatrix, CostKind, CostMatrix, DiscreteMarginal, Domain, Grid, ModelError, Rational,
    TransportPlan,
};

/// One capacity-constrained transport instance: marginals, cost, bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub f: DiscreteMarginal,
    pub g: DiscreteMarginal,
    pub cost: CostMatrix,
    pub capacity: CapacityMatrix,
}

impl Problem {
    pub fn new(
        f: DiscreteMarginal,
        g: DiscreteMarginal,
        cost: CostMatrix,
        capacity: CapacityMatrix,
    ) -> Result<Self, ModelError> {
        check_shape(cost.entries(), f.len(), g.len())?;
        check_shape(capacity.bounds(), f.len(), g.len())?;
        Ok(Self {
            f,
            g,
            cost,
            capacity,
        })
    }

    /// Uniform marginals on two copies of the same grid with constant density.
    pub fn uniform(
        dim: usize,
        n: usize,
        domain: Domain,
        kind: CostKind,
        density: Rational,
    ) -> Result<Self, ModelError> {
        let grid = Grid::new(dim, n, domain)?;
        let f = DiscreteMarginal::uniform(grid);
        let cost = CostMatrix::build(&grid, &grid, kind)?;
        let capacity = CapacityMatrix::constant(&grid, &grid, density)?;
        Self::new(f.clone(), f, cost, capacity)
    }

    pub fn grid_x(&self) -> &Grid {
        self.f.grid()
    }

    pub fn grid_y(&self) -> &Grid {
        self.g.grid()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.f.len(), self.g.len())
    }

    pub fn with_capacity(&self, capacity: CapacityMatrix) -> Result<Self, ModelError> {
        Self::new(self.f.clone(), self.g.clone(), self.cost.clone(), capacity)
    }

    pub fn with_cost(&self, cost: CostMatrix) -> Result<Self, ModelError> {
        Self::new(self.f.clone(), self.g.clone(), cost, self.capacity.clone())
    }

    /// Swaps the roles of x and y.
    pub fn transpose(&self) -> Self {
        Self {
            f: self.g.clone(),
            g: self.f.clone(),
            cost: self.cost.transpose(),
            capacity: self.capacity.transpose(),
        }
    }

    pub fn is_feasible_plan(&self, plan: &TransportPlan) -> Result<bool, ModelError> {
        Ok(plan
            .check_feasible(&self.f, &self.g, &self.capacity)?
            .is_feasible)
    }
}
