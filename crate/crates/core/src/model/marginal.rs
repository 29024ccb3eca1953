use num_traits::{Signed, Zero};

use super::{Grid, ModelError, Rational};

/// Nonnegative mass per cell of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMarginal {
    grid: Grid,
    mass: Vec<Rational>,
    total: Rational,
}

impl DiscreteMarginal {
    /// Uniform density 1 on the unit-volume box: every cell carries its volume.
    pub fn uniform(grid: Grid) -> Self {
        let vol = grid.cell_volume();
        let mass = vec![vol; grid.num_cells()];
        let total = mass.iter().sum();
        Self { grid, mass, total }
    }

    pub fn new(grid: Grid, mass: Vec<Rational>) -> Result<Self, ModelError> {
        if mass.len() != grid.num_cells() {
            return Err(ModelError::LengthMismatch {
                expected: grid.num_cells(),
                found: mass.len(),
            });
        }
        if let Some((index, value)) = mass.iter().enumerate().find(|(_, m)| m.is_negative()) {
            return Err(ModelError::NegativeEntry {
                index,
                value: value.clone(),
            });
        }
        let total = mass.iter().sum();
        Ok(Self { grid, mass, total })
    }

    /// Masses proportional to `weights`, normalised to total mass 1.
    pub fn from_weights(grid: Grid, weights: Vec<Rational>) -> Result<Self, ModelError> {
        let raw = Self::new(grid, weights)?;
        if raw.total.is_zero() {
            return Err(ModelError::ZeroMass);
        }
        let total = raw.total.clone();
        Self::new(grid, raw.mass.into_iter().map(|m| m / &total).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn mass(&self) -> &[Rational] {
        &self.mass
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }
}
