use num_traits::Signed;

use super::{Grid, Matrix, ModelError, Rational};

/// Upper bounds on plan mass per cell pair.
///
/// Densities are integrated exactly over cells, so a constant density `p`
/// bounds every pair by `p * vol_x * vol_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityMatrix {
    density: Option<Rational>,
    bounds: Matrix<Rational>,
}

impl CapacityMatrix {
    pub fn constant(grid_x: &Grid, grid_y: &Grid, density: Rational) -> Result<Self, ModelError> {
        if density.is_negative() {
            return Err(ModelError::NegativeDensity(density));
        }
        let bound = &density * grid_x.cell_volume() * grid_y.cell_volume();
        Ok(Self {
            bounds: Matrix::filled(grid_x.num_cells(), grid_y.num_cells(), bound),
            density: Some(density),
        })
    }

    /// Per-pair densities, integrated over each cell pair.
    pub fn from_densities(
        grid_x: &Grid,
        grid_y: &Grid,
        densities: &Matrix<Rational>,
    ) -> Result<Self, ModelError> {
        check_shape(densities, grid_x.num_cells(), grid_y.num_cells())?;
        let vol = grid_x.cell_volume() * grid_y.cell_volume();
        Self::from_bounds(densities.map(|d| d * &vol))
    }

    /// Mass bounds given directly.
    pub fn from_bounds(bounds: Matrix<Rational>) -> Result<Self, ModelError> {
        if let Some((index, value)) = bounds.iter().enumerate().find(|(_, u)| u.is_negative()) {
            return Err(ModelError::NegativeEntry {
                index,
                value: value.clone(),
            });
        }
        Ok(Self {
            density: None,
            bounds,
        })
    }

    /// The constant density, when the matrix was built from one.
    pub fn density(&self) -> Option<&Rational> {
        self.density.as_ref()
    }

    pub fn bounds(&self) -> &Matrix<Rational> {
        &self.bounds
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.bounds[(i, j)]
    }

    pub fn shape(&self) -> (usize, usize) {
        self.bounds.shape()
    }

    pub fn transpose(&self) -> Self {
        Self {
            density: self.density.clone(),
            bounds: self.bounds.transpose(),
        }
    }
}

pub(crate) fn check_shape<T>(m: &Matrix<T>, rows: usize, cols: usize) -> Result<(), ModelError> {
    if m.shape() != (rows, cols) {
        return Err(ModelError::ShapeMismatch {
            expected_rows: rows,
            expected_cols: cols,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}
