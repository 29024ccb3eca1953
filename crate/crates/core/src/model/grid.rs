use std::fmt;

use super::{ratio, ModelError, Rational};

/// Which unit-volume box a grid partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// `[-1/2, 1/2]^d`, invariant under negation.
    Centered,
    /// `[0, 1]^d`.
    Unit,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Centered => f.write_str("centered"),
            Domain::Unit => f.write_str("unit"),
        }
    }
}

/// Uniform partition of a unit-volume box into `n^d` congruent cells.
///
/// Cells are numbered row-major over their axis indices, the first axis
/// varying slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    dim: usize,
    cells_per_axis: usize,
    domain: Domain,
}

impl Grid {
    pub fn new(dim: usize, cells_per_axis: usize, domain: Domain) -> Result<Self, ModelError> {
        if !(1..=2).contains(&dim) {
            return Err(ModelError::UnsupportedDimension(dim));
        }
        if cells_per_axis == 0 {
            return Err(ModelError::EmptyGrid);
        }
        Ok(Self {
            dim,
            cells_per_axis,
            domain,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn num_cells(&self) -> usize {
        self.cells_per_axis.pow(self.dim as u32)
    }

    /// `(1/n)^d`.
    pub fn cell_volume(&self) -> Rational {
        ratio(1, self.num_cells() as i64)
    }

    /// Midpoint of cell `i` along one axis.
    pub fn axis_midpoint(&self, i: usize) -> Rational {
        let n = self.cells_per_axis as i64;
        let i = i as i64;
        match self.domain {
            Domain::Centered => ratio(2 * i + 1 - n, 2 * n),
            Domain::Unit => ratio(2 * i + 1, 2 * n),
        }
    }

    /// Per-axis indices of a flat cell index.
    pub fn axis_indices(&self, cell: usize) -> Vec<usize> {
        let n = self.cells_per_axis;
        let mut out = vec![0; self.dim];
        let mut rest = cell;
        for slot in out.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        out
    }

    pub fn flat_index(&self, axis_indices: &[usize]) -> usize {
        axis_indices
            .iter()
            .fold(0, |acc, &i| acc * self.cells_per_axis + i)
    }

    pub fn midpoint(&self, cell: usize) -> Vec<Rational> {
        self.axis_indices(cell)
            .into_iter()
            .map(|i| self.axis_midpoint(i))
            .collect()
    }

    pub fn midpoints(&self) -> Vec<Vec<Rational>> {
        (0..self.num_cells()).map(|c| self.midpoint(c)).collect()
    }

    /// Index of the cell obtained by reversing every axis. On a centered grid
    /// this is the cell whose midpoint is the negated midpoint.
    pub fn reflected_cell(&self, cell: usize) -> usize {
        let n = self.cells_per_axis;
        let rev: Vec<usize> = self
            .axis_indices(cell)
            .into_iter()
            .map(|i| n - 1 - i)
            .collect();
        self.flat_index(&rev)
    }
}
