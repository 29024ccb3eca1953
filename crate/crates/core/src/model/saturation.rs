use num_traits::{Signed, Zero};

use super::capacity::check_shape;
use super::{CapacityMatrix, Matrix, ModelError, Rational, TransportPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Empty,
    Partial,
    Saturated,
}

/// Three-way classification of cell pairs: the discrete saturation set and
/// its complement, plus the cells strictly between the bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationPattern {
    labels: Matrix<CellState>,
    empty: usize,
    partial: usize,
    saturated: usize,
}

impl SaturationPattern {
    /// Exact classification.
    pub fn classify(plan: &TransportPlan, capacity: &CapacityMatrix) -> Result<Self, ModelError> {
        Self::classify_with_tolerance(plan, capacity, None)
    }

    /// Classification treating values within `tol` of a bound as on the bound.
    pub fn classify_with_tolerance(
        plan: &TransportPlan,
        capacity: &CapacityMatrix,
        tol: Option<&Rational>,
    ) -> Result<Self, ModelError> {
        let (rows, cols) = plan.shape();
        check_shape(capacity.bounds(), rows, cols)?;
        let near = |a: &Rational, b: &Rational| match tol {
            None => a == b,
            Some(t) => (a - b).abs() <= *t,
        };
        let zero = Rational::zero();
        let labels = Matrix::from_fn(rows, cols, |i, j| {
            let m = plan.get(i, j);
            let u = capacity.get(i, j);
            if near(m, &zero) {
                CellState::Empty
            } else if near(m, u) && u.is_positive() {
                CellState::Saturated
            } else {
                CellState::Partial
            }
        });
        Ok(Self::from_labels(labels))
    }

    pub fn from_labels(labels: Matrix<CellState>) -> Self {
        let count = |s: CellState| labels.iter().filter(|&&l| l == s).count();
        Self {
            empty: count(CellState::Empty),
            partial: count(CellState::Partial),
            saturated: count(CellState::Saturated),
            labels,
        }
    }

    pub fn labels(&self) -> &Matrix<CellState> {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> CellState {
        self.labels[(i, j)]
    }

    pub fn shape(&self) -> (usize, usize) {
        self.labels.shape()
    }

    pub fn empty_count(&self) -> usize {
        self.empty
    }

    pub fn partial_count(&self) -> usize {
        self.partial
    }

    pub fn saturated_count(&self) -> usize {
        self.saturated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ratio, DiscreteMarginal, Domain, Grid};

    fn grid(n: usize) -> Grid {
        Grid::new(1, n, Domain::Centered).unwrap()
    }

    #[test]
    fn product_plan_at_density_one_is_saturated() {
        let g = grid(3);
        let f = DiscreteMarginal::uniform(g);
        let plan = TransportPlan::product(&f, &f);
        let cap = CapacityMatrix::constant(&g, &g, ratio(1, 1)).unwrap();
        let pat = SaturationPattern::classify(&plan, &cap).unwrap();
        assert_eq!(pat.saturated_count(), 9);
        assert_eq!(pat.partial_count(), 0);
    }

    #[test]
    fn zero_plan_is_empty() {
        let g = grid(3);
        let plan = TransportPlan::zeros(g, g);
        let cap = CapacityMatrix::constant(&g, &g, ratio(2, 1)).unwrap();
        let pat = SaturationPattern::classify(&plan, &cap).unwrap();
        assert_eq!(pat.empty_count(), 9);
    }

    #[test]
    fn diagonal_at_density_two() {
        let g = grid(2);
        let plan =
            TransportPlan::from_fn(g, g, |i, j| if i == j { ratio(1, 2) } else { ratio(0, 1) });
        let cap = CapacityMatrix::constant(&g, &g, ratio(2, 1)).unwrap();
        let pat = SaturationPattern::classify(&plan, &cap).unwrap();
        assert_eq!(pat.get(0, 0), CellState::Saturated);
        assert_eq!(pat.get(1, 1), CellState::Saturated);
        assert_eq!(pat.get(0, 1), CellState::Empty);
        assert_eq!(pat.get(1, 0), CellState::Empty);
        assert_eq!(pat.partial_count(), 0);
    }

    #[test]
    fn zero_capacity_cell_is_empty_not_saturated() {
        let g = grid(1);
        let plan = TransportPlan::zeros(g, g);
        let cap = CapacityMatrix::constant(&g, &g, ratio(0, 1)).unwrap();
        let pat = SaturationPattern::classify(&plan, &cap).unwrap();
        assert_eq!(pat.get(0, 0), CellState::Empty);
    }

    #[test]
    fn tolerance_classification() {
        let g = grid(1);
        let plan = TransportPlan::from_fn(g, g, |_, _| ratio(999_999_999_999, 1_000_000_000_000));
        let cap = CapacityMatrix::constant(&g, &g, ratio(1, 1)).unwrap();
        let exact = SaturationPattern::classify(&plan, &cap).unwrap();
        assert_eq!(exact.get(0, 0), CellState::Partial);
        let loose =
            SaturationPattern::classify_with_tolerance(&plan, &cap, Some(&ratio(1, 1_000_000_000)))
                .unwrap();
        assert_eq!(loose.get(0, 0), CellState::Saturated);
    }
}
