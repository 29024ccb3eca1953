use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::{Grid, Matrix, ModelError, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostKind {
    /// `c(x, y) = -<x, y>`.
    NegDot,
    /// `c(x, y) = |x - y|^2`.
    SqDist,
    Custom,
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostKind::NegDot => "neg_dot",
            CostKind::SqDist => "sq_dist",
            CostKind::Custom => "custom",
        })
    }
}

impl FromStr for CostKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "neg_dot" => Ok(CostKind::NegDot),
            "sq_dist" => Ok(CostKind::SqDist),
            "custom" => Ok(CostKind::Custom),
            other => Err(format!("unknown cost kind {other:?}")),
        }
    }
}

/// Cost per unit mass between x-cell `i` and y-cell `j`, evaluated at midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    kind: CostKind,
    entries: Matrix<Rational>,
}

impl CostMatrix {
    pub fn build(grid_x: &Grid, grid_y: &Grid, kind: CostKind) -> Result<Self, ModelError> {
        if grid_x.dim() != grid_y.dim() {
            return Err(ModelError::DimensionMismatch(grid_x.dim(), grid_y.dim()));
        }
        let xs = grid_x.midpoints();
        let ys = grid_y.midpoints();
        let entries = match kind {
            CostKind::NegDot => Matrix::from_fn(xs.len(), ys.len(), |i, j| {
                -xs[i]
                    .iter()
                    .zip(&ys[j])
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            }),
            CostKind::SqDist => Matrix::from_fn(xs.len(), ys.len(), |i, j| {
                xs[i]
                    .iter()
                    .zip(&ys[j])
                    .fold(Rational::zero(), |acc, (a, b)| {
                        let d = a - b;
                        acc + &d * &d
                    })
            }),
            // Nothing to derive a custom cost from.
            CostKind::Custom => Matrix::filled(xs.len(), ys.len(), Rational::zero()),
        };
        Ok(Self { kind, entries })
    }

    pub fn custom(entries: Matrix<Rational>) -> Self {
        Self {
            kind: CostKind::Custom,
            entries,
        }
    }

    pub fn kind(&self) -> CostKind {
        self.kind
    }

    pub fn entries(&self) -> &Matrix<Rational> {
        &self.entries
    }

    pub fn shape(&self) -> (usize, usize) {
        self.entries.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[(i, j)]
    }

    /// `c[i][j] + c[i'][j'] - c[i][j'] - c[i'][j]`.
    pub fn exchange_bracket(&self, i: usize, i2: usize, j: usize, j2: usize) -> Rational {
        self.get(i, j) + self.get(i2, j2) - self.get(i, j2) - self.get(i2, j)
    }

    /// Entrywise `factor * c`, tagged custom.
    pub fn scaled(&self, factor: &Rational) -> Self {
        Self::custom(self.entries.map(|c| c * factor))
    }

    /// `c[i][j] + row[i] + col[j]`, tagged custom.
    pub fn shifted(&self, row: &[Rational], col: &[Rational]) -> Self {
        Self::custom(Matrix::from_fn(
            self.entries.rows(),
            self.entries.cols(),
            |i, j| &self.entries[(i, j)] + &row[i] + &col[j],
        ))
    }

    pub fn transpose(&self) -> Self {
        Self {
            kind: self.kind,
            entries: self.entries.transpose(),
        }
    }
}
