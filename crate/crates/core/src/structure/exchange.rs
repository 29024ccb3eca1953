use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::StructureError;
use crate::model::{CapacityMatrix, CostMatrix, Matrix, Rational, TransportPlan};

/// Scans are exhaustive while both sides have at most this many cells.
pub const EXHAUSTIVE_SCAN_MAX_CELLS: usize = 16;

/// Quadruples drawn by a sampled scan.
pub const SAMPLED_SCAN_QUADS: usize = 1_000_000;

/// Adds `amount` at `(i, j)` and `(i2, j2)`, removes it at `(i, j2)` and
/// `(i2, j)`. Row and column sums are unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExchangeQuad {
    pub i: usize,
    pub i2: usize,
    pub j: usize,
    pub j2: usize,
    pub amount: Rational,
}

impl ExchangeQuad {
    pub fn new(i: usize, i2: usize, j: usize, j2: usize, amount: Rational) -> Self {
        Self {
            i,
            i2,
            j,
            j2,
            amount,
        }
    }

    /// Cost change per unit of exchanged mass.
    pub fn unit_delta(&self, cost: &CostMatrix) -> Rational {
        cost.exchange_bracket(self.i, self.i2, self.j, self.j2)
    }

    /// Largest amount keeping `plan` within `[0, u]`.
    pub fn admissible_amount(&self, plan: &TransportPlan, capacity: &CapacityMatrix) -> Rational {
        let slack = |i, j| capacity.get(i, j) - plan.get(i, j);
        [
            slack(self.i, self.j),
            slack(self.i2, self.j2),
            plan.get(self.i, self.j2).clone(),
            plan.get(self.i2, self.j).clone(),
        ]
        .into_iter()
        .min()
        .expect("four cells")
    }
}

pub fn apply_exchange(
    plan: &TransportPlan,
    quad: &ExchangeQuad,
    capacity: &CapacityMatrix,
) -> Result<TransportPlan, StructureError> {
    if quad.i == quad.i2 || quad.j == quad.j2 {
        return Err(StructureError::DegenerateQuad);
    }
    if quad.amount.is_negative() {
        return Err(StructureError::NegativeAmount);
    }
    let admissible = quad.admissible_amount(plan, capacity);
    if quad.amount > admissible {
        return Err(StructureError::InfeasibleAmount {
            amount: Box::new(quad.amount.clone()),
            admissible: Box::new(admissible),
        });
    }
    let mut out = plan.clone();
    let e = &quad.amount;
    out.set(quad.i, quad.j, plan.get(quad.i, quad.j) + e);
    out.set(quad.i2, quad.j2, plan.get(quad.i2, quad.j2) + e);
    out.set(quad.i, quad.j2, plan.get(quad.i, quad.j2) - e);
    out.set(quad.i2, quad.j, plan.get(quad.i2, quad.j) - e);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// Every ordered quadruple with `i != i'` and `j != j'`.
    Exhaustive,
    /// `samples` uniformly drawn quadruples from a seeded stream.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeScan {
    /// Smallest per-unit cost change over quadruples admitting a positive
    /// amount; zero when none does.
    pub min_delta: Rational,
    /// Present iff `min_delta < 0`; carries the largest admissible amount.
    pub witness: Option<ExchangeQuad>,
    pub admissible_quads: usize,
    pub quads_examined: usize,
    pub mode: ScanMode,
}

impl ExchangeScan {
    pub fn certifies_optimality(&self) -> bool {
        !self.min_delta.is_negative()
    }
}

/// Exhaustive up to [`EXHAUSTIVE_SCAN_MAX_CELLS`] cells per side, sampled
/// ([`SAMPLED_SCAN_QUADS`] draws, fixed seed) above.
pub fn scan_exchanges(
    plan: &TransportPlan,
    cost: &CostMatrix,
    capacity: &CapacityMatrix,
) -> ExchangeScan {
    let (rows, cols) = plan.shape();
    let mode = if rows <= EXHAUSTIVE_SCAN_MAX_CELLS && cols <= EXHAUSTIVE_SCAN_MAX_CELLS {
        ScanMode::Exhaustive
    } else {
        ScanMode::Sampled {
            samples: SAMPLED_SCAN_QUADS,
            seed: 0x5eed,
        }
    };
    scan_exchanges_with(plan, cost, capacity, mode)
}

/// Best candidate so far: `(delta, [i, i2, j, j2])`, smallest delta then
/// lexicographically smallest indices.
type Best = Option<(Rational, [usize; 4])>;

fn better(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if (&y.0, y.1) < (&x.0, x.1) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}

pub fn scan_exchanges_with(
    plan: &TransportPlan,
    cost: &CostMatrix,
    capacity: &CapacityMatrix,
    mode: ScanMode,
) -> ExchangeScan {
    let (rows, cols) = plan.shape();
    let can_add = Matrix::from_fn(rows, cols, |i, j| plan.get(i, j) < capacity.get(i, j));
    let can_remove = plan.mass().map(|m| m.is_positive());
    let admissible = |[i, i2, j, j2]: [usize; 4]| {
        can_add[(i, j)] && can_add[(i2, j2)] && can_remove[(i, j2)] && can_remove[(i2, j)]
    };
    let candidate = |q: [usize; 4]| -> Best {
        admissible(q).then(|| (cost.exchange_bracket(q[0], q[1], q[2], q[3]), q))
    };

    let (best, admissible_quads, examined) = match mode {
        ScanMode::Exhaustive => (0..rows)
            .into_par_iter()
            .map(|i| {
                let mut best = None;
                let mut count = 0;
                let mut seen = 0;
                for i2 in (0..rows).filter(|&i2| i2 != i) {
                    for j in 0..cols {
                        for j2 in (0..cols).filter(|&j2| j2 != j) {
                            seen += 1;
                            let c = candidate([i, i2, j, j2]);
                            if c.is_some() {
                                count += 1;
                                best = better(best, c);
                            }
                        }
                    }
                }
                (best, count, seen)
            })
            .reduce(
                || (None, 0, 0),
                |a, b| (better(a.0, b.0), a.1 + b.1, a.2 + b.2),
            ),
        ScanMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = None;
            let mut count = 0;
            let mut seen = 0;
            if rows >= 2 && cols >= 2 {
                for _ in 0..samples {
                    let i = rng.gen_range(0..rows);
                    let i2 = (i + rng.gen_range(1..rows)) % rows;
                    let j = rng.gen_range(0..cols);
                    let j2 = (j + rng.gen_range(1..cols)) % cols;
                    seen += 1;
                    let c = candidate([i, i2, j, j2]);
                    if c.is_some() {
                        count += 1;
                        best = better(best, c);
                    }
                }
            }
            (best, count, seen)
        }
    };

    let (min_delta, witness) = match best {
        Some((delta, [i, i2, j, j2])) if delta.is_negative() => {
            let mut quad = ExchangeQuad::new(i, i2, j, j2, Rational::zero());
            quad.amount = quad.admissible_amount(plan, capacity);
            (delta, Some(quad))
        }
        Some((delta, _)) => (delta, None),
        None => (Rational::zero(), None),
    };
    ExchangeScan {
        min_delta,
        witness,
        admissible_quads,
        quads_examined: examined,
        mode,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ratio, CostKind, DiscreteMarginal, Domain, Grid};

    struct Setup {
        grid: Grid,
        f: DiscreteMarginal,
        cost: CostMatrix,
        cap: CapacityMatrix,
    }

    fn setup(n: usize, density: Rational) -> Setup {
        let grid = Grid::new(1, n, Domain::Centered).unwrap();
        Setup {
            grid,
            f: DiscreteMarginal::uniform(grid),
            cost: CostMatrix::build(&grid, &grid, CostKind::NegDot).unwrap(),
            cap: CapacityMatrix::constant(&grid, &grid, density).unwrap(),
        }
    }

    #[test]
    fn exchange_turns_product_into_diagonal() {
        let s = setup(2, ratio(2, 1));
        let product = TransportPlan::product(&s.f, &s.f);
        let quad = ExchangeQuad::new(0, 1, 0, 1, ratio(1, 4));
        let diag = apply_exchange(&product, &quad, &s.cap).unwrap();
        assert_eq!(diag.get(0, 0), &ratio(1, 2));
        assert_eq!(diag.get(0, 1), &ratio(0, 1));
        assert_eq!(quad.unit_delta(&s.cost), ratio(-1, 4));
        let before = product.total_cost(&s.cost).unwrap();
        let after = diag.total_cost(&s.cost).unwrap();
        assert_eq!(&after - &before, ratio(-1, 16));
        assert_eq!(after, ratio(-1, 16));

        // Reversed orientation undoes it.
        let back = ExchangeQuad::new(0, 1, 1, 0, ratio(1, 4));
        let restored = apply_exchange(&diag, &back, &s.cap).unwrap();
        assert_eq!(restored, product);
        assert_eq!(restored.total_cost(&s.cost).unwrap() - after, ratio(1, 16));
    }

    #[test]
    fn zero_amount_is_identity() {
        let s = setup(3, ratio(2, 1));
        let product = TransportPlan::product(&s.f, &s.f);
        let out = apply_exchange(
            &product,
            &ExchangeQuad::new(0, 2, 1, 0, ratio(0, 1)),
            &s.cap,
        )
        .unwrap();
        assert_eq!(out, product);
    }

    #[test]
    fn rejects_bad_amounts() {
        let s = setup(2, ratio(2, 1));
        let product = TransportPlan::product(&s.f, &s.f);
        assert!(matches!(
            apply_exchange(
                &product,
                &ExchangeQuad::new(0, 1, 0, 1, ratio(1, 3)),
                &s.cap
            ),
            Err(StructureError::InfeasibleAmount { .. })
        ));
        assert_eq!(
            apply_exchange(
                &product,
                &ExchangeQuad::new(0, 0, 0, 1, ratio(0, 1)),
                &s.cap
            ),
            Err(StructureError::DegenerateQuad)
        );
        assert_eq!(
            apply_exchange(
                &product,
                &ExchangeQuad::new(0, 1, 0, 1, ratio(-1, 8)),
                &s.cap
            ),
            Err(StructureError::NegativeAmount)
        );
    }

    #[test]
    fn scan_finds_product_witness() {
        let s = setup(2, ratio(2, 1));
        let product = TransportPlan::product(&s.f, &s.f);
        let scan = scan_exchanges(&product, &s.cost, &s.cap);
        assert_eq!(scan.min_delta, ratio(-1, 4));
        let w = scan.witness.unwrap();
        assert_eq!([w.i, w.i2, w.j, w.j2], [0, 1, 0, 1]);
        assert_eq!(w.amount, ratio(1, 4));
        assert_eq!(scan.quads_examined, 4);
    }

    #[test]
    fn density_one_admits_nothing() {
        let s = setup(4, ratio(1, 1));
        let product = TransportPlan::product(&s.f, &s.f);
        let scan = scan_exchanges(&product, &s.cost, &s.cap);
        assert_eq!(scan.admissible_quads, 0);
        assert_eq!(scan.min_delta, ratio(0, 1));
        assert!(scan.witness.is_none());
        assert!(scan.certifies_optimality());
    }

    #[test]
    fn sampled_scan_is_deterministic() {
        let s = setup(20, ratio(2, 1));
        let product = TransportPlan::product(&s.f, &s.f);
        let scan = scan_exchanges(&product, &s.cost, &s.cap);
        assert!(matches!(scan.mode, ScanMode::Sampled { .. }));
        assert_eq!(scan.quads_examined, SAMPLED_SCAN_QUADS);
        assert!(scan.min_delta.is_negative());
        let again = scan_exchanges(&product, &s.cost, &s.cap);
        assert_eq!(scan, again);
        let _ = s.grid;
    }
}
