//! Exact minimisation of transport cost under marginal and capacity constraints.
//!
//! [`solve`] runs the bounded transportation simplex on integer data obtained
//! by scaling every mass by the common denominator of the masses and every
//! cost by the common denominator of the costs. The scaled problem has the
//! same vertices, and the network matrix is totally unimodular, so every
//! pivot stays on the integer lattice. `i128` is used whenever the scaled
//! magnitudes leave enough headroom, `BigInt` otherwise.
//!
//! [`brute_force_solve`] is an independent oracle for small instances.

mod maxflow;
mod oracle;
mod scalar;
mod simplex;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive};
use thiserror::Error;

use crate::model::{lcm_of_denominators, Matrix, ModelError, Problem, Rational, TransportPlan};

pub use oracle::{brute_force_solve, BRUTE_FORCE_MAX_PAIRS};
pub use simplex::PivotRule;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("marginals are unbalanced: supply {supply} vs demand {demand}")]
    Unbalanced {
        supply: Box<Rational>,
        demand: Box<Rational>,
    },
    #[error("no plan satisfies the marginals and capacity bounds")]
    Infeasible,
    #[error("instance has {pairs} cell pairs, brute force is limited to {limit}")]
    TooLarge { pairs: usize, limit: usize },
    #[error("value {0} cannot be represented in float64 mode")]
    NotRepresentable(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Arithmetic {
    #[default]
    Exact,
    /// Non-certifying; for rendering grids too large for exact pivots.
    Float64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub arithmetic: Arithmetic,
    pub pivot_rule: PivotRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverTag {
    NetworkSimplex,
    NetworkSimplexFloat,
    BruteForce,
}

impl fmt::Display for SolverTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverTag::NetworkSimplex => "network_simplex",
            SolverTag::NetworkSimplexFloat => "network_simplex_f64",
            SolverTag::BruteForce => "brute_force",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub plan: TransportPlan,
    pub optimal_value: Rational,
    /// The plan is a basic feasible solution: its partial cells form a forest.
    pub is_vertex: bool,
    pub iterations: usize,
    pub solver: SolverTag,
}

fn check_balanced(problem: &Problem) -> Result<(), SolveError> {
    if problem.f.total() != problem.g.total() {
        return Err(SolveError::Unbalanced {
            supply: Box::new(problem.f.total().clone()),
            demand: Box::new(problem.g.total().clone()),
        });
    }
    Ok(())
}

/// Integer image of a problem: `mass * mass_unit` and `cost * cost_unit`.
struct Scaled {
    mass_unit: BigInt,
    supply: Vec<BigInt>,
    demand: Vec<BigInt>,
    cap: Vec<BigInt>,
    cost: Vec<BigInt>,
}

impl Scaled {
    fn new(problem: &Problem) -> Self {
        let masses = problem
            .f
            .mass()
            .iter()
            .chain(problem.g.mass())
            .chain(problem.capacity.bounds().iter());
        let mass_unit = lcm_of_denominators(masses);
        let cost_unit = lcm_of_denominators(problem.cost.entries().iter());
        let scale = |v: &Rational, unit: &BigInt| (v * unit).to_integer();
        Self {
            supply: problem
                .f
                .mass()
                .iter()
                .map(|m| scale(m, &mass_unit))
                .collect(),
            demand: problem
                .g
                .mass()
                .iter()
                .map(|m| scale(m, &mass_unit))
                .collect(),
            cap: problem
                .capacity
                .bounds()
                .iter()
                .map(|u| scale(u, &mass_unit))
                .collect(),
            cost: problem
                .cost
                .entries()
                .iter()
                .map(|c| scale(c, &cost_unit))
                .collect(),
            mass_unit,
        }
    }

    /// Potentials and reduced costs are sums of at most `nodes + 2` costs, and
    /// flows never exceed a capacity or the total mass.
    fn fits_i128(&self) -> bool {
        let limit = BigInt::one() << 120;
        let nodes = BigInt::from(self.supply.len() + self.demand.len() + 3);
        let max_abs = |v: &[BigInt]| v.iter().map(|x| x.abs()).max().unwrap_or_default();
        let total: BigInt = self.supply.iter().sum();
        max_abs(&self.cost) * &nodes < limit
            && max_abs(&self.cap) < limit
            && total * BigInt::from(4) < limit
    }

    fn instance<T>(&self, conv: impl Fn(&BigInt) -> T) -> simplex::Instance<T> {
        simplex::Instance {
            supply: self.supply.iter().map(&conv).collect(),
            demand: self.demand.iter().map(&conv).collect(),
            cap: self.cap.iter().map(&conv).collect(),
            cost: self.cost.iter().map(&conv).collect(),
        }
    }

    fn unscale(&self, flow: &BigInt) -> Rational {
        Rational::new(flow.clone(), self.mass_unit.clone())
    }
}

fn to_i128(v: &BigInt) -> i128 {
    v.to_i128().expect("checked by fits_i128")
}

/// True iff some plan meets both marginals and every capacity bound.
pub fn feasibility_exists(problem: &Problem) -> Result<bool, SolveError> {
    check_balanced(problem)?;
    let scaled = Scaled::new(problem);
    let total: BigInt = scaled.supply.iter().sum();
    let routed = if scaled.fits_i128() {
        let inst = scaled.instance(to_i128);
        BigInt::from(maxflow::bipartite_max_flow(&inst.supply, &inst.demand, &inst.cap).0)
    } else {
        let inst = scaled.instance(BigInt::clone);
        maxflow::bipartite_max_flow(&inst.supply, &inst.demand, &inst.cap).0
    };
    Ok(routed == total)
}

/// Exact optimal vertex of the capacity-constrained transport problem.
pub fn solve(problem: &Problem) -> Result<SolveResult, SolveError> {
    solve_with(problem, &SolveOptions::default())
}

pub fn solve_with(problem: &Problem, options: &SolveOptions) -> Result<SolveResult, SolveError> {
    check_balanced(problem)?;
    let (rows, cols) = problem.shape();
    let rule = options.pivot_rule;
    let (masses, iterations, solver) = match options.arithmetic {
        Arithmetic::Exact => {
            let scaled = Scaled::new(problem);
            let (flow, iterations) = if scaled.fits_i128() {
                let sol = simplex::solve(&scaled.instance(to_i128), &1, rule)
                    .map_err(|_| SolveError::Infeasible)?;
                let flow: Vec<BigInt> = sol.flow.iter().map(|&f| BigInt::from(f)).collect();
                (flow, sol.phase1_pivots + sol.phase2_pivots)
            } else {
                let sol = simplex::solve(&scaled.instance(BigInt::clone), &BigInt::one(), rule)
                    .map_err(|_| SolveError::Infeasible)?;
                (sol.flow, sol.phase1_pivots + sol.phase2_pivots)
            };
            let masses = flow.iter().map(|f| scaled.unscale(f)).collect();
            (masses, iterations, SolverTag::NetworkSimplex)
        }
        Arithmetic::Float64 => {
            let inst = float_instance(problem)?;
            let sol = simplex::solve(&inst, &1.0, rule).map_err(|_| SolveError::Infeasible)?;
            let masses = sol
                .flow
                .iter()
                .map(|&f| {
                    Rational::from_f64(f.max(0.0))
                        .ok_or_else(|| SolveError::NotRepresentable(f.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (
                masses,
                sol.phase1_pivots + sol.phase2_pivots,
                SolverTag::NetworkSimplexFloat,
            )
        }
    };
    let mass = Matrix::from_vec(rows, cols, masses).expect("one flow per cell pair");
    let plan = TransportPlan::new(*problem.grid_x(), *problem.grid_y(), mass)?;
    let optimal_value = plan.total_cost(&problem.cost)?;
    Ok(SolveResult {
        plan,
        optimal_value,
        is_vertex: true,
        iterations,
        solver,
    })
}

fn float_instance(problem: &Problem) -> Result<simplex::Instance<f64>, SolveError> {
    let conv = |v: &Rational| {
        v.to_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| SolveError::NotRepresentable(v.to_string()))
    };
    let collect = |vals: &mut dyn Iterator<Item = &Rational>| -> Result<Vec<f64>, SolveError> {
        vals.map(conv).collect()
    };
    // Phase 1 compares leftover artificial flow against F64_EPS, which absorbs
    // any rounding gap between the two marginal totals.
    let supply = collect(&mut problem.f.mass().iter())?;
    let demand = collect(&mut problem.g.mass().iter())?;
    Ok(simplex::Instance {
        supply,
        demand,
        cap: collect(&mut problem.capacity.bounds().iter())?,
        cost: collect(&mut problem.cost.entries().iter())?,
    })
}

/// Number of cells strictly between their bounds; a vertex has at most
/// `rows + cols - 1` of them.
pub fn vertex_partial_bound(problem: &Problem) -> usize {
    let (rows, cols) = problem.shape();
    rows + cols - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ratio, CapacityMatrix, CostKind, Domain, SaturationPattern};

    fn centered(n: usize, density: Rational) -> Problem {
        Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, density).unwrap()
    }

    #[test]
    fn feasibility_examples() {
        assert!(feasibility_exists(&centered(3, ratio(1, 1))).unwrap());
        assert!(!feasibility_exists(&centered(3, ratio(1, 2))).unwrap());

        let p = centered(2, ratio(1, 1));
        let diag = Matrix::from_vec(
            2,
            2,
            vec![ratio(1, 2), ratio(0, 1), ratio(0, 1), ratio(1, 2)],
        )
        .unwrap();
        let p = p
            .with_capacity(CapacityMatrix::from_bounds(diag).unwrap())
            .unwrap();
        assert!(feasibility_exists(&p).unwrap());
    }

    #[test]
    fn solve_examples() {
        let r = solve(&centered(2, ratio(1, 1))).unwrap();
        assert_eq!(r.optimal_value, ratio(0, 1));
        assert!(r.plan.mass().iter().all(|m| *m == ratio(1, 4)));

        assert_eq!(
            solve(&centered(2, ratio(2, 1))).unwrap().optimal_value,
            ratio(-1, 16)
        );
        assert_eq!(
            solve(&centered(4, ratio(4, 1))).unwrap().optimal_value,
            ratio(-5, 64)
        );
        assert_eq!(
            solve(&centered(4, ratio(2, 1))).unwrap().optimal_value,
            ratio(-1, 16)
        );
    }

    #[test]
    fn infeasible_and_unbalanced() {
        assert_eq!(
            solve(&centered(3, ratio(1, 2))),
            Err(SolveError::Infeasible)
        );

        let p = centered(2, ratio(2, 1));
        let g = crate::model::DiscreteMarginal::new(*p.grid_y(), vec![ratio(1, 2), ratio(1, 1)])
            .unwrap();
        let p = Problem::new(p.f.clone(), g, p.cost.clone(), p.capacity.clone()).unwrap();
        assert!(matches!(solve(&p), Err(SolveError::Unbalanced { .. })));
        assert!(matches!(
            feasibility_exists(&p),
            Err(SolveError::Unbalanced { .. })
        ));
    }

    #[test]
    fn result_is_feasible_vertex() {
        for n in 2..=6 {
            for d in [ratio(1, 1), ratio(3, 2), ratio(2, 1), ratio(3, 1)] {
                let p = centered(n, d);
                let r = solve(&p).unwrap();
                let rep = r.plan.check_feasible(&p.f, &p.g, &p.capacity).unwrap();
                assert!(rep.is_feasible);
                assert_eq!(r.optimal_value, r.plan.total_cost(&p.cost).unwrap());
                let pat = SaturationPattern::classify(&r.plan, &p.capacity).unwrap();
                assert!(pat.partial_count() <= vertex_partial_bound(&p));
            }
        }
    }

    #[test]
    fn pure_bland_reaches_same_value() {
        let opts = SolveOptions {
            pivot_rule: PivotRule::Bland,
            ..SolveOptions::default()
        };
        for n in [3, 6] {
            let p = centered(n, ratio(3, 1));
            assert_eq!(
                solve_with(&p, &opts).unwrap().optimal_value,
                solve(&p).unwrap().optimal_value
            );
        }
    }

    #[test]
    fn bigint_backend_agrees_with_i128() {
        let p = centered(4, ratio(3, 2));
        let scaled = Scaled::new(&p);
        let rule = PivotRule::Dantzig;
        let a = simplex::solve(&scaled.instance(to_i128), &1, rule).unwrap();
        let b = simplex::solve(&scaled.instance(BigInt::clone), &BigInt::one(), rule).unwrap();
        let a: Vec<BigInt> = a.flow.into_iter().map(BigInt::from).collect();
        assert_eq!(a, b.flow);
    }

    #[test]
    fn huge_values_use_bigint() {
        let p = centered(3, ratio(2, 1));
        let huge = Rational::from_integer(BigInt::one() << 130);
        let p = p.with_cost(p.cost.scaled(&huge)).unwrap();
        assert!(!Scaled::new(&p).fits_i128());
        let r = solve(&p).unwrap();
        let base = solve(&centered(3, ratio(2, 1))).unwrap();
        assert_eq!(r.optimal_value, base.optimal_value * huge);
    }

    #[test]
    fn float_mode_is_close() {
        let p = centered(8, ratio(3, 1));
        let exact = solve(&p).unwrap().optimal_value.to_f64().unwrap();
        let opts = SolveOptions {
            arithmetic: Arithmetic::Float64,
            ..SolveOptions::default()
        };
        let approx = solve_with(&p, &opts).unwrap();
        assert_eq!(approx.solver, SolverTag::NetworkSimplexFloat);
        assert!((approx.optimal_value.to_f64().unwrap() - exact).abs() < 1e-9);
    }
}
