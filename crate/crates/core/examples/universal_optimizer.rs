// On the centered square, density 2: fill every pair with <x, y> > 0 and
// compare against the solver.
//
// `cargo run --release --example universal_optimizer -- [n]`

use anyhow::{ensure, Result};
use capot::model::format_rational;
use capot::structure::reference_sign_plan;
use capot::{ratio, solve, CostKind, Domain, Problem, Rational};

pub fn run_example(n: usize) -> Result<Rational> {
    let problem = Problem::uniform(2, n, Domain::Centered, CostKind::NegDot, ratio(2, 1))?;
    let plan = reference_sign_plan(2, n)?;
    ensure!(problem.is_feasible_plan(&plan)?);
    let sign_cost = plan.total_cost(&problem.cost)?;
    let result = solve(&problem)?;
    println!(
        "{}x{} cells per side: sign plan {}, solver {}",
        n,
        n,
        format_rational(&sign_cost),
        format_rational(&result.optimal_value)
    );
    ensure!(
        sign_cost == result.optimal_value,
        "sign plan is not optimal"
    );
    Ok(sign_cost)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let n = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(4);
    run_example(n)?;
    Ok(())
}
