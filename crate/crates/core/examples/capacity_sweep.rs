// Optimal value as the capacity density grows from 1 (forced product plan)
// to n (the unconstrained monotone coupling).
//
// `cargo run --release --example capacity_sweep -- [n]`

use anyhow::{ensure, Result};
use capot::model::format_rational;
use capot::{
    feasibility_exists, ratio, solve, CostKind, Domain, Problem, Rational, SaturationPattern,
};

pub fn run_example(n: usize) -> Result<Vec<(Rational, Rational)>> {
    let n_i64 = i64::try_from(n)?;
    let mut densities = vec![
        ratio(1, 2),
        ratio(1, 1),
        ratio(4, 3),
        ratio(3, 2),
        ratio(2, 1),
    ];
    densities.extend([ratio(3, 1), ratio(4, 1), ratio(n_i64, 1)]);
    densities.dedup();

    let mut values = Vec::new();
    println!(
        "{:>8} {:>14} {:>12} {:>8}",
        "density", "value", "approx", "partial"
    );
    for density in densities {
        let problem = Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, density.clone())?;
        if !feasibility_exists(&problem)? {
            println!("{:>8} {:>14}", format_rational(&density), "infeasible");
            continue;
        }
        let result = solve(&problem)?;
        let pattern = SaturationPattern::classify(&result.plan, &problem.capacity)?;
        println!(
            "{:>8} {:>14} {:>12.8} {:>8}",
            format_rational(&density),
            format_rational(&result.optimal_value),
            capot::runner::approx(&result.optimal_value),
            pattern.partial_count()
        );
        values.push((density, result.optimal_value));
    }

    // Raising the bound only enlarges the feasible set.
    ensure!(
        values.windows(2).all(|w| w[1].1 <= w[0].1),
        "values not monotone"
    );
    let n2 = ratio(n_i64 * n_i64, 1);
    let monotone = -(Rational::from_integer(1.into()) - ratio(1, 1) / n2) / ratio(12, 1);
    ensure!(
        values.last().map(|v| &v.1) == Some(&monotone),
        "unconstrained value off"
    );
    Ok(values)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let n = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(16);
    run_example(n)?;
    Ok(())
}
