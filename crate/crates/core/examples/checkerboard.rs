// Density 2 on the centered segment: the solver's optimum costs -1/16 at
// every even resolution and matches the checkerboard reference plan.
//
// `cargo run --release --example checkerboard -- [n] [out.pgm]`

use anyhow::{ensure, Result};
use capot::model::format_rational;
use capot::runner::write_saturation_pgm;
use capot::structure::reference_checkerboard;
use capot::{ratio, solve, CostKind, Domain, Problem, SaturationPattern};

pub fn run_example(n: usize) -> Result<SaturationPattern> {
    let problem = Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, ratio(2, 1))?;
    let result = solve(&problem)?;
    let reference = reference_checkerboard(n)?;
    let reference_cost = reference.total_cost(&problem.cost)?;
    println!(
        "n = {n}: optimal value {}, checkerboard cost {}",
        format_rational(&result.optimal_value),
        format_rational(&reference_cost)
    );
    ensure!(result.optimal_value == ratio(-1, 16), "value is not -1/16");
    ensure!(
        reference_cost == result.optimal_value,
        "reference plan is not optimal"
    );
    Ok(SaturationPattern::classify(
        &result.plan,
        &problem.capacity,
    )?)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().map(|a| a.parse()).transpose()?.unwrap_or(64);
    let pattern = run_example(n)?;
    if let Some(path) = args.next() {
        write_saturation_pgm(&pattern, path.as_ref())?;
        println!("wrote {path}");
    }
    Ok(())
}
