// A plan is optimal iff no feasible 2x2 exchange lowers its cost. The
// product plan fails the test; the solver's output passes it.

use anyhow::{ensure, Result};
use capot::model::format_rational;
use capot::structure::{apply_exchange, scan_exchanges};
use capot::{ratio, solve, CostKind, Domain, Problem, TransportPlan};

pub fn run_example() -> Result<()> {
    let problem = Problem::uniform(1, 2, Domain::Centered, CostKind::NegDot, ratio(2, 1))?;
    let product = TransportPlan::product(&problem.f, &problem.g);
    let scan = scan_exchanges(&product, &problem.cost, &problem.capacity);
    let witness = scan.witness.clone().expect("the product plan can improve");
    println!(
        "product plan: min delta {} per unit at ({}, {}, {}, {}), amount {}",
        format_rational(&scan.min_delta),
        witness.i,
        witness.i2,
        witness.j,
        witness.j2,
        format_rational(&witness.amount)
    );
    let improved = apply_exchange(&product, &witness, &problem.capacity)?;
    println!(
        "after the exchange: cost {}",
        format_rational(&improved.total_cost(&problem.cost)?)
    );

    for n in [4, 8, 12] {
        let problem = Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, ratio(3, 1))?;
        let result = solve(&problem)?;
        let scan = scan_exchanges(&result.plan, &problem.cost, &problem.capacity);
        println!(
            "n = {n}, density 3: {} admissible of {} quadruples, min delta {}",
            scan.admissible_quads,
            scan.quads_examined,
            format_rational(&scan.min_delta)
        );
        ensure!(
            scan.certifies_optimality(),
            "solver output admits an improving exchange"
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
