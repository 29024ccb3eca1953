// The densities 3 and 3/2 are Hölder conjugates: the complement of one
// optimal saturation set, reflected in y and scaled by 1/2, is optimal for
// the other. Writes both saturation images.
//
// `cargo run --release --example conjugate_symmetry -- [n] [out_dir]`

use std::path::Path;

use anyhow::{ensure, Result};
use capot::model::format_rational;
use capot::runner::write_saturation_pgm;
use capot::structure::{conjugate_problem, conjugate_transform, ConjugatePair};
use capot::{ratio, solve, CellState, CostKind, Domain, Problem, SaturationPattern};

pub struct Mirror {
    /// Non-partial pixels where the 3/2 image differs from the reflected
    /// complement of the 3 image.
    pub mismatches: usize,
    pub partial: (usize, usize),
}

pub fn run_example(n: usize, out_dir: Option<&Path>) -> Result<Mirror> {
    let pair = ConjugatePair::new(ratio(3, 1))?;
    let p = Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, pair.p().clone())?;
    let q = conjugate_problem(&p, &pair)?;

    let sol_p = solve(&p)?;
    let sol_q = solve(&q)?;
    println!(
        "value(3) = {}, value(3/2) = {}",
        format_rational(&sol_p.optimal_value),
        format_rational(&sol_q.optimal_value)
    );
    ensure!(sol_q.optimal_value == pair.value_ratio() * &sol_p.optimal_value);

    let image = conjugate_transform(&p, &sol_p.plan, &pair)?;
    ensure!(q.is_feasible_plan(&image)?);
    ensure!(
        image.total_cost(&q.cost)? == sol_q.optimal_value,
        "image is not optimal"
    );

    let pat_p = SaturationPattern::classify(&sol_p.plan, &p.capacity)?;
    let pat_q = SaturationPattern::classify(&sol_q.plan, &q.capacity)?;
    let mut mismatches = 0;
    for i in 0..n {
        for j in 0..n {
            let a = pat_p.get(i, n - 1 - j);
            let b = pat_q.get(i, j);
            if a == CellState::Partial || b == CellState::Partial {
                continue;
            }
            if (a == CellState::Saturated) == (b == CellState::Saturated) {
                mismatches += 1;
            }
        }
    }
    println!(
        "partial cells: {} and {}; mirror mismatches off the partial cells: {mismatches}",
        pat_p.partial_count(),
        pat_q.partial_count()
    );

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        write_saturation_pgm(&pat_p, &dir.join("saturation_3.pgm"))?;
        write_saturation_pgm(&pat_q, &dir.join("saturation_3_2.pgm"))?;
        println!("wrote images to {}", dir.display());
    }
    Ok(Mirror {
        mismatches,
        partial: (pat_p.partial_count(), pat_q.partial_count()),
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().map(|a| a.parse()).transpose()?.unwrap_or(64);
    let dir = args.next();
    run_example(n, dir.as_deref().map(Path::new))?;
    Ok(())
}
