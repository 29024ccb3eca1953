// Simplex against the cycle-cancelling oracle on every small instance,
// including random weighted marginals.

use anyhow::{ensure, Result};
use capot::model::format_rational;
use capot::{
    brute_force_solve, ratio, solve, CostKind, DiscreteMarginal, Domain, Grid, Problem, SolveError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<usize> {
    let densities = [
        ratio(1, 1),
        ratio(3, 2),
        ratio(2, 1),
        ratio(3, 1),
        ratio(4, 1),
    ];
    let mut checked = 0;
    for n in 2..=6 {
        for d in &densities {
            let p = Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, d.clone())?;
            let (fast, slow) = (solve(&p)?, brute_force_solve(&p)?);
            ensure!(
                fast.optimal_value == slow.optimal_value,
                "n = {n}, density {d}"
            );
            checked += 1;
        }
    }
    println!("{checked} uniform instances agree");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let n = rng.gen_range(2..=5);
        let grid = Grid::new(1, n, Domain::Unit)?;
        let weights =
            |rng: &mut ChaCha8Rng| (0..n).map(|_| ratio(rng.gen_range(1..=5), 1)).collect();
        let f = DiscreteMarginal::from_weights(grid, weights(&mut rng))?;
        let g = DiscreteMarginal::from_weights(grid, weights(&mut rng))?;
        let density = ratio(rng.gen_range(2..=8), 2);
        let base = Problem::uniform(1, n, Domain::Unit, CostKind::SqDist, density)?;
        let p = Problem::new(f, g, base.cost, base.capacity)?;
        match (solve(&p), brute_force_solve(&p)) {
            (Ok(a), Ok(b)) => {
                ensure!(a.optimal_value == b.optimal_value);
                println!("n = {n}: {}", format_rational(&a.optimal_value));
            }
            (Err(SolveError::Infeasible), Err(SolveError::Infeasible)) => {
                println!("n = {n}: infeasible")
            }
            (a, b) => anyhow::bail!("solvers disagree: {a:?} vs {b:?}"),
        }
        checked += 1;
    }
    Ok(checked)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
