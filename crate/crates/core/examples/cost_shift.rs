// Squared distance and negative inner product give the same optimal plan:
// |x - y|^2 = 2 (-x.y) + |x|^2 + |y|^2, and the last two terms are fixed by
// the marginals.

use anyhow::{ensure, Result};
use capot::model::format_rational;
use capot::{ratio, solve, CostKind, Domain, Problem, Rational};

pub fn run_example() -> Result<()> {
    for n in [2, 4, 8] {
        let nd = Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, ratio(2, 1))?;
        let sq = Problem::uniform(1, n, Domain::Centered, CostKind::SqDist, ratio(2, 1))?;
        let (a, b) = (solve(&nd)?, solve(&sq)?);
        ensure!(a.plan == b.plan, "plans differ at n = {n}");

        let grid = nd.grid_x();
        let second_moment = |m: &[Rational]| -> Rational {
            m.iter()
                .enumerate()
                .map(|(i, w)| {
                    let x = grid.axis_midpoint(i);
                    w * &x * &x
                })
                .sum()
        };
        let moments = second_moment(nd.f.mass()) + second_moment(nd.g.mass());
        println!(
            "n = {n}: neg_dot {}, sq_dist {}, moments {}",
            format_rational(&a.optimal_value),
            format_rational(&b.optimal_value),
            format_rational(&moments)
        );
        ensure!(b.optimal_value == ratio(2, 1) * &a.optimal_value + moments);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
