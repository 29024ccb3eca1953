use capot::model::lcm_of_denominators;
use capot::structure::{
    apply_exchange, conjugate_problem, conjugate_transform, cost_complement_identity,
    ConjugatePair, ExchangeQuad,
};
use capot::{
    brute_force_solve, ratio, solve, CapacityMatrix, CellState, CostKind, CostMatrix,
    DiscreteMarginal, Domain, Grid, Matrix, Problem, Rational, SaturationPattern, SolveError,
    TransportPlan,
};
use num_traits::Zero;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn density() -> impl Strategy<Value = Rational> {
    (4i64..=12, 2i64..=4).prop_map(|(n, d)| ratio(n, d))
}

/// Uniform centered problem with a random density and cost kind.
fn uniform_problem() -> impl Strategy<Value = Problem> {
    (2usize..=6, density(), prop::bool::ANY).prop_map(|(n, h, sq)| {
        let kind = if sq {
            CostKind::SqDist
        } else {
            CostKind::NegDot
        };
        Problem::uniform(1, n, Domain::Centered, kind, h).unwrap()
    })
}

/// Random weights, random integer costs and random bounds on a small grid.
fn weighted_problem() -> impl Strategy<Value = Problem> {
    (2usize..=5).prop_flat_map(|n| {
        (
            prop::collection::vec(1i64..=4, n),
            prop::collection::vec(1i64..=4, n),
            prop::collection::vec(-5i64..=5, n * n),
            prop::collection::vec(0i64..=6, n * n),
        )
            .prop_map(move |(f, g, c, u)| {
                let grid = Grid::new(1, n, Domain::Unit).unwrap();
                let f = DiscreteMarginal::from_weights(
                    grid,
                    f.into_iter().map(|w| ratio(w, 1)).collect(),
                )
                .unwrap();
                let g = DiscreteMarginal::from_weights(
                    grid,
                    g.into_iter().map(|w| ratio(w, 1)).collect(),
                )
                .unwrap();
                let cost = CostMatrix::custom(
                    Matrix::from_vec(n, n, c.into_iter().map(|v| ratio(v, 1)).collect()).unwrap(),
                );
                let cap = CapacityMatrix::from_bounds(
                    Matrix::from_vec(
                        n,
                        n,
                        u.into_iter().map(|v| ratio(v, 2 * n as i64)).collect(),
                    )
                    .unwrap(),
                )
                .unwrap();
                Problem::new(f, g, cost, cap).unwrap()
            })
    })
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplex_matches_oracle(p in weighted_problem()) {
        match (solve(&p), brute_force_solve(&p)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.optimal_value, b.optimal_value);
                prop_assert!(p.is_feasible_plan(&a.plan).unwrap());
            }
            (Err(SolveError::Infeasible), Err(SolveError::Infeasible)) => {}
            (a, b) => prop_assert!(false, "disagreement: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn optimum_is_a_feasible_vertex(p in uniform_problem()) {
        let r = solve(&p).unwrap();
        prop_assert!(p.is_feasible_plan(&r.plan).unwrap());
        let pattern = SaturationPattern::classify(&r.plan, &p.capacity).unwrap();
        let (rows, cols) = p.shape();
        prop_assert!(pattern.partial_count() < rows + cols);
    }

    #[test]
    fn cost_shift_moves_value_by_marginal_pairing(
        p in uniform_problem(),
        shifts in prop::collection::vec(small_rational(), 12),
    ) {
        let (rows, cols) = p.shape();
        let (a, b) = (&shifts[..rows], &shifts[6..6 + cols]);
        let shifted = p.with_cost(p.cost.shifted(a, b)).unwrap();
        let r = solve(&p).unwrap();
        let s = solve(&shifted).unwrap();
        prop_assert_eq!(
            s.optimal_value,
            &r.optimal_value + dot(p.f.mass(), a) + dot(p.g.mass(), b)
        );
        prop_assert_eq!(s.plan, r.plan);
    }

    #[test]
    fn positive_scaling_scales_value(p in uniform_problem(), k in (1i64..=9, 1i64..=5)) {
        let factor = ratio(k.0, k.1);
        let scaled = p.with_cost(p.cost.scaled(&factor)).unwrap();
        let r = solve(&p).unwrap();
        let s = solve(&scaled).unwrap();
        prop_assert_eq!(s.optimal_value, &r.optimal_value * &factor);
        prop_assert_eq!(s.plan, r.plan);
    }

    #[test]
    fn cost_is_linear_in_the_plan(p in uniform_problem(), t in 0i64..=8) {
        let alpha = ratio(t, 8);
        let product = TransportPlan::product(&p.f, &p.g);
        let opt = solve(&p).unwrap().plan;
        let mix = product.convex_combination(&opt, &alpha).unwrap();
        let lhs = mix.total_cost(&p.cost).unwrap();
        let rhs = &alpha * product.total_cost(&p.cost).unwrap()
            + (ratio(1, 1) - &alpha) * opt.total_cost(&p.cost).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn capacity_monotonicity(n in 2usize..=6, lo in density(), extra in (0i64..=8, 1i64..=4)) {
        let hi = &lo + ratio(extra.0, extra.1);
        let v = |h: &Rational| {
            solve(&Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, h.clone()).unwrap())
                .unwrap()
                .optimal_value
        };
        prop_assert!(v(&hi) <= v(&lo));
    }

    #[test]
    fn conjugate_values(n in 2usize..=8, p in (5i64..=20, 2i64..=4)) {
        let p = ratio(p.0, p.1);
        let pair = ConjugatePair::new(p.clone()).unwrap();
        let prob = Problem::uniform(1, n, Domain::Centered, CostKind::NegDot, p).unwrap();
        let conj = conjugate_problem(&prob, &pair).unwrap();
        let rp = solve(&prob).unwrap();
        let rq = solve(&conj).unwrap();
        prop_assert_eq!(&rq.optimal_value, &(pair.value_ratio() * &rp.optimal_value));
        let image = conjugate_transform(&prob, &rp.plan, &pair).unwrap();
        prop_assert!(conj.is_feasible_plan(&image).unwrap());
        prop_assert_eq!(image.total_cost(&conj.cost).unwrap(), rq.optimal_value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exchange_keeps_marginals(
        p in uniform_problem(),
        idx in (0usize..6, 0usize..6, 0usize..6, 0usize..6),
        t in 0i64..=4,
    ) {
        let (rows, cols) = p.shape();
        let (i, i2, j, j2) = (idx.0 % rows, idx.1 % rows, idx.2 % cols, idx.3 % cols);
        prop_assume!(i != i2 && j != j2);
        let plan = TransportPlan::product(&p.f, &p.g);
        let mut quad = ExchangeQuad::new(i, i2, j, j2, Rational::zero());
        let admissible = quad.admissible_amount(&plan, &p.capacity);
        quad.amount = admissible * ratio(t, 4);
        let out = apply_exchange(&plan, &quad, &p.capacity).unwrap();
        prop_assert_eq!(out.row_sums(), plan.row_sums());
        prop_assert_eq!(out.col_sums(), plan.col_sums());
        prop_assert!(p.is_feasible_plan(&out).unwrap());
        let delta = out.total_cost(&p.cost).unwrap() - plan.total_cost(&p.cost).unwrap();
        prop_assert_eq!(delta, &quad.amount * quad.unit_delta(&p.cost));
    }

    #[test]
    fn complement_identity_for_any_pattern(
        d in 1usize..=2,
        n in 1usize..=3,
        unit in prop::bool::ANY,
        bits in prop::collection::vec(prop::bool::ANY, 81),
    ) {
        let domain = if unit { Domain::Unit } else { Domain::Centered };
        let grid = Grid::new(d, n, domain).unwrap();
        let cells = grid.num_cells();
        let labels = Matrix::from_fn(cells, cells, |i, j| {
            if bits[(i * cells + j) % bits.len()] { CellState::Saturated } else { CellState::Empty }
        });
        let cost = CostMatrix::build(&grid, &grid, CostKind::NegDot).unwrap();
        let id = cost_complement_identity(&SaturationPattern::from_labels(labels), &cost, &grid, &grid)
            .unwrap();
        prop_assert!(id.holds);
        let half_sq = ratio(d as i64, 4);
        let expected = if unit { -half_sq } else { Rational::zero() };
        prop_assert_eq!(id.rhs, expected);
    }

    #[test]
    fn lcm_clears_denominators(values in prop::collection::vec(small_rational(), 0..10)) {
        let l = Rational::from_integer(lcm_of_denominators(&values));
        prop_assert!(values.iter().all(|v| (v * &l).is_integer()));
    }
}
