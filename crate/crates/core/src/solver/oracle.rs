//! Cycle-cancelling oracle, independent of the simplex.
//!
//! Starts from any feasible plan (max-flow), then repeatedly applies the most
//! improving feasible 2×2 exchange and, when none is left, cancels a negative
//! cycle of the residual graph found by Bellman–Ford. All arithmetic is in
//! `Rational`; every step lowers the cost by a multiple of a fixed lattice
//! unit, so the loop terminates at an optimum. A final pass pushes flow
//! around cycles of partial cells until they form a forest, which turns the
//! optimum into a vertex without changing its cost.

use num_traits::{Signed, Zero};

use super::maxflow::bipartite_max_flow;
use super::{check_balanced, SolveError, SolveResult, SolverTag};
use crate::model::{Matrix, Problem, Rational, TransportPlan};

/// Largest `rows * cols` accepted by [`brute_force_solve`].
pub const BRUTE_FORCE_MAX_PAIRS: usize = 36;

struct Work<'a> {
    rows: usize,
    cols: usize,
    cost: &'a Matrix<Rational>,
    cap: &'a Matrix<Rational>,
    mass: Matrix<Rational>,
}

/// Edge of a bipartite cycle: `(row, col, increase)`.
type CycleEdge = (usize, usize, bool);

impl Work<'_> {
    fn slack(&self, i: usize, j: usize) -> Rational {
        &self.cap[(i, j)] - &self.mass[(i, j)]
    }

    /// Most negative per-unit bracket among exchanges that admit a positive
    /// amount, with that largest admissible amount.
    fn best_exchange(&self) -> Option<([usize; 4], Rational)> {
        let mut best: Option<(Rational, [usize; 4], Rational)> = None;
        for i in 0..self.rows {
            for i2 in 0..self.rows {
                if i == i2 {
                    continue;
                }
                for j in 0..self.cols {
                    for j2 in 0..self.cols {
                        if j == j2 {
                            continue;
                        }
                        let bracket = &self.cost[(i, j)] + &self.cost[(i2, j2)]
                            - &self.cost[(i, j2)]
                            - &self.cost[(i2, j)];
                        if !bracket.is_negative() {
                            continue;
                        }
                        if best.as_ref().is_some_and(|(b, _, _)| bracket >= *b) {
                            continue;
                        }
                        let amount = [
                            self.slack(i, j),
                            self.slack(i2, j2),
                            self.mass[(i, j2)].clone(),
                            self.mass[(i2, j)].clone(),
                        ]
                        .into_iter()
                        .min()
                        .expect("four candidates");
                        if amount.is_positive() {
                            best = Some((bracket, [i, i2, j, j2], amount));
                        }
                    }
                }
            }
        }
        best.map(|(_, quad, amount)| (quad, amount))
    }

    /// A negative-cost cycle in the residual graph, if any.
    fn negative_cycle(&self) -> Option<Vec<CycleEdge>> {
        // Nodes: rows 0..rows, columns rows..rows+cols.
        let n = self.rows + self.cols;
        let mut edges: Vec<(usize, usize, Rational, CycleEdge)> = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = &self.cost[(i, j)];
                if self.slack(i, j).is_positive() {
                    edges.push((i, self.rows + j, c.clone(), (i, j, true)));
                }
                if self.mass[(i, j)].is_positive() {
                    edges.push((self.rows + j, i, -c, (i, j, false)));
                }
            }
        }
        let mut dist = vec![Rational::zero(); n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut touched = None;
        for _ in 0..n {
            touched = None;
            for (k, (a, b, w, _)) in edges.iter().enumerate() {
                let cand = &dist[*a] + w;
                if cand < dist[*b] {
                    dist[*b] = cand;
                    pred[*b] = Some(k);
                    touched = Some(*b);
                }
            }
            touched?;
        }
        // Still relaxing after n rounds: walking back n steps lands on a cycle.
        let mut v = touched?;
        for _ in 0..n {
            v = edges[pred[v].expect("relaxed node has a predecessor")].0;
        }
        let start = v;
        let mut cycle = Vec::new();
        loop {
            let k = pred[v].expect("cycle node has a predecessor");
            cycle.push(edges[k].3);
            v = edges[k].0;
            if v == start {
                break;
            }
        }
        cycle.reverse();
        Some(cycle)
    }

    fn push(&mut self, cycle: &[CycleEdge], amount: &Rational) {
        for &(i, j, up) in cycle {
            if up {
                self.mass[(i, j)] += amount;
            } else {
                self.mass[(i, j)] -= amount;
            }
        }
    }

    fn bottleneck(&self, cycle: &[CycleEdge]) -> Rational {
        cycle
            .iter()
            .map(|&(i, j, up)| {
                if up {
                    self.slack(i, j)
                } else {
                    self.mass[(i, j)].clone()
                }
            })
            .min()
            .expect("non-empty cycle")
    }

    fn cycle_cost(&self, cycle: &[CycleEdge]) -> Rational {
        cycle
            .iter()
            .map(|&(i, j, up)| {
                let c = self.cost[(i, j)].clone();
                if up {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    fn is_partial(&self, i: usize, j: usize) -> bool {
        self.mass[(i, j)].is_positive() && self.slack(i, j).is_positive()
    }

    /// A cycle made only of partial cells, found by growing a spanning forest
    /// and stopping at the first edge that closes a loop.
    fn partial_cycle(&self) -> Option<Vec<CycleEdge>> {
        let n = self.rows + self.cols;
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(comp: &mut [usize], v: usize) -> usize {
            let mut r = v;
            while comp[r] != r {
                r = comp[r];
            }
            comp[v] = r;
            r
        }
        let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.is_partial(i, j) {
                    continue;
                }
                let (a, b) = (i, self.rows + j);
                let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
                if ra != rb {
                    comp[ra] = rb;
                    adj[a].push((b, i, j));
                    adj[b].push((a, i, j));
                    continue;
                }
                // Path b -> a in the forest, then close with edge (a, b).
                let mut prev: Vec<Option<(usize, usize, usize)>> = vec![None; n];
                let mut seen = vec![false; n];
                let mut queue = std::collections::VecDeque::from([b]);
                seen[b] = true;
                while let Some(v) = queue.pop_front() {
                    if v == a {
                        break;
                    }
                    for &(w, ei, ej) in &adj[v] {
                        if !seen[w] {
                            seen[w] = true;
                            prev[w] = Some((v, ei, ej));
                            queue.push_back(w);
                        }
                    }
                }
                // Traverse a -> b along edge (i, j) (row to column: increase),
                // then b -> ... -> a back through the forest.
                let mut cycle = vec![(i, j, true)];
                let mut path = Vec::new();
                let mut v = a;
                while v != b {
                    let (u, ei, ej) = prev[v].expect("a and b are connected");
                    // Edge walked u -> v on the way back to a.
                    path.push((ei, ej, u < self.rows));
                    v = u;
                }
                path.reverse();
                cycle.extend(path);
                return Some(cycle);
            }
        }
        None
    }

    fn reduce_to_vertex(&mut self) -> usize {
        let mut pushes = 0;
        while let Some(mut cycle) = self.partial_cycle() {
            if self.cycle_cost(&cycle).is_positive() {
                for e in &mut cycle {
                    e.2 = !e.2;
                }
            }
            let amount = self.bottleneck(&cycle);
            self.push(&cycle, &amount);
            pushes += 1;
        }
        pushes
    }
}

/// Independent exact solver for instances with at most
/// [`BRUTE_FORCE_MAX_PAIRS`] cell pairs.
pub fn brute_force_solve(problem: &Problem) -> Result<SolveResult, SolveError> {
    let (rows, cols) = problem.shape();
    if rows * cols > BRUTE_FORCE_MAX_PAIRS {
        return Err(SolveError::TooLarge {
            pairs: rows * cols,
            limit: BRUTE_FORCE_MAX_PAIRS,
        });
    }
    check_balanced(problem)?;

    let cap = problem.capacity.bounds();
    let (routed, flow) = bipartite_max_flow(problem.f.mass(), problem.g.mass(), cap.as_slice());
    if &routed != problem.f.total() {
        return Err(SolveError::Infeasible);
    }
    let mut work = Work {
        rows,
        cols,
        cost: problem.cost.entries(),
        cap,
        mass: Matrix::from_vec(rows, cols, flow).expect("one flow per pair"),
    };

    let mut iterations = 0;
    loop {
        if let Some(([i, i2, j, j2], amount)) = work.best_exchange() {
            work.push(
                &[(i, j, true), (i2, j2, true), (i, j2, false), (i2, j, false)],
                &amount,
            );
        } else if let Some(cycle) = work.negative_cycle() {
            let amount = work.bottleneck(&cycle);
            work.push(&cycle, &amount);
        } else {
            break;
        }
        iterations += 1;
    }
    iterations += work.reduce_to_vertex();

    let plan = TransportPlan::new(*problem.grid_x(), *problem.grid_y(), work.mass)?;
    let optimal_value = plan.total_cost(&problem.cost)?;
    Ok(SolveResult {
        plan,
        optimal_value,
        is_vertex: true,
        iterations,
        solver: SolverTag::BruteForce,
    })
}
