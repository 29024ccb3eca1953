//! Bounded-variable transportation simplex on the complete bipartite graph.
//!
//! Node layout: supply nodes `0..nx`, demand nodes `nx..nx+ny`, and an
//! artificial root `nx+ny`. Real arc `i*ny + j` runs from supply `i` to demand
//! `j`; artificial arcs connect every supply node to the root and the root to
//! every demand node. Phase 1 drives the artificial flow to zero, a crossover
//! replaces all but one artificial basic arc by real arcs, and phase 2
//! optimises the real costs.
//!
//! Pricing is Dantzig's rule (largest reduced-cost violation, smallest index
//! on ties). After a run of degenerate pivots as long as the node count, the
//! entering arc switches to Bland's rule (smallest eligible index) until the
//! next pivot that moves flow. Leaving arcs are always chosen by smallest
//! index among the blocking arcs. Bland's rule cannot cycle, and every pivot
//! that moves flow strictly lowers the objective, so the method terminates.

use super::scalar::Scalar;

/// Transportation data already scaled to a common unit.
#[derive(Debug, Clone)]
pub(crate) struct Instance<T> {
    pub supply: Vec<T>,
    pub demand: Vec<T>,
    /// Row-major `nx * ny` upper bounds.
    pub cap: Vec<T>,
    /// Row-major `nx * ny` costs.
    pub cost: Vec<T>,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution<T> {
    pub flow: Vec<T>,
    pub phase1_pivots: usize,
    pub phase2_pivots: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Infeasible;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Dantzig pricing with a Bland fallback on degenerate stalls.
    #[default]
    Dantzig,
    /// Smallest eligible index on every pivot.
    Bland,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArcState {
    Lower,
    Upper,
    Tree,
}

struct Network<T> {
    nx: usize,
    ny: usize,
    tail: Vec<usize>,
    head: Vec<usize>,
    cap: Vec<T>,
    cost: Vec<T>,
    flow: Vec<T>,
    state: Vec<ArcState>,
    basis: Vec<usize>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    depth: Vec<usize>,
    pot: Vec<T>,
    // Scratch buffers for rebuild_tree.
    adj_first: Vec<usize>,
    adj_next: Vec<usize>,
    adj_arc: Vec<usize>,
    queue: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl<T: Scalar> Network<T> {
    fn root(&self) -> usize {
        self.nx + self.ny
    }

    fn num_nodes(&self) -> usize {
        self.nx + self.ny + 1
    }

    fn num_real(&self) -> usize {
        self.nx * self.ny
    }

    fn is_artificial(&self, arc: usize) -> bool {
        arc >= self.num_real()
    }

    fn new(inst: &Instance<T>, total: &T) -> Self {
        let nx = inst.supply.len();
        let ny = inst.demand.len();
        let real = nx * ny;
        let arcs = real + nx + ny;
        let root = nx + ny;

        let mut tail = Vec::with_capacity(arcs);
        let mut head = Vec::with_capacity(arcs);
        for i in 0..nx {
            for j in 0..ny {
                tail.push(i);
                head.push(nx + j);
            }
        }
        for i in 0..nx {
            tail.push(i);
            head.push(root);
        }
        for j in 0..ny {
            tail.push(root);
            head.push(nx + j);
        }

        let mut cap = inst.cap.clone();
        cap.extend(std::iter::repeat_n(total.clone(), nx + ny));
        let mut flow = vec![T::zero(); real];
        flow.extend(inst.supply.iter().cloned());
        flow.extend(inst.demand.iter().cloned());

        let mut state = vec![ArcState::Lower; real];
        state.extend(std::iter::repeat_n(ArcState::Tree, nx + ny));
        let basis = (real..arcs).collect();

        let n = nx + ny + 1;
        let mut net = Self {
            nx,
            ny,
            tail,
            head,
            cap,
            cost: vec![T::zero(); arcs],
            flow,
            state,
            basis,
            parent: vec![NONE; n],
            pred: vec![NONE; n],
            depth: vec![0; n],
            pot: vec![T::zero(); n],
            adj_first: vec![NONE; n],
            adj_next: Vec::with_capacity(2 * n),
            adj_arc: Vec::with_capacity(2 * n),
            queue: Vec::with_capacity(n),
        };
        net.rebuild_tree();
        net
    }

    /// Recomputes parent pointers, depths and potentials from the basis.
    fn rebuild_tree(&mut self) {
        self.adj_first.fill(NONE);
        self.adj_next.clear();
        self.adj_arc.clear();
        for &a in &self.basis {
            for v in [self.tail[a], self.head[a]] {
                self.adj_next.push(self.adj_first[v]);
                self.adj_arc.push(a);
                self.adj_first[v] = self.adj_arc.len() - 1;
            }
        }
        self.parent.fill(NONE);
        self.pred.fill(NONE);
        let root = self.root();
        self.depth[root] = 0;
        self.pot[root] = T::zero();
        self.queue.clear();
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let p = self.queue[head];
            head += 1;
            let mut slot = self.adj_first[p];
            while slot != NONE {
                let a = self.adj_arc[slot];
                slot = self.adj_next[slot];
                if a == self.pred[p] {
                    continue;
                }
                let (v, forward) = if self.tail[a] == p {
                    (self.head[a], true)
                } else {
                    (self.tail[a], false)
                };
                self.parent[v] = p;
                self.pred[v] = a;
                self.depth[v] = self.depth[p] + 1;
                self.pot[v] = if forward {
                    self.pot[p].add(&self.cost[a])
                } else {
                    self.pot[p].sub(&self.cost[a])
                };
                self.queue.push(v);
            }
        }
        debug_assert_eq!(
            self.queue.len(),
            self.num_nodes(),
            "basis is not a spanning tree"
        );
    }

    fn reduced_cost(&self, a: usize) -> T {
        self.cost[a]
            .add(&self.pot[self.tail[a]])
            .sub(&self.pot[self.head[a]])
    }

    /// Signed violation of an eligible arc: negative reduced cost at the lower
    /// bound, or the negated reduced cost at the upper bound.
    fn violation(&self, a: usize) -> Option<T> {
        match self.state[a] {
            ArcState::Tree => None,
            _ if !self.cap[a].is_positive() => None,
            ArcState::Lower => Some(self.reduced_cost(a)).filter(|rc| rc.is_negative()),
            ArcState::Upper => {
                let rc = self.reduced_cost(a);
                rc.is_positive().then(|| T::zero().sub(&rc))
            }
        }
    }

    /// Smallest-index arc whose reduced cost allows an improving move.
    fn entering_bland(&self) -> Option<usize> {
        (0..self.tail.len()).find(|&a| self.violation(a).is_some())
    }

    /// Arc with the most negative violation, smallest index on ties.
    fn entering_dantzig(&self) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for a in 0..self.tail.len() {
            if let Some(v) = self.violation(a) {
                if best.as_ref().is_none_or(|(_, b)| v.lt(b)) {
                    best = Some((a, v));
                }
            }
        }
        best.map(|(a, _)| a)
    }

    /// The cycle closed by `entering`, as `(arc, traversed forward)` pairs,
    /// oriented in the improving direction. The entering arc comes first.
    fn cycle(&self, entering: usize) -> Vec<(usize, bool)> {
        let lower = self.state[entering] == ArcState::Lower;
        let (first, second) = if lower {
            (self.tail[entering], self.head[entering])
        } else {
            (self.head[entering], self.tail[entering])
        };
        let mut cycle = vec![(entering, lower)];
        // Walk from `second` up to the join (traversal child -> parent) and
        // from `first` up to the join (traversal parent -> child).
        let mut up = second;
        let mut down = first;
        let mut down_part = Vec::new();
        while up != down {
            if self.depth[up] >= self.depth[down] {
                let a = self.pred[up];
                cycle.push((a, self.tail[a] == up));
                up = self.parent[up];
            } else {
                let a = self.pred[down];
                down_part.push((a, self.head[a] == down));
                down = self.parent[down];
            }
        }
        cycle.extend(down_part.into_iter().rev());
        cycle
    }

    fn residual(&self, a: usize, forward: bool) -> T {
        if forward {
            self.cap[a].sub(&self.flow[a])
        } else {
            self.flow[a].clone()
        }
    }

    /// Returns whether any flow moved.
    fn pivot(&mut self, entering: usize) -> bool {
        let cycle = self.cycle(entering);
        let mut delta: Option<T> = None;
        let mut leaving = (NONE, true);
        for &(a, fwd) in &cycle {
            let r = self.residual(a, fwd);
            let better = match &delta {
                None => true,
                Some(d) => r.lt(d) || (r.sub(d).is_zero() && a < leaving.0),
            };
            if better {
                delta = Some(r);
                leaving = (a, fwd);
            }
        }
        let delta = delta.expect("cycle contains the entering arc");

        let moved = delta.is_positive();
        if moved {
            for &(a, fwd) in &cycle {
                let f = if fwd {
                    self.flow[a].add(&delta)
                } else {
                    self.flow[a].sub(&delta)
                };
                self.flow[a] = self.snap(a, f);
            }
        }

        let (out, out_fwd) = leaving;
        let bound_state = if out_fwd {
            ArcState::Upper
        } else {
            ArcState::Lower
        };
        if out == entering {
            self.state[entering] = bound_state;
            return moved;
        }
        self.state[entering] = ArcState::Tree;
        self.state[out] = bound_state;
        let slot = self
            .basis
            .iter()
            .position(|&a| a == out)
            .expect("leaving arc is basic");
        self.basis[slot] = entering;
        self.rebuild_tree();
        moved
    }

    /// Rounds float noise back onto the bounds; exact types pass through.
    fn snap(&self, a: usize, f: T) -> T {
        if f.is_zero() {
            T::zero()
        } else if self.cap[a].sub(&f).is_zero() {
            self.cap[a].clone()
        } else {
            f
        }
    }

    fn run_phase(&mut self, rule: PivotRule) -> usize {
        let stall_limit = self.num_nodes();
        let mut pivots = 0;
        let mut degenerate_run = 0;
        loop {
            let entering = if rule == PivotRule::Bland || degenerate_run >= stall_limit {
                self.entering_bland()
            } else {
                self.entering_dantzig()
            };
            let Some(e) = entering else {
                return pivots;
            };
            if self.pivot(e) {
                degenerate_run = 0;
            } else {
                degenerate_run += 1;
            }
            pivots += 1;
        }
    }

    /// Swaps artificial basic arcs for real arcs at their current bound until
    /// the root is a leaf, so every potential is fixed by real costs alone.
    fn crossover(&mut self) {
        let root = self.root();
        loop {
            let artificial: Vec<usize> = self
                .basis
                .iter()
                .copied()
                .filter(|&a| self.is_artificial(a))
                .collect();
            if artificial.len() <= 1 {
                return;
            }
            let a = *artificial.iter().min().expect("non-empty");
            let child = if self.tail[a] == root {
                self.head[a]
            } else {
                self.tail[a]
            };
            let in_subtree = self.subtree_mask(child);
            let replacement = (0..self.num_real())
                .find(|&r| in_subtree[self.tail[r]] != in_subtree[self.head[r]])
                .expect("complete bipartite graph reconnects every split");
            self.state[replacement] = ArcState::Tree;
            self.state[a] = ArcState::Lower;
            let slot = self.basis.iter().position(|&b| b == a).expect("basic");
            self.basis[slot] = replacement;
            self.rebuild_tree();
        }
    }

    fn subtree_mask(&self, top: usize) -> Vec<bool> {
        let n = self.num_nodes();
        (0..n)
            .map(|v| {
                let mut w = v;
                while w != NONE {
                    if w == top {
                        return true;
                    }
                    w = self.parent[w];
                }
                false
            })
            .collect()
    }
}

/// Solves the transportation problem with upper bounds. Supplies and demands
/// must balance; returns [`Infeasible`] when no flow meets every bound.
pub(crate) fn solve<T: Scalar>(
    inst: &Instance<T>,
    phase1_unit: &T,
    rule: PivotRule,
) -> Result<Solution<T>, Infeasible> {
    let total = inst.supply.iter().fold(T::zero(), |acc, s| acc.add(s));
    let mut net = Network::new(inst, &total);
    let real = net.num_real();

    for a in real..net.tail.len() {
        net.cost[a] = phase1_unit.clone();
    }
    net.rebuild_tree();
    let phase1_pivots = net.run_phase(rule);
    if net.flow[real..].iter().any(|f| !f.is_zero()) {
        return Err(Infeasible);
    }

    net.crossover();
    for a in real..net.tail.len() {
        net.cap[a] = T::zero();
        net.flow[a] = T::zero();
        net.cost[a] = T::zero();
    }
    net.cost[..real].clone_from_slice(&inst.cost);
    net.rebuild_tree();
    let phase2_pivots = net.run_phase(rule);

    net.flow.truncate(real);
    Ok(Solution {
        flow: net.flow,
        phase1_pivots,
        phase2_pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(supply: &[i128], demand: &[i128], cap: &[i128], cost: &[i128]) -> Instance<i128> {
        Instance {
            supply: supply.to_vec(),
            demand: demand.to_vec(),
            cap: cap.to_vec(),
            cost: cost.to_vec(),
        }
    }

    fn value(i: &Instance<i128>, s: &Solution<i128>) -> i128 {
        i.cost.iter().zip(&s.flow).map(|(c, f)| c * f).sum()
    }

    #[test]
    fn two_by_two_prefers_diagonal() {
        let i = inst(&[2, 2], &[2, 2], &[2, 2, 2, 2], &[-1, 1, 1, -1]);
        let s = solve(&i, &1, PivotRule::Dantzig).unwrap();
        assert_eq!(s.flow, vec![2, 0, 0, 2]);
        assert_eq!(value(&i, &s), -4);
    }

    #[test]
    fn tight_capacities_force_product() {
        let i = inst(&[2, 2], &[2, 2], &[1, 1, 1, 1], &[-1, 1, 1, -1]);
        let s = solve(&i, &1, PivotRule::Dantzig).unwrap();
        assert_eq!(s.flow, vec![1, 1, 1, 1]);
    }

    #[test]
    fn detects_infeasibility() {
        let i = inst(&[2, 2], &[2, 2], &[1, 0, 0, 1], &[0, 0, 0, 0]);
        assert_eq!(solve(&i, &1, PivotRule::Dantzig).unwrap_err(), Infeasible);
    }

    #[test]
    fn zero_capacity_arcs_are_avoided() {
        // Only the anti-diagonal is open, even though it is expensive.
        let i = inst(&[1, 1], &[1, 1], &[0, 1, 1, 0], &[0, 5, 5, 0]);
        let s = solve(&i, &1, PivotRule::Dantzig).unwrap();
        assert_eq!(s.flow, vec![0, 1, 1, 0]);
    }

    #[test]
    fn rectangular_instance() {
        // 3 suppliers, 2 consumers; cheapest assignment respects arc bounds.
        let i = inst(
            &[3, 3, 2],
            &[4, 4],
            &[3, 1, 2, 3, 2, 2],
            &[1, 4, 2, 1, 3, 1],
        );
        let s = solve(&i, &1, PivotRule::Dantzig).unwrap();
        let rows: Vec<i128> = s.flow.chunks(2).map(|r| r.iter().sum()).collect();
        assert_eq!(rows, vec![3, 3, 2]);
        assert_eq!(s.flow[0] + s.flow[2] + s.flow[4], 4);
        // Column 0 is best served by x00 = 3 and x10 = 1, which leaves row 0
        // empty for column 1: total 3 + 2 + 2 + 2 = 9.
        assert_eq!(value(&i, &s), 9);
    }

    #[test]
    fn bland_and_dantzig_agree_on_value() {
        let i = inst(
            &[3, 3, 2],
            &[4, 4],
            &[3, 1, 2, 3, 2, 2],
            &[1, 4, 2, 1, 3, 1],
        );
        let a = solve(&i, &1, PivotRule::Bland).unwrap();
        let b = solve(&i, &1, PivotRule::Dantzig).unwrap();
        assert_eq!(value(&i, &a), value(&i, &b));
    }

    #[test]
    fn float_backend_matches() {
        let i = Instance {
            supply: vec![0.5, 0.5],
            demand: vec![0.5, 0.5],
            cap: vec![0.5; 4],
            cost: vec![-1.0 / 16.0, 1.0 / 16.0, 1.0 / 16.0, -1.0 / 16.0],
        };
        let s = solve(&i, &1.0, PivotRule::Dantzig).unwrap();
        assert_eq!(s.flow, vec![0.5, 0.0, 0.0, 0.5]);
    }
}
