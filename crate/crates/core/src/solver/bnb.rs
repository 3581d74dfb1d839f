//! Branch-and-bound decision procedure for `pathwidth <= k`.
//!
//! The search extends a prefix of the ordering one vertex at a time and
//! prunes any extension whose boundary exceeds `k`. Prefix sets that failed
//! are memoised (feasibility depends only on the set, not its order).
//!
//! Commit rule: if placing some vertex does not grow the boundary, it is
//! placed without branching. This is safe because the boundary size is a
//! submodular set function: if `|B(S + v)| <= |B(S)|`, prepending `v` to any
//! completion of `S` never raises a later prefix boundary.

use std::collections::HashSet;
use std::hash::{BuildHasherDefault, Hasher};
use std::time::Instant;

use super::frontier::Frontier;
use super::{heuristic, lower_bound, Budget, Method, SolverError, SolverReport, Strategy};
use crate::graph::{Graph, Vertex};

/// Outcome of a budgeted decision query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// Width `<= k`, with an ordering whose separation is at most `k`.
    Feasible(Vec<Vertex>),
    Infeasible,
    /// Time or node budget ran out before the question was settled.
    Exhausted,
}

/// Decides `pathwidth(g) <= k` without limits. Returns a certificate ordering on success.
pub fn decide_width_at_most(g: &Graph, k: usize) -> Option<Vec<Vertex>> {
    match decide_width_at_most_within(g, k, Budget::unlimited()).0 {
        Decision::Feasible(order) => Some(order),
        Decision::Infeasible => None,
        Decision::Exhausted => unreachable!("unlimited budget"),
    }
}

/// Budgeted decision query. Also returns the number of search nodes expanded.
pub fn decide_width_at_most_within(g: &Graph, k: usize, budget: Budget) -> (Decision, u64) {
    let start = Instant::now();
    let mut search = Search::new(g, k, budget.deadline(start), budget.nodes);
    let decision = match search.run() {
        Some(true) => Decision::Feasible(search.order),
        Some(false) => Decision::Infeasible,
        None => Decision::Exhausted,
    };
    (decision, search.nodes)
}

#[derive(Default)]
struct SetHasher(u64);

impl Hasher for SetHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ u64::from(b)).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }

    fn write_u128(&mut self, x: u128) {
        let folded = (x as u64) ^ ((x >> 64) as u64).rotate_left(29);
        self.0 = (self.0 ^ folded).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        self.0 ^= self.0 >> 31;
    }
}

type FailedSets = HashSet<u128, BuildHasherDefault<SetHasher>>;

struct Search<'g> {
    frontier: Frontier<'g>,
    n: usize,
    k: usize,
    /// Prefix as a bitmask; memoisation is off above 128 vertices.
    mask: u128,
    memo: bool,
    failed: FailedSets,
    order: Vec<Vertex>,
    nodes: u64,
    deadline: Option<Instant>,
    node_cap: Option<u64>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, k: usize, deadline: Option<Instant>, node_cap: Option<u64>) -> Self {
        Search {
            frontier: Frontier::new(g),
            n: g.n(),
            k,
            mask: 0,
            memo: g.n() <= 128,
            failed: FailedSets::default(),
            order: Vec::with_capacity(g.n()),
            nodes: 0,
            deadline,
            node_cap,
        }
    }

    fn run(&mut self) -> Option<bool> {
        self.dfs()
    }

    fn out_of_budget(&self) -> bool {
        if self.node_cap.is_some_and(|cap| self.nodes > cap) {
            return true;
        }
        self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn place(&mut self, v: Vertex) {
        self.frontier.place(v);
        self.order.push(v);
        if self.memo {
            self.mask |= 1 << v;
        }
    }

    fn unplace(&mut self, v: Vertex) {
        self.frontier.unplace(v);
        self.order.pop();
        if self.memo {
            self.mask &= !(1 << v);
        }
    }

    /// `Some(true)` on success (the ordering is left in `self.order`),
    /// `Some(false)` when no completion exists, `None` when out of budget.
    fn dfs(&mut self) -> Option<bool> {
        if self.frontier.is_complete() {
            return Some(true);
        }
        self.nodes += 1;
        if self.out_of_budget() {
            return None;
        }
        if self.memo && self.failed.contains(&self.mask) {
            return Some(false);
        }

        let current = self.frontier.boundary();
        let free = (0..self.n)
            .find(|&v| !self.frontier.is_placed(v) && self.frontier.boundary_after(v) <= current);
        let result = if let Some(v) = free {
            self.place(v);
            let r = self.dfs();
            if r == Some(true) {
                return r;
            }
            self.unplace(v);
            r
        } else {
            let mut candidates: Vec<(usize, Vertex)> = (0..self.n)
                .filter(|&v| !self.frontier.is_placed(v))
                .map(|v| (self.frontier.boundary_after(v), v))
                .filter(|&(b, _)| b <= self.k)
                .collect();
            candidates.sort_unstable();
            let mut r = Some(false);
            for (_, v) in candidates {
                self.place(v);
                r = self.dfs();
                if r == Some(true) {
                    return r;
                }
                self.unplace(v);
                if r.is_none() {
                    break;
                }
            }
            r
        };
        if result == Some(false) && self.memo {
            self.failed.insert(self.mask);
        }
        result
    }
}

/// Subgraph induced by `vertices` (sorted), relabelled to `0..len`.
fn induced(g: &Graph, vertices: &[Vertex]) -> Graph {
    let index = |v: Vertex| vertices.binary_search(&v).expect("component is closed");
    let edges = vertices
        .iter()
        .flat_map(|&u| {
            g.adj(u)
                .iter()
                .filter(move |&&w| w > u)
                .map(move |&w| (u, w))
        })
        .map(|(u, w)| (index(u), index(w)));
    Graph::from_edges(vertices.len(), edges).expect("induced subgraph is simple")
}

/// Exact pathwidth by running the decision procedure from the lower bound
/// upward, one connected component at a time. When the budget runs out the
/// greedy upper bound is returned with `exact = false`.
pub fn branch_and_bound(g: &Graph, budget: Budget) -> Result<SolverReport, SolverError> {
    let start = Instant::now();
    let deadline = budget.deadline(start);
    let lb = lower_bound(g);
    let mut nodes = 0u64;
    let mut width = 0usize;
    let mut ordering = Vec::with_capacity(g.n());

    for component in g.components() {
        let sub = induced(g, &component);
        let mut k = width.max(lower_bound(&sub));
        let local = loop {
            let remaining = Budget {
                time: deadline.map(|d| d.saturating_duration_since(Instant::now())),
                nodes: budget.nodes.map(|cap| cap.saturating_sub(nodes)),
            };
            if remaining.time.is_some_and(|t| t.is_zero()) {
                break None;
            }
            let (decision, used) = decide_width_at_most_within(&sub, k, remaining);
            nodes += used;
            match decision {
                Decision::Feasible(order) => break Some(order),
                Decision::Infeasible => k += 1,
                Decision::Exhausted => break None,
            }
        };
        match local {
            Some(order) => {
                width = width.max(k);
                ordering.extend(order.into_iter().map(|v| component[v]));
            }
            None => {
                // Every width below `k` was refuted for this component.
                let proven = lb.max(k);
                let mut fallback = heuristic(g, Strategy::GreedyBoundary)?;
                fallback.method = Method::Bnb;
                fallback.exact = false;
                fallback.lower_bound = proven.min(fallback.width);
                fallback.nodes_expanded = nodes;
                fallback.elapsed = start.elapsed();
                return Ok(fallback);
            }
        }
    }

    let report = SolverReport::from_ordering(
        g,
        ordering,
        Method::Bnb,
        true,
        width,
        nodes,
        start.elapsed(),
    )?;
    debug_assert_eq!(report.width, width);
    Ok(report)
}
