use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::frontier::Frontier;
use super::{lower_bound, Method, SolverError, SolverReport};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Always append the vertex giving the smallest boundary; ties go to the smallest id.
    GreedyBoundary,
    /// Best of `restarts` greedy runs. Run 0 breaks ties by smallest id, so
    /// the result is never worse than `GreedyBoundary`; later runs break ties
    /// uniformly at random.
    RandomRestart { seed: u64, restarts: usize },
}

/// Sub-seed for restart `index`; restarts are independent of worker count.
fn restart_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn greedy(g: &Graph, mut rng: Option<&mut ChaCha8Rng>) -> (usize, Vec<Vertex>) {
    let mut frontier = Frontier::new(g);
    let mut order = Vec::with_capacity(g.n());
    let mut worst = 0;
    let mut tied = Vec::new();
    while !frontier.is_complete() {
        let mut best = usize::MAX;
        tied.clear();
        for v in (0..g.n()).filter(|&v| !frontier.is_placed(v)) {
            let b = frontier.boundary_after(v);
            if b < best {
                best = b;
                tied.clear();
            }
            if b == best {
                tied.push(v);
            }
        }
        let v = match rng.as_deref_mut() {
            Some(rng) => *tied.choose(rng).expect("at least one candidate"),
            None => tied[0],
        };
        frontier.place(v);
        order.push(v);
        worst = worst.max(best);
    }
    (worst, order)
}

/// Upper bound on the pathwidth with full certificates; `exact` is always false.
pub fn heuristic(g: &Graph, strategy: Strategy) -> Result<SolverReport, SolverError> {
    let start = Instant::now();
    let (order, runs) = match strategy {
        Strategy::GreedyBoundary => (greedy(g, None).1, 1),
        Strategy::RandomRestart { seed, restarts } => {
            if restarts == 0 {
                return Err(SolverError::NoRestarts);
            }
            let (_, _, order) = (0..restarts)
                .into_par_iter()
                .map(|i| {
                    let (w, order) = if i == 0 {
                        greedy(g, None)
                    } else {
                        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(seed, i));
                        greedy(g, Some(&mut rng))
                    };
                    (w, i, order)
                })
                .min_by_key(|&(w, i, _)| (w, i))
                .expect("restarts >= 1");
            (order, restarts as u64)
        }
    };
    SolverReport::from_ordering(
        g,
        order,
        Method::Heuristic,
        false,
        lower_bound(g),
        runs,
        start.elapsed(),
    )
}
