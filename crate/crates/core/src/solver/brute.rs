use std::time::Instant;

use super::{Method, SolverError, SolverReport};
use crate::graph::Graph;

pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Exhaustive oracle: scores all `n!` orderings and keeps the first one
/// (lexicographically) of minimum separation.
pub fn brute_force(g: &Graph) -> Result<SolverReport, SolverError> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(SolverError::TooLarge {
            method: "brute_force",
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let start = Instant::now();
    let masks: Vec<u32> = (0..n)
        .map(|v| g.adj(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let separation = |order: &[usize]| -> usize {
        let mut prefix = 0u32;
        let mut worst = 0;
        for &v in order {
            prefix |= 1 << v;
            let b = (0..n)
                .filter(|&u| prefix >> u & 1 == 1 && masks[u] & !prefix != 0)
                .count();
            worst = worst.max(b);
        }
        worst
    };

    let mut order: Vec<usize> = (0..n).collect();
    let mut best = (separation(&order), order.clone());
    let mut evaluated = 1u64;
    while next_permutation(&mut order) {
        evaluated += 1;
        let s = separation(&order);
        if s < best.0 {
            best = (s, order.clone());
        }
    }
    let report = SolverReport::from_ordering(
        g,
        best.1,
        Method::Brute,
        true,
        best.0,
        evaluated,
        start.elapsed(),
    )?;
    debug_assert_eq!(report.width, best.0);
    Ok(report)
}

/// Advances to the next lexicographic permutation; false after the last one.
fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs
        .iter()
        .rposition(|&x| x > xs[i])
        .expect("pivot has a successor");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}
