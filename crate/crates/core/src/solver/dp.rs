use std::time::Instant;

use super::{Method, SolverError, SolverReport};
use crate::graph::Graph;

pub const EXACT_DP_MAX_N: usize = 26;

/// Subset dynamic programme over vertex sets:
///
/// `f(S) = max(|boundary(S)|, min over v in S of f(S - v))`, `f({}) = 0`.
///
/// `f(V)` is the pathwidth. An optimal ordering is rebuilt backwards by
/// peeling off, at each step, the smallest `v` with `f(S - v) <= f(S)`.
pub fn exact_dp(g: &Graph) -> Result<SolverReport, SolverError> {
    let n = g.n();
    if n > EXACT_DP_MAX_N {
        return Err(SolverError::TooLarge {
            method: "exact_dp",
            n,
            max: EXACT_DP_MAX_N,
        });
    }
    let start = Instant::now();
    let masks: Vec<u32> = (0..n)
        .map(|v| g.adj(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let full: u32 = (1u32 << n) - 1;
    let size = 1usize << n;
    let mut table = vec![0u8; size];
    for set in 1..size as u32 {
        let outside = !set & full;
        let mut boundary = 0u8;
        let mut best_sub = u8::MAX;
        let mut bits = set;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if masks[v] & outside != 0 {
                boundary += 1;
            }
            best_sub = best_sub.min(table[(set & !(1 << v)) as usize]);
        }
        table[set as usize] = boundary.max(best_sub);
    }

    let width = table[full as usize];
    let mut reversed = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let f = table[set as usize];
        let v = (0..n)
            .find(|&v| set >> v & 1 == 1 && table[(set & !(1 << v)) as usize] <= f)
            .expect("some removal attains the minimum");
        reversed.push(v);
        set &= !(1 << v);
    }
    reversed.reverse();

    let report = SolverReport::from_ordering(
        g,
        reversed,
        Method::Dp,
        true,
        width as usize,
        size as u64,
        start.elapsed(),
    )?;
    debug_assert_eq!(report.width, width as usize);
    Ok(report)
}
