//! Pathwidth / spatial-cost solvers.
//!
//! Every solver works on the vertex-separation formulation: for a vertex
//! ordering, the boundary of a prefix `S` is `{u in S : N(u) not within S}`
//! and the separation of the ordering is the largest boundary over all
//! prefixes. The minimum over orderings equals the pathwidth, and the eager
//! schedule of an optimal ordering has cost `pathwidth + 1`.

mod bnb;
mod bounds;
mod brute;
mod dp;
mod frontier;
mod heuristic;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::schedule::{
    self, ordering_to_schedule, schedule_to_decomposition, MeasurementSchedule, PathDecomposition,
    ScheduleError,
};

pub use bnb::{branch_and_bound, decide_width_at_most, decide_width_at_most_within, Decision};
pub use bounds::{closed_form, lower_bound};
pub use brute::{brute_force, BRUTE_FORCE_MAX_N};
pub use dp::{exact_dp, EXACT_DP_MAX_N};
pub use heuristic::{heuristic, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("graph has {n} vertices; {method} supports at most {max}")]
    TooLarge {
        method: &'static str,
        n: usize,
        max: usize,
    },
    #[error("heuristic needs at least one restart")]
    NoRestarts,
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Brute,
    Dp,
    Bnb,
    Heuristic,
    ClosedForm,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Dp => "dp",
            Method::Bnb => "bnb",
            Method::Heuristic => "heuristic",
            Method::ClosedForm => "closed-form",
        })
    }
}

/// Limits for the exact searches. Exhausting either is not an error: the
/// solver falls back to its best upper bound and reports `exact = false`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn time(limit: Duration) -> Self {
        Budget {
            time: Some(limit),
            nodes: None,
        }
    }

    pub(crate) fn deadline(&self, start: Instant) -> Option<Instant> {
        self.time.map(|t| start + t)
    }
}

/// Result of a solver run, with an ordering, a path decomposition and a
/// schedule as mutually consistent certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverReport {
    /// Pathwidth when `exact`, otherwise the best upper bound found.
    pub width: usize,
    pub exact: bool,
    pub ordering: Vec<Vertex>,
    pub decomposition: PathDecomposition,
    pub schedule: MeasurementSchedule,
    pub method: Method,
    pub lower_bound: usize,
    pub nodes_expanded: u64,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SolverReport {
    /// Builds all certificates from an ordering. The width is the ordering's
    /// vertex separation.
    pub(crate) fn from_ordering(
        g: &Graph,
        ordering: Vec<Vertex>,
        method: Method,
        exact: bool,
        lower_bound: usize,
        nodes_expanded: u64,
        elapsed: Duration,
    ) -> Result<Self, SolverError> {
        let schedule = ordering_to_schedule(g, &ordering)?;
        let decomposition = schedule_to_decomposition(g, &schedule)?;
        let width = vertex_separation(g, &ordering);
        debug_assert_eq!(decomposition.width().unwrap_or(0), width);
        Ok(SolverReport {
            width,
            exact,
            ordering,
            decomposition,
            schedule,
            method,
            lower_bound: lower_bound.min(width),
            nodes_expanded,
            elapsed,
        })
    }

    /// `width + 1`, or 0 for the empty graph.
    pub fn spatial_cost(&self) -> usize {
        if self.ordering.is_empty() {
            0
        } else {
            self.width + 1
        }
    }

    /// Checks that the certificates agree with each other and with `width`.
    pub fn check_certificates(&self, g: &Graph) -> Result<(), String> {
        if g.n() == 0 {
            return if self.width == 0 && self.schedule.is_empty() {
                Ok(())
            } else {
                Err("empty graph must give an empty certificate".into())
            };
        }
        let vs = vertex_separation(g, &self.ordering);
        if vs != self.width {
            return Err(format!("ordering separation {vs} != width {}", self.width));
        }
        let r =
            schedule::validate_decomposition(g, &self.decomposition).map_err(|e| e.to_string())?;
        if !r.is_valid() {
            return Err(format!("decomposition invalid: {r}"));
        }
        let w = self.decomposition.width().map_err(|e| e.to_string())?;
        if w != self.width {
            return Err(format!("decomposition width {w} != width {}", self.width));
        }
        let r = schedule::validate_schedule(g, &self.schedule).map_err(|e| e.to_string())?;
        if !r.is_valid() {
            return Err(format!("schedule invalid: {r}"));
        }
        let c = schedule::cost(&self.schedule).map_err(|e| e.to_string())?;
        if c != self.width + 1 {
            return Err(format!(
                "schedule cost {c} != width + 1 = {}",
                self.width + 1
            ));
        }
        if self.lower_bound > self.width {
            return Err(format!(
                "lower bound {} exceeds width {}",
                self.lower_bound, self.width
            ));
        }
        Ok(())
    }
}

/// Size of the prefix boundary `{u in prefix : some neighbour outside prefix}`.
pub fn prefix_boundary(g: &Graph, in_prefix: &[bool]) -> usize {
    (0..g.n())
        .filter(|&u| in_prefix[u] && g.adj(u).iter().any(|&w| !in_prefix[w]))
        .count()
}

/// Largest prefix boundary of `order`, computed prefix by prefix.
///
/// `order` must be a permutation of the vertices.
pub fn vertex_separation(g: &Graph, order: &[Vertex]) -> usize {
    let mut in_prefix = vec![false; g.n()];
    let mut best = 0;
    for &v in order {
        in_prefix[v] = true;
        best = best.max(prefix_boundary(g, &in_prefix));
    }
    best
}
