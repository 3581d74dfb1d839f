//! Structured documents written to stdout.
//!
//! Every command that takes a graph emits a bundle: the graph plus whatever
//! the pipeline has produced so far. Bundles are accepted as input by every
//! command, which is what makes `generate | solve | convert | verify |
//! simulate` work.

use graphsched::io::{DecompositionDoc, GraphDoc, ScheduleDoc};
use graphsched::schedule::{Condition, ValidationReport};
use graphsched::{Graph, SolverReport};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Keys holding results derived from the schedule or decomposition.
pub const DERIVED_KEYS: [&str; 3] = ["verification", "simulation", "equivalence"];

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Bundle {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDoc>,
    /// Results of earlier stages, carried through unchanged.
    #[serde(flatten)]
    pub results: Map<String, Value>,
}

impl Bundle {
    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("result documents serialise");
        self.results.insert(key.to_string(), value);
    }

    pub fn clear_derived(&mut self) {
        for key in DERIVED_KEYS {
            self.results.remove(key);
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDoc {
    pub method: String,
    pub exact: bool,
    pub width: usize,
    pub spatial_cost: usize,
    pub lower_bound: usize,
    pub nodes_expanded: u64,
    pub ordering: Vec<String>,
    /// Known formula value for generated families, as a cross-check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

impl ReportDoc {
    pub fn new(g: &Graph, r: &SolverReport, closed_form: Option<usize>, timings: bool) -> Self {
        ReportDoc {
            method: r.method.to_string(),
            exact: r.exact,
            width: r.width,
            spatial_cost: r.spatial_cost(),
            lower_bound: r.lower_bound,
            nodes_expanded: r.nodes_expanded,
            ordering: r.ordering.iter().map(|&v| g.label(v)).collect(),
            closed_form,
            elapsed_seconds: timings.then_some(r.elapsed.as_secs_f64()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationDoc {
    pub condition: Condition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub message: String,
}

pub fn violations(g: &Graph, report: &ValidationReport) -> Vec<ViolationDoc> {
    report
        .violations
        .iter()
        .map(|v| ViolationDoc {
            condition: v.condition,
            vertex: v.vertex.map(|x| g.label(x)),
            edge: v.edge.map(|(a, b)| [g.label(a), g.label(b)]),
            index: v.index,
            message: v.describe(|x| g.label(x)),
        })
        .collect()
}

/// Outcome of checking one schedule or decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckDoc {
    /// `None` when no graph was available and only the width was computed.
    pub valid: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    pub violations: Vec<ViolationDoc>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerificationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<CheckDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<CheckDoc>,
}

impl VerificationDoc {
    pub fn all_valid(&self) -> bool {
        [&self.schedule, &self.decomposition]
            .into_iter()
            .flatten()
            .all(|c| c.valid != Some(false))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationDoc {
    pub bases: String,
    pub seed: u64,
    /// `[label, bit]` pairs in vertex order.
    pub outcomes: Vec<(String, u8)>,
    pub probability: f64,
    pub schedule_cost: usize,
    pub peak_active: usize,
    pub peak_amplitude_length: usize,
}

pub fn to_pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialise");
    s.push('\n');
    s
}
