//! Measurement schedules, path decompositions, and conversions between them.
//!
//! A schedule is a sequence of `Init`/`Measure` events. Its bag view is the
//! sequence of active sets, obtained with [`active_trace`]. The two
//! conversions [`decomposition_to_schedule`] and [`schedule_to_decomposition`]
//! are constructive: a valid input always yields a valid output, with
//! `width = cost - 1` in the schedule-to-decomposition direction and
//! `cost <= width + 1` in the other.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("vertex {vertex} is not in a graph with {n} vertices")]
    UnknownVertex { vertex: Vertex, n: usize },
    #[error("width is undefined for an empty bag sequence")]
    EmptyDecomposition,
    #[error("invalid path decomposition: {0}")]
    InvalidDecomposition(ValidationReport),
    #[error("invalid measurement schedule: {0}")]
    InvalidSchedule(ValidationReport),
    #[error("not a permutation of the vertex set: {0}")]
    NotAPermutation(String),
}

/// Ordered sequence of bags. Each bag is kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PathDecomposition {
    bags: Vec<Vec<Vertex>>,
}

impl PathDecomposition {
    pub fn new<B, I>(bags: B) -> Self
    where
        B: IntoIterator<Item = I>,
        I: IntoIterator<Item = Vertex>,
    {
        PathDecomposition {
            bags: bags
                .into_iter()
                .map(|b| b.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
                .collect(),
        }
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one. An all-empty sequence reports 0.
    pub fn width(&self) -> Result<usize, ScheduleError> {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .map(|m| m.saturating_sub(1))
            .ok_or(ScheduleError::EmptyDecomposition)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Init,
    Measure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScheduleEvent {
    pub action: Action,
    pub vertex: Vertex,
}

impl ScheduleEvent {
    pub fn init(vertex: Vertex) -> Self {
        ScheduleEvent {
            action: Action::Init,
            vertex,
        }
    }

    pub fn measure(vertex: Vertex) -> Self {
        ScheduleEvent {
            action: Action::Measure,
            vertex,
        }
    }
}

impl fmt::Display for ScheduleEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.action {
            Action::Init => write!(f, "I {}", self.vertex),
            Action::Measure => write!(f, "M {}", self.vertex),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MeasurementSchedule {
    events: Vec<ScheduleEvent>,
}

impl MeasurementSchedule {
    pub fn new(events: Vec<ScheduleEvent>) -> Self {
        MeasurementSchedule { events }
    }

    pub fn events(&self) -> &[ScheduleEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Schedule that initialises every vertex in id order and then measures them all.
    pub fn all_init_then_measure(n: usize) -> Self {
        let events = (0..n)
            .map(ScheduleEvent::init)
            .chain((0..n).map(ScheduleEvent::measure))
            .collect();
        MeasurementSchedule { events }
    }
}

/// The validity condition a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    P1,
    P2,
    P3,
    M1,
    M2,
    #[serde(rename = "M-measure-before-init")]
    MeasureBeforeInit,
    #[serde(rename = "M-double-measure")]
    DoubleMeasure,
    #[serde(rename = "M-never-measured")]
    NeverMeasured,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::P1 => "P1",
            Condition::P2 => "P2",
            Condition::P3 => "P3",
            Condition::M1 => "M1",
            Condition::M2 => "M2",
            Condition::MeasureBeforeInit => "M-measure-before-init",
            Condition::DoubleMeasure => "M-double-measure",
            Condition::NeverMeasured => "M-never-measured",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<(Vertex, Vertex)>,
    /// Bag index or event index, depending on the object validated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, condition: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }

    fn push(
        &mut self,
        condition: Condition,
        vertex: Option<Vertex>,
        edge: Option<(Vertex, Vertex)>,
        index: Option<usize>,
    ) {
        let mut violation = Violation {
            condition,
            vertex,
            edge,
            index,
            message: String::new(),
        };
        violation.message = violation.describe(|v| v.to_string());
        self.violations.push(violation);
    }
}

impl Violation {
    /// Human-readable message with vertices rendered by `name`.
    pub fn describe(&self, name: impl Fn(Vertex) -> String) -> String {
        let v = self.vertex.map(&name).unwrap_or_default();
        let i = self.index.unwrap_or_default();
        match self.condition {
            Condition::P1 => format!("vertex {v} is in no bag"),
            Condition::P2 => {
                let (a, b) = self.edge.unwrap_or_default();
                format!("edge {{{},{}}} is contained in no bag", name(a), name(b))
            }
            Condition::P3 => {
                format!("vertex {v} is missing from bag {i} between two bags that contain it")
            }
            Condition::M1 if self.index.is_some() => {
                format!("vertex {v} initialised again at event {i}")
            }
            Condition::M1 => format!("vertex {v} is never initialised"),
            Condition::M2 => {
                let (a, b) = self.edge.unwrap_or_default();
                let other = if Some(a) == self.vertex { b } else { a };
                format!(
                    "vertex {v} measured at event {i} before neighbour {} is initialised",
                    name(other)
                )
            }
            Condition::MeasureBeforeInit => {
                format!("vertex {v} measured at event {i} before its initialisation")
            }
            Condition::DoubleMeasure => format!("vertex {v} measured again at event {i}"),
            Condition::NeverMeasured => format!("vertex {v} is initialised but never measured"),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.condition, v.message)?;
        }
        Ok(())
    }
}

/// Checks P1 (vertex coverage), P2 (edge coverage) and P3 (contiguity),
/// reporting every violation found.
pub fn validate_decomposition(
    g: &Graph,
    pd: &PathDecomposition,
) -> Result<ValidationReport, ScheduleError> {
    let n = g.n();
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in pd.bags().iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(ScheduleError::UnknownVertex { vertex: v, n });
            }
            occurrences[v].push(i);
        }
    }

    let mut report = ValidationReport::default();
    for (v, occ) in occurrences.iter().enumerate() {
        if occ.is_empty() {
            report.push(Condition::P1, Some(v), None, None);
        }
    }
    for (u, v) in g.edges() {
        let covered = occurrences[u]
            .iter()
            .any(|&i| pd.bags()[i].binary_search(&v).is_ok());
        if !covered {
            report.push(Condition::P2, None, Some((u, v)), None);
        }
    }
    for (v, occ) in occurrences.iter().enumerate() {
        if let Some(w) = occ.windows(2).find(|w| w[1] != w[0] + 1) {
            report.push(Condition::P3, Some(v), None, Some(w[0] + 1));
        }
    }
    Ok(report)
}

/// Largest bag size minus one.
pub fn width(pd: &PathDecomposition) -> Result<usize, ScheduleError> {
    pd.width()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum QubitState {
    Fresh,
    Active,
    Measured,
}

/// Checks M1 and M2 together with the event-level conditions: no measurement
/// before the qubit's own initialisation, no double measurement, and every
/// initialised qubit measured by the end.
pub fn validate_schedule(
    g: &Graph,
    s: &MeasurementSchedule,
) -> Result<ValidationReport, ScheduleError> {
    let n = g.n();
    if let Some(e) = s.events().iter().find(|e| e.vertex >= n) {
        return Err(ScheduleError::UnknownVertex {
            vertex: e.vertex,
            n,
        });
    }
    let mut report = ValidationReport::default();
    let mut state = vec![QubitState::Fresh; n];
    let mut initialised = vec![false; n];

    for (i, e) in s.events().iter().enumerate() {
        let v = e.vertex;
        match e.action {
            Action::Init => {
                if initialised[v] {
                    report.push(Condition::M1, Some(v), None, Some(i));
                } else {
                    initialised[v] = true;
                    state[v] = QubitState::Active;
                }
            }
            Action::Measure => match state[v] {
                QubitState::Fresh => {
                    report.push(Condition::MeasureBeforeInit, Some(v), None, Some(i))
                }
                QubitState::Measured => {
                    report.push(Condition::DoubleMeasure, Some(v), None, Some(i))
                }
                QubitState::Active => {
                    for &u in g.adj(v) {
                        if !initialised[u] {
                            report.push(
                                Condition::M2,
                                Some(v),
                                Some((v.min(u), v.max(u))),
                                Some(i),
                            );
                        }
                    }
                    state[v] = QubitState::Measured;
                }
            },
        }
    }
    for (v, st) in state.iter().enumerate() {
        match st {
            QubitState::Fresh => report.push(Condition::M1, Some(v), None, None),
            QubitState::Active => report.push(Condition::NeverMeasured, Some(v), None, None),
            QubitState::Measured => {}
        }
    }
    Ok(report)
}

/// Graph-free consistency of the event stream: each vertex initialised at
/// most once, measured at most once, and only while active.
fn check_events(s: &MeasurementSchedule) -> Result<(), ScheduleError> {
    let n = s.events().iter().map(|e| e.vertex + 1).max().unwrap_or(0);
    let mut state = vec![QubitState::Fresh; n];
    let mut report = ValidationReport::default();
    for (i, e) in s.events().iter().enumerate() {
        let v = e.vertex;
        match (e.action, state[v]) {
            (Action::Init, QubitState::Fresh) => state[v] = QubitState::Active,
            (Action::Init, _) => report.push(Condition::M1, Some(v), None, Some(i)),
            (Action::Measure, QubitState::Active) => state[v] = QubitState::Measured,
            (Action::Measure, QubitState::Fresh) => {
                report.push(Condition::MeasureBeforeInit, Some(v), None, Some(i))
            }
            (Action::Measure, QubitState::Measured) => {
                report.push(Condition::DoubleMeasure, Some(v), None, Some(i))
            }
        }
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(ScheduleError::InvalidSchedule(report))
    }
}

/// Active set immediately after each event.
pub fn active_trace(s: &MeasurementSchedule) -> Result<Vec<BTreeSet<Vertex>>, ScheduleError> {
    check_events(s)?;
    let mut active = BTreeSet::new();
    Ok(s.events()
        .iter()
        .map(|e| {
            match e.action {
                Action::Init => active.insert(e.vertex),
                Action::Measure => active.remove(&e.vertex),
            };
            active.clone()
        })
        .collect())
}

/// Maximum number of simultaneously active qubits; 0 for the empty schedule.
pub fn cost(s: &MeasurementSchedule) -> Result<usize, ScheduleError> {
    check_events(s)?;
    let mut active = 0usize;
    let mut peak = 0usize;
    for e in s.events() {
        match e.action {
            Action::Init => {
                active += 1;
                peak = peak.max(active);
            }
            Action::Measure => active -= 1,
        }
    }
    Ok(peak)
}

/// Realises a path decomposition as a schedule: at bag `i`, initialise the
/// vertices new to `X_i`, then measure every vertex whose last bag is `i`.
/// Both steps run in ascending id order.
pub fn decomposition_to_schedule(
    g: &Graph,
    pd: &PathDecomposition,
) -> Result<MeasurementSchedule, ScheduleError> {
    let report = validate_decomposition(g, pd)?;
    if !report.is_valid() {
        return Err(ScheduleError::InvalidDecomposition(report));
    }
    let mut last_bag = vec![0usize; g.n()];
    for (i, bag) in pd.bags().iter().enumerate() {
        for &v in bag {
            last_bag[v] = i;
        }
    }
    let mut events = Vec::with_capacity(2 * g.n());
    let mut previous: &[Vertex] = &[];
    for (i, bag) in pd.bags().iter().enumerate() {
        for &v in bag {
            if previous.binary_search(&v).is_err() {
                events.push(ScheduleEvent::init(v));
            }
        }
        for &v in bag {
            if last_bag[v] == i {
                events.push(ScheduleEvent::measure(v));
            }
        }
        previous = bag;
    }
    Ok(MeasurementSchedule::new(events))
}

/// Reads a path decomposition off a schedule: one bag per `Init`, holding
/// the active set right after it.
pub fn schedule_to_decomposition(
    g: &Graph,
    s: &MeasurementSchedule,
) -> Result<PathDecomposition, ScheduleError> {
    let report = validate_schedule(g, s)?;
    if !report.is_valid() {
        return Err(ScheduleError::InvalidSchedule(report));
    }
    let mut active = BTreeSet::new();
    let mut bags = Vec::with_capacity(g.n());
    for e in s.events() {
        match e.action {
            Action::Init => {
                active.insert(e.vertex);
                bags.push(active.iter().copied().collect::<Vec<_>>());
            }
            Action::Measure => {
                active.remove(&e.vertex);
            }
        }
    }
    Ok(PathDecomposition { bags })
}

pub(crate) fn check_permutation(n: usize, order: &[Vertex]) -> Result<(), ScheduleError> {
    if order.len() != n {
        return Err(ScheduleError::NotAPermutation(format!(
            "expected {n} vertices, got {}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(ScheduleError::NotAPermutation(format!(
                "vertex {v} out of range"
            )));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(ScheduleError::NotAPermutation(format!(
                "vertex {v} repeated"
            )));
        }
    }
    Ok(())
}

/// Eager realisation of a vertex ordering: initialise each vertex in turn and
/// immediately measure every active vertex whose neighbourhood is now fully
/// initialised (ascending id).
///
/// The cost equals one plus the vertex separation of the ordering.
pub fn ordering_to_schedule(
    g: &Graph,
    order: &[Vertex],
) -> Result<MeasurementSchedule, ScheduleError> {
    check_permutation(g.n(), order)?;
    let mut uninitialised_nbrs: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut active = vec![false; g.n()];
    let mut events = Vec::with_capacity(2 * g.n());
    let mut ready = Vec::new();
    for &v in order {
        events.push(ScheduleEvent::init(v));
        active[v] = true;
        ready.clear();
        for &u in g.adj(v) {
            uninitialised_nbrs[u] -= 1;
            if active[u] && uninitialised_nbrs[u] == 0 {
                ready.push(u);
            }
        }
        if uninitialised_nbrs[v] == 0 {
            ready.push(v);
        }
        ready.sort_unstable();
        for &u in &ready {
            active[u] = false;
            events.push(ScheduleEvent::measure(u));
        }
    }
    Ok(MeasurementSchedule::new(events))
}
