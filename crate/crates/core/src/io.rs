//! Text and structured (JSON) formats for graphs, schedules and decompositions.
//!
//! Edge list: one edge per line as two whitespace-separated labels. A line
//! with a single label declares a vertex (used for isolated vertices and to
//! pin id order). `#` starts a comment line; blank lines are skipped. Ids are
//! assigned in order of first appearance.
//!
//! Structured graph document:
//!
//! ```json
//! {"n": 3, "edges": [[0, 1], [1, 2]], "labels": {"0": "a", "1": "b", "2": "c"}}
//! ```
//!
//! `labels` is optional and may be partial. A generated graph also carries a
//! `family` object such as `{"kind": "grid", "m": 3, "n": 4}`.
//!
//! Schedules are written as `I <label>` / `M <label>` lines, or as
//! `{"events": [["I", "a"], ["M", "a"]]}`. Decompositions are one bag per
//! line, or `{"bags": [["a", "b"], ["b", "c"]]}`; an empty bag is written `-`
//! in the line format.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::family::FamilyDescriptor;
use crate::graph::{Graph, GraphError, Parsed, Vertex};
use crate::schedule::{Action, MeasurementSchedule, PathDecomposition, ScheduleEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Structured,
}

impl GraphFormat {
    /// Structured when the text starts with `{`, otherwise edge list.
    pub fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('{') {
            GraphFormat::Structured
        } else {
            GraphFormat::EdgeList
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<Vertex, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDescriptor>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
            labels: g.labels().clone(),
            family: None,
        }
    }

    pub fn with_family(mut self, family: FamilyDescriptor) -> Self {
        self.family = Some(family);
        self
    }

    pub fn to_graph(&self) -> Result<Parsed, GraphError> {
        let mut parsed =
            Graph::from_edges_counting(self.n, self.edges.iter().map(|&[u, v]| (u, v)))?;
        parsed.graph = parsed.graph.with_labels(self.labels.clone())?;
        Ok(parsed)
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Parsed, GraphError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Structured => {
            let doc: GraphDoc = serde_json::from_str(text).map_err(|e| GraphError::Malformed {
                line: e.line(),
                msg: e.to_string(),
            })?;
            doc.to_graph()
        }
    }
}

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_edge_list(text: &str) -> Result<Parsed, GraphError> {
    let mut ids: HashMap<String, Vertex> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut intern = |name: &str| -> Vertex {
        *ids.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };
    let mut edges = Vec::new();
    for (line, content) in meaningful_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [v] => {
                intern(v);
            }
            [a, b] => {
                if a == b {
                    return Err(GraphError::SelfLoop(a.to_string()));
                }
                edges.push((intern(a), intern(b)));
            }
            _ => {
                return Err(GraphError::Malformed {
                    line,
                    msg: format!("expected one or two labels, found {}", tokens.len()),
                })
            }
        }
    }
    let n = names.len();
    let mut parsed = Graph::from_edges_counting(n, edges)?;
    let trivial = names.iter().enumerate().all(|(i, s)| *s == i.to_string());
    if !trivial {
        parsed.graph = parsed
            .graph
            .with_labels(names.into_iter().enumerate().collect())?;
    }
    Ok(parsed)
}

/// Edge-list rendering that round-trips through [`parse_edge_list`] with the
/// same id assignment: every vertex is declared first, then the edges.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for v in 0..g.n() {
        out.push_str(&g.label(v));
        out.push('\n');
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", g.label(u), g.label(v)));
    }
    out
}

pub fn write_structured(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphDoc::from_graph(g)).expect("graph document serialises")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub events: Vec<(String, String)>,
}

impl ScheduleDoc {
    pub fn from_schedule(g: &Graph, s: &MeasurementSchedule) -> Self {
        ScheduleDoc {
            events: s
                .events()
                .iter()
                .map(|e| {
                    let tag = match e.action {
                        Action::Init => "I",
                        Action::Measure => "M",
                    };
                    (tag.to_string(), g.label(e.vertex))
                })
                .collect(),
        }
    }

    pub fn to_schedule(&self, g: &Graph) -> Result<MeasurementSchedule, GraphError> {
        self.events
            .iter()
            .enumerate()
            .map(|(i, (tag, name))| event(g, tag, name, i + 1))
            .collect::<Result<Vec<_>, _>>()
            .map(MeasurementSchedule::new)
    }
}

fn event(g: &Graph, tag: &str, name: &str, line: usize) -> Result<ScheduleEvent, GraphError> {
    let v = g.resolve(name)?;
    match tag {
        "I" | "i" => Ok(ScheduleEvent::init(v)),
        "M" | "m" => Ok(ScheduleEvent::measure(v)),
        other => Err(GraphError::Malformed {
            line,
            msg: format!("unknown event tag `{other}`, expected I or M"),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub bags: Vec<Vec<String>>,
}

impl DecompositionDoc {
    pub fn from_decomposition(g: &Graph, pd: &PathDecomposition) -> Self {
        DecompositionDoc {
            bags: pd
                .bags()
                .iter()
                .map(|b| b.iter().map(|&v| g.label(v)).collect())
                .collect(),
        }
    }

    pub fn to_decomposition(&self, g: &Graph) -> Result<PathDecomposition, GraphError> {
        let bags = self
            .bags
            .iter()
            .map(|b| {
                b.iter()
                    .map(|name| g.resolve(name))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PathDecomposition::new(bags))
    }
}

pub fn parse_schedule_text(text: &str) -> Result<ScheduleDoc, GraphError> {
    let mut events = Vec::new();
    for (line, content) in meaningful_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [tag @ ("I" | "M" | "i" | "m"), name] => {
                events.push((tag.to_uppercase(), name.to_string()))
            }
            _ => {
                return Err(GraphError::Malformed {
                    line,
                    msg: format!("expected `I <label>` or `M <label>`, found `{content}`"),
                })
            }
        }
    }
    Ok(ScheduleDoc { events })
}

pub fn write_schedule_text(doc: &ScheduleDoc) -> String {
    doc.events
        .iter()
        .map(|(t, v)| format!("{t} {v}\n"))
        .collect()
}

pub fn parse_decomposition_text(text: &str) -> DecompositionDoc {
    let bags = meaningful_lines(text)
        .map(|(_, content)| {
            if content == "-" {
                Vec::new()
            } else {
                content.split_whitespace().map(str::to_string).collect()
            }
        })
        .collect();
    DecompositionDoc { bags }
}

pub fn write_decomposition_text(doc: &DecompositionDoc) -> String {
    doc.bags
        .iter()
        .map(|b| {
            if b.is_empty() {
                "-\n".to_string()
            } else {
                format!("{}\n", b.join(" "))
            }
        })
        .collect()
}

/// True when every meaningful line reads as a schedule event.
pub fn looks_like_schedule(text: &str) -> bool {
    let mut any = false;
    for (_, content) in meaningful_lines(text) {
        any = true;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if !matches!(tokens.as_slice(), ["I" | "M" | "i" | "m", _]) {
            return false;
        }
    }
    any
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_list_examples() {
        let p = parse_graph("a b\nb c", GraphFormat::EdgeList).unwrap();
        assert_eq!(p.graph.n(), 3);
        assert_eq!(p.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.graph.label(2), "c");
        assert_eq!(p.duplicate_edges, 0);

        let p = parse_graph("", GraphFormat::EdgeList).unwrap();
        assert_eq!((p.graph.n(), p.graph.edge_count()), (0, 0));

        let p = parse_graph("a b\nb a", GraphFormat::EdgeList).unwrap();
        assert_eq!((p.graph.n(), p.graph.edge_count()), (2, 1));
        assert_eq!(p.duplicate_edges, 1);
    }

    #[test]
    fn edge_list_comments_and_errors() {
        let p = parse_graph("# header\n\n  x y  \n# z w\nz\n", GraphFormat::EdgeList).unwrap();
        assert_eq!(p.graph.n(), 3);
        assert_eq!(p.graph.edge_count(), 1);
        assert!(matches!(
            parse_graph("a a", GraphFormat::EdgeList),
            Err(GraphError::SelfLoop(_))
        ));
        assert!(matches!(
            parse_graph("a b\na b c", GraphFormat::EdgeList),
            Err(GraphError::Malformed { line: 2, .. })
        ));
    }

    #[test]
    fn numeric_labels_are_dropped_when_they_equal_ids() {
        let p = parse_edge_list("0 1\n1 2").unwrap();
        assert!(!p.graph.has_labels());
        let p = parse_edge_list("1 0").unwrap();
        assert_eq!(p.graph.label(0), "1");
    }

    #[test]
    fn structured_graph() {
        let text = r#"{"n": 3, "edges": [[0, 1], [2, 1], [1, 0]], "labels": {"0": "a"}}"#;
        let p = parse_graph(text, GraphFormat::Structured).unwrap();
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(p.duplicate_edges, 1);
        assert_eq!(p.graph.label(0), "a");
        assert_eq!(p.graph.label(1), "1");
        assert!(matches!(
            parse_graph(r#"{"n": 2, "edges": [[0, 2]]}"#, GraphFormat::Structured),
            Err(GraphError::OutOfRange { id: 2, n: 2 })
        ));
        assert!(matches!(
            parse_graph(r#"{"n": 2, "edges": [[1, 1]]}"#, GraphFormat::Structured),
            Err(GraphError::SelfLoop(_))
        ));
        assert!(parse_graph("{nope", GraphFormat::Structured).is_err());
        assert_eq!(GraphFormat::sniff("  {"), GraphFormat::Structured);
        assert_eq!(GraphFormat::sniff("a b"), GraphFormat::EdgeList);
    }

    #[test]
    fn schedule_and_decomposition_text() {
        let g = parse_edge_list("a b\nb c").unwrap().graph;
        let doc = parse_schedule_text("I a\nI b\nM a\n# c\nI c\nM b\nM c\n").unwrap();
        let s = doc.to_schedule(&g).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(ScheduleDoc::from_schedule(&g, &s), doc);
        assert_eq!(
            parse_schedule_text(&write_schedule_text(&doc)).unwrap(),
            doc
        );
        assert!(parse_schedule_text("X a").is_err());
        assert!(ScheduleDoc {
            events: vec![("I".into(), "q".into())]
        }
        .to_schedule(&g)
        .is_err());

        let d = parse_decomposition_text("a b\nb c\n");
        let pd = d.to_decomposition(&g).unwrap();
        assert_eq!(pd, PathDecomposition::new([vec![0, 1], vec![1, 2]]));
        assert_eq!(DecompositionDoc::from_decomposition(&g, &pd), d);
        let with_empty = DecompositionDoc {
            bags: vec![vec![], vec!["a".into()]],
        };
        assert_eq!(
            parse_decomposition_text(&write_decomposition_text(&with_empty)),
            with_empty
        );

        assert!(looks_like_schedule("I a\nM a"));
        assert!(!looks_like_schedule("a b\nb c"));
        assert!(!looks_like_schedule(""));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (0usize..12)
            .prop_flat_map(|n| {
                let pairs = if n < 2 { 0 } else { n * (n - 1) / 2 };
                (
                    Just(n),
                    proptest::collection::vec(any::<bool>(), pairs),
                    any::<bool>(),
                )
            })
            .prop_map(|(n, bits, labelled)| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                let edges = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e);
                let g = Graph::from_edges(n, edges).unwrap();
                if labelled {
                    g.with_labels((0..n).map(|v| (v, format!("q{}", n - v))).collect())
                        .unwrap()
                } else {
                    g
                }
            })
    }

    proptest! {
        #[test]
        fn round_trips_preserve_ids(g in arb_graph()) {
            let back = parse_graph(&write_edge_list(&g), GraphFormat::EdgeList).unwrap().graph;
            prop_assert_eq!(&back, &g);
            let back = parse_graph(&write_structured(&g), GraphFormat::Structured).unwrap().graph;
            prop_assert_eq!(&back, &g);
        }
    }
}
