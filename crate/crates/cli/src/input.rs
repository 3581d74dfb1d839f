//! Reading graphs, schedules and decompositions from files or stdin.

use std::io::Read;
use std::path::Path;

use graphsched::io::{self, DecompositionDoc, GraphDoc, GraphFormat, ScheduleDoc};
use graphsched::{FamilyDescriptor, Graph, MeasurementSchedule, PathDecomposition};
use serde_json::Value;

use crate::doc::Bundle;
use crate::error::Failure;
use crate::Ctx;

/// Which object a text payload holds, when that cannot be sniffed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadKind {
    Auto,
    Schedule,
    Decomposition,
}

/// Everything a command received, resolved against the graph.
pub struct Loaded {
    pub graph: Option<Graph>,
    pub family: Option<FamilyDescriptor>,
    pub bundle: Bundle,
}

impl Loaded {
    pub fn graph(&self) -> Result<&Graph, Failure> {
        self.graph
            .as_ref()
            .ok_or_else(|| Failure::input("no graph given; pass a graph document or --graph"))
    }

    pub fn schedule(&self) -> Result<Option<MeasurementSchedule>, Failure> {
        match &self.bundle.schedule {
            Some(doc) => Ok(Some(doc.to_schedule(self.graph()?)?)),
            None => Ok(None),
        }
    }

    pub fn decomposition(&self) -> Result<Option<PathDecomposition>, Failure> {
        match &self.bundle.decomposition {
            Some(doc) => Ok(Some(doc.to_decomposition(self.graph()?)?)),
            None => Ok(None),
        }
    }
}

pub fn read_source(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

enum Parsed {
    Bundle(Bundle),
    Graph(GraphDoc),
    Schedule(ScheduleDoc),
    Decomposition(DecompositionDoc),
}

fn parse_json(text: &str) -> Result<Parsed, Failure> {
    let value: Value = serde_json::from_str(text)?;
    let has = |k: &str| value.get(k).is_some();
    Ok(if has("graph") {
        Parsed::Bundle(serde_json::from_value(value)?)
    } else if has("n") {
        Parsed::Graph(serde_json::from_value(value)?)
    } else if has("events") {
        Parsed::Schedule(serde_json::from_value(value)?)
    } else if has("bags") {
        Parsed::Decomposition(serde_json::from_value(value)?)
    } else {
        return Err(Failure::input(
            "unrecognised document: expected a graph, schedule, decomposition or bundle",
        ));
    })
}

fn parse_text_payload(text: &str, kind: PayloadKind) -> Result<Parsed, Failure> {
    let schedule = match kind {
        PayloadKind::Schedule => true,
        PayloadKind::Decomposition => false,
        PayloadKind::Auto => io::looks_like_schedule(text),
    };
    Ok(if schedule {
        Parsed::Schedule(io::parse_schedule_text(text)?)
    } else {
        Parsed::Decomposition(io::parse_decomposition_text(text))
    })
}

fn graph_from_doc(ctx: &Ctx, doc: &GraphDoc) -> Result<Graph, Failure> {
    let parsed = doc.to_graph()?;
    note_duplicates(ctx, parsed.duplicate_edges);
    Ok(parsed.graph)
}

fn note_duplicates(ctx: &Ctx, count: usize) {
    if count > 0 {
        ctx.note(&format!("merged {count} duplicate edge(s)"));
    }
}

/// Reads a graph file in either format; a bundle contributes its graph.
fn load_graph_file(ctx: &Ctx, text: &str) -> Result<(Graph, GraphDoc), Failure> {
    match GraphFormat::sniff(text) {
        GraphFormat::EdgeList => {
            let parsed = io::parse_edge_list(text)?;
            note_duplicates(ctx, parsed.duplicate_edges);
            let doc = GraphDoc::from_graph(&parsed.graph);
            Ok((parsed.graph, doc))
        }
        GraphFormat::Structured => {
            let doc = match parse_json(text)? {
                Parsed::Graph(doc) => doc,
                Parsed::Bundle(b) => b
                    .graph
                    .ok_or_else(|| Failure::input("bundle has no graph"))?,
                _ => return Err(Failure::input("expected a graph document")),
            };
            Ok((graph_from_doc(ctx, &doc)?, doc))
        }
    }
}

/// Loads the primary input and an optional separate graph file.
///
/// Without `--graph` the primary input must be a graph or a bundle, except
/// that an explicit decomposition payload may stand alone. With `--graph`
/// the primary input is the schedule or decomposition to work on.
pub fn load(
    ctx: &Ctx,
    input: Option<&Path>,
    graph_path: Option<&Path>,
    kind: PayloadKind,
) -> Result<Loaded, Failure> {
    let text = read_source(input)?;
    let mut bundle = Bundle::default();
    let mut graph = None;

    if let Some(gp) = graph_path {
        let (g, doc) = load_graph_file(ctx, &read_source(Some(gp))?)?;
        graph = Some(g);
        bundle.graph = Some(doc);
        let payload = if GraphFormat::sniff(&text) == GraphFormat::Structured {
            parse_json(&text)?
        } else {
            parse_text_payload(&text, kind)?
        };
        match payload {
            Parsed::Schedule(s) => bundle.schedule = Some(s),
            Parsed::Decomposition(d) => bundle.decomposition = Some(d),
            Parsed::Bundle(b) => {
                let graph_doc = bundle.graph.take();
                bundle = b;
                bundle.graph = graph_doc;
            }
            Parsed::Graph(_) => {
                return Err(Failure::input(
                    "--graph given, but the input is also a graph",
                ))
            }
        }
    } else if GraphFormat::sniff(&text) == GraphFormat::Structured {
        match parse_json(&text)? {
            Parsed::Bundle(b) => {
                bundle = b;
                if let Some(doc) = &bundle.graph {
                    graph = Some(graph_from_doc(ctx, doc)?);
                }
            }
            Parsed::Graph(doc) => {
                graph = Some(graph_from_doc(ctx, &doc)?);
                bundle.graph = Some(doc);
            }
            Parsed::Schedule(s) => bundle.schedule = Some(s),
            Parsed::Decomposition(d) => bundle.decomposition = Some(d),
        }
    } else if kind == PayloadKind::Decomposition {
        bundle.decomposition = Some(io::parse_decomposition_text(&text));
    } else {
        let (g, doc) = load_graph_file(ctx, &text)?;
        graph = Some(g);
        bundle.graph = Some(doc);
    }

    let family = bundle.graph.as_ref().and_then(|d| d.family.clone());
    Ok(Loaded {
        graph,
        family,
        bundle,
    })
}
