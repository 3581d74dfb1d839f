//! Undirected simple graphs with dense vertex ids.
//!
//! Vertices are `0..n`. Labels are optional and only matter for I/O; every
//! algorithm in this crate works on ids.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Vertex identifier, dense in `0..n`.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(String),
    #[error("vertex id {id} out of range for a graph with {n} vertices")]
    OutOfRange { id: usize, n: usize },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
}

/// An undirected simple graph.
///
/// Immutable after construction: no self-loops, no parallel edges and every
/// endpoint in range are enforced by the constructors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
    adjacency: Vec<Vec<Vertex>>,
    labels: BTreeMap<Vertex, String>,
}

/// Result of building a graph from a list that may contain repeated edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub graph: Graph,
    /// Number of edges that were already present and got merged.
    pub duplicate_edges: usize,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn edgeless(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
            adjacency: vec![Vec::new(); n],
            labels: BTreeMap::new(),
        }
    }

    /// Builds a graph, rejecting self-loops and out-of-range endpoints.
    /// Duplicate edges (in either orientation) are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Ok(Self::from_edges_counting(n, edges)?.graph)
    }

    /// Like [`Graph::from_edges`] but also reports how many duplicates were merged.
    pub fn from_edges_counting<I>(n: usize, edges: I) -> Result<Parsed, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut set = BTreeSet::new();
        let mut duplicate_edges = 0;
        for (u, v) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(GraphError::OutOfRange { id, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u.to_string()));
            }
            if !set.insert((u.min(v), u.max(v))) {
                duplicate_edges += 1;
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Parsed {
            graph: Graph {
                n,
                edges: set,
                adjacency,
                labels: BTreeMap::new(),
            },
            duplicate_edges,
        })
    }

    /// Attaches display labels. Labels must be distinct and refer to existing vertices.
    pub fn with_labels(mut self, labels: BTreeMap<Vertex, String>) -> Result<Self, GraphError> {
        let mut seen = HashMap::new();
        for (&v, label) in &labels {
            if v >= self.n {
                return Err(GraphError::OutOfRange { id: v, n: self.n });
            }
            if let Some(prev) = seen.insert(label.as_str(), v) {
                return Err(GraphError::Malformed {
                    line: 0,
                    msg: format!("label `{label}` used for vertices {prev} and {v}"),
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Sorted neighbourhood of `v`.
    pub fn neighbours(&self, v: Vertex) -> Result<&[Vertex], GraphError> {
        self.adjacency
            .get(v)
            .map(Vec::as_slice)
            .ok_or(GraphError::OutOfRange { id: v, n: self.n })
    }

    /// Unchecked neighbourhood; panics on an out-of-range id.
    pub(crate) fn adj(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn labels(&self) -> &BTreeMap<Vertex, String> {
        &self.labels
    }

    pub fn has_labels(&self) -> bool {
        !self.labels.is_empty()
    }

    /// Display name of `v`: its label, or the decimal id when unlabelled.
    pub fn label(&self, v: Vertex) -> String {
        self.labels
            .get(&v)
            .cloned()
            .unwrap_or_else(|| v.to_string())
    }

    /// Resolves a display name back to an id. Labels take precedence; a bare
    /// decimal is accepted for unlabelled vertices.
    pub fn resolve(&self, name: &str) -> Result<Vertex, GraphError> {
        if let Some((&v, _)) = self.labels.iter().find(|(_, l)| l.as_str() == name) {
            return Ok(v);
        }
        match name.parse::<usize>() {
            Ok(v) if v < self.n && !self.labels.contains_key(&v) => Ok(v),
            _ => Err(GraphError::UnknownLabel(name.to_string())),
        }
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adjacency[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Degeneracy via repeated removal of a minimum-degree vertex (smallest id on ties).
///
/// Returns the largest degree seen at removal time; 0 for edgeless graphs.
pub fn degeneracy(g: &Graph) -> usize {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut best = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("an unremoved vertex remains");
        best = best.max(deg[v]);
        removed[v] = true;
        for &u in g.adj(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    best
}

impl fmt::Display for Graph {
    /// Edge-list rendering; isolated vertices get a line of their own.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::write_edge_list(self))
    }
}
