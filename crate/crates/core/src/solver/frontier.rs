use crate::graph::{Graph, Vertex};

/// Incremental prefix boundary for building an ordering one vertex at a time.
pub(crate) struct Frontier<'g> {
    g: &'g Graph,
    /// Unplaced neighbours of each vertex.
    open: Vec<usize>,
    placed: Vec<bool>,
    boundary: usize,
    len: usize,
}

impl<'g> Frontier<'g> {
    pub fn new(g: &'g Graph) -> Self {
        Frontier {
            g,
            open: (0..g.n()).map(|v| g.degree(v)).collect(),
            placed: vec![false; g.n()],
            boundary: 0,
            len: 0,
        }
    }

    pub fn boundary(&self) -> usize {
        self.boundary
    }

    pub fn is_placed(&self, v: Vertex) -> bool {
        self.placed[v]
    }

    pub fn is_complete(&self) -> bool {
        self.len == self.g.n()
    }

    /// Boundary size after placing `v`.
    pub fn boundary_after(&self, v: Vertex) -> usize {
        debug_assert!(!self.placed[v]);
        let joins = usize::from(self.open[v] > 0);
        let leaves = self
            .g
            .adj(v)
            .iter()
            .filter(|&&u| self.placed[u] && self.open[u] == 1)
            .count();
        self.boundary + joins - leaves
    }

    pub fn place(&mut self, v: Vertex) {
        self.boundary = self.boundary_after(v);
        self.placed[v] = true;
        self.len += 1;
        for &u in self.g.adj(v) {
            self.open[u] -= 1;
        }
    }

    /// Reverts the most recent `place(v)`.
    pub fn unplace(&mut self, v: Vertex) {
        for &u in self.g.adj(v) {
            self.open[u] += 1;
        }
        self.placed[v] = false;
        self.len -= 1;
        let joins = usize::from(self.open[v] > 0);
        let leaves = self
            .g
            .adj(v)
            .iter()
            .filter(|&&u| self.placed[u] && self.open[u] == 1)
            .count();
        self.boundary = self.boundary + leaves - joins;
    }
}
