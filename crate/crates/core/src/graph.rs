//! Simple undirected graphs on dense vertex ids and the structural
//! predicates shared by the rest of the crate.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

/// Undirected edge stored with the smaller endpoint first.
pub type Edge = (Vertex, Vertex);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(Vertex, Vertex, usize),
}

/// Normalizes an edge so that the smaller id comes first.
#[inline]
pub fn edge(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A finite simple undirected graph with vertex ids `0..n`.
///
/// Neighbor lists are kept sorted, so iteration order is always by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged;
    /// self-loops are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange(u, v, n));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// Like [`Graph::from_edges`] but sizes the vertex set to fit the edges.
    pub fn from_edge_list(edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::from_edges(n, edges.iter().copied())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Minimum degree over all vertices (isolated vertices included).
    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges in lexicographic order, smaller endpoint first.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Vertices of positive degree.
    pub fn non_isolated(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices().filter(|&v| !self.adj[v].is_empty())
    }

    /// The spanning subgraph on the same vertex ids with the given edges.
    pub fn with_edges<I>(&self, edges: I) -> Graph
    where
        I: IntoIterator<Item = Edge>,
    {
        Graph::from_edges(self.vertex_count(), edges).expect("edges drawn from a valid graph")
    }

    /// Subgraph induced by the vertices with `keep[v]`; vertex ids are preserved.
    pub fn induced(&self, keep: &[bool]) -> Graph {
        self.with_edges(self.edges().filter(|&(u, v)| keep[u] && keep[v]))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertex_count() <= other.vertex_count() && self.edges().all(|(u, v)| other.has_edge(u, v))
    }
}

/// Union of two graphs over a shared vertex universe.
pub fn union(k: &Graph, l: &Graph) -> Graph {
    let n = k.vertex_count().max(l.vertex_count());
    Graph::from_edges(n, k.edges().chain(l.edges())).expect("union of simple graphs")
}

/// Result of minimum-degree peeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    pub degeneracy: usize,
    /// Removal sequence; ties are broken by smallest id.
    pub order: Vec<Vertex>,
}

/// Repeatedly removes a vertex of minimum current degree and records the
/// largest degree seen at removal time.
pub fn degeneracy(g: &Graph) -> Degeneracy {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = g.vertices().map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while let Some((dv, v)) = queue.pop_first() {
        d = d.max(dv);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
    }
    Degeneracy { degeneracy: d, order }
}

/// True iff the graph has no cycle.
pub fn is_forest(g: &Graph) -> bool {
    // a graph is a forest exactly when |E| = |V| - #components
    g.edge_count() + g.components().len() == g.vertex_count()
}

/// Two vertices together with `k` of their common neighbors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K2kWitness {
    pub u: Vertex,
    pub v: Vertex,
    pub common: Vec<Vertex>,
}

/// Finds the lexicographically smallest pair `u < v` with at least `k`
/// common neighbors, returning the `k` smallest of them.
pub fn contains_k2k(g: &Graph, k: usize) -> Option<K2kWitness> {
    assert!(k >= 2, "K_{{2,k}} detection needs k >= 2");
    let n = g.vertex_count();
    let mut count = vec![0usize; n];
    let mut touched = Vec::new();
    for u in g.vertices() {
        for &w in g.neighbors(u) {
            for &v in g.neighbors(w) {
                if v > u {
                    if count[v] == 0 {
                        touched.push(v);
                    }
                    count[v] += 1;
                }
            }
        }
        let best = touched.iter().copied().filter(|&v| count[v] >= k).min();
        for &v in &touched {
            count[v] = 0;
        }
        touched.clear();
        if let Some(v) = best {
            let common = common_neighbors(g, u, v).into_iter().take(k).collect();
            return Some(K2kWitness { u, v, common });
        }
    }
    None
}

/// Largest number of common neighbors over all vertex pairs.
pub fn max_common_neighbors(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut count = vec![0usize; n];
    let mut best = 0;
    for u in g.vertices() {
        let mut touched = Vec::new();
        for &w in g.neighbors(u) {
            for &v in g.neighbors(w) {
                if v > u {
                    if count[v] == 0 {
                        touched.push(v);
                    }
                    count[v] += 1;
                }
            }
        }
        for v in touched {
            best = best.max(count[v]);
            count[v] = 0;
        }
    }
    best
}

fn common_neighbors(g: &Graph, u: Vertex, v: Vertex) -> Vec<Vertex> {
    let (a, b) = (g.neighbors(u), g.neighbors(v));
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// An orientation: one `(tail, head)` arc per edge, in the graph's edge order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub arcs: Vec<(Vertex, Vertex)>,
}

impl Orientation {
    pub fn indegrees(&self, n: usize) -> Vec<usize> {
        let mut indeg = vec![0; n];
        for &(_, h) in &self.arcs {
            indeg[h] += 1;
        }
        indeg
    }

    pub fn max_indegree(&self, n: usize) -> usize {
        self.indegrees(n).into_iter().max().unwrap_or(0)
    }

    /// Checks that every edge of `g` is oriented exactly once.
    pub fn covers(&self, g: &Graph) -> bool {
        let mut seen: Vec<Edge> = self.arcs.iter().map(|&(t, h)| edge(t, h)).collect();
        seen.sort_unstable();
        seen.iter().copied().eq(g.edges())
    }
}

/// Returned when no orientation with the requested indegree bound exists.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no orientation with max indegree {k}: {edges} edges span the {} vertices of a dense set", .dense_set.len())]
pub struct OrientationError {
    pub k: usize,
    /// A vertex set spanning more than `k * |set|` edges.
    pub dense_set: Vec<Vertex>,
    pub edges: usize,
}

/// Orients `g` so that every indegree is at most `k`, or proves that
/// impossible by exhibiting a subgraph of density greater than `k`.
///
/// Starts from the orientation towards the larger id and repairs each
/// over-full vertex by reversing a shortest directed path that ends at it
/// and starts at a vertex with spare indegree.
pub fn orient_max_indegree(g: &Graph, k: usize) -> Result<Orientation, OrientationError> {
    let n = g.vertex_count();
    let edges: Vec<Edge> = g.edges().collect();
    // head[e] == edges[e].1 means the arc points to the larger endpoint
    let mut head: Vec<Vertex> = edges.iter().map(|&(_, v)| v).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        incident[u].push(i);
        incident[v].push(i);
    }
    let mut indeg = vec![0usize; n];
    for &h in &head {
        indeg[h] += 1;
    }
    let tail = |e: usize, head: &[Vertex]| {
        let (u, v) = edges[e];
        if head[e] == v {
            u
        } else {
            v
        }
    };

    let mut pred_edge = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    for root in 0..n {
        while indeg[root] > k {
            // BFS backwards along arcs entering the current vertex
            let mut reached = vec![root];
            visited[root] = true;
            let mut queue = VecDeque::from([root]);
            let mut found = None;
            'bfs: while let Some(x) = queue.pop_front() {
                for &e in &incident[x] {
                    if head[e] != x {
                        continue;
                    }
                    let t = tail(e, &head);
                    if visited[t] {
                        continue;
                    }
                    visited[t] = true;
                    pred_edge[t] = e;
                    reached.push(t);
                    if indeg[t] < k {
                        found = Some(t);
                        break 'bfs;
                    }
                    queue.push_back(t);
                }
            }
            for &x in &reached {
                visited[x] = false;
            }
            let Some(start) = found else {
                reached.sort_unstable();
                let mut inside = vec![false; n];
                for &x in &reached {
                    inside[x] = true;
                }
                let spanned = edges.iter().filter(|&&(u, v)| inside[u] && inside[v]).count();
                return Err(OrientationError {
                    k,
                    dense_set: reached,
                    edges: spanned,
                });
            };
            // flip the path start -> ... -> root
            let mut x = start;
            while x != root {
                let e = pred_edge[x];
                let (u, v) = edges[e];
                let next = head[e];
                head[e] = if head[e] == u { v } else { u };
                x = next;
            }
            indeg[start] += 1;
            indeg[root] -= 1;
        }
    }
    let arcs = edges
        .iter()
        .zip(&head)
        .map(|(&(u, v), &h)| if h == v { (u, v) } else { (v, u) })
        .collect();
    Ok(Orientation { arcs })
}

/// Which part of a decomposition an edge belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeLabel {
    T,
    T1,
    L,
}
