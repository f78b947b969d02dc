//! Edge decompositions of embedded graphs into a low-degeneracy part and a
//! bounded-degree part, run as forward reduction loops.
//!
//! Every loop repeatedly applies the first rule that fires, scanning
//! smallest ids first, and labels the edges it removes. A vertex is
//! *small* when its current degree is at most `s = d(γ)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::d_of_genus;
use crate::graph::{contains_k2k, degeneracy, edge, is_forest, Edge, EdgeLabel, Graph, K2kWitness, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    A,
    B,
    C,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "a",
            Variant::B => "b",
            Variant::C => "c",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(Variant::A),
            "b" => Ok(Variant::B),
            "c" => Ok(Variant::C),
            other => Err(format!("unknown variant `{other}` (expected a, b or c)")),
        }
    }
}

/// A labeling of every edge with `T`, `T1` or `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub variant: Variant,
    pub s: usize,
    pub k: Option<usize>,
    /// Sorted by edge.
    pub labels: Vec<(Vertex, Vertex, EdgeLabel)>,
}

impl Decomposition {
    /// Spanning subgraph of `base` formed by the edges with `label`.
    pub fn part(&self, base: &Graph, label: EdgeLabel) -> Graph {
        base.with_edges(
            self.labels
                .iter()
                .filter(|&&(_, _, l)| l == label)
                .map(|&(u, v, _)| edge(u, v)),
        )
    }

    pub fn count(&self, label: EdgeLabel) -> usize {
        self.labels.iter().filter(|&&(_, _, l)| l == label).count()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("no reduction applies with {remaining_edges} edges left (min degree {min_degree}); the graph does not embed in Euler genus {genus}")]
    NoReductionApplies {
        genus: usize,
        remaining_edges: usize,
        min_degree: usize,
    },
    #[error("graph contains K_{{2,{k}}}: vertices {} and {} share {:?}", .witness.u, .witness.v, .witness.common)]
    K2kPresent { k: usize, witness: K2kWitness },
    #[error("variant c needs k >= 2 (got {0})")]
    InvalidK(usize),
}

/// Working copy of the graph with the rule-trigger sets kept up to date.
struct Residual {
    variant: Variant,
    s: usize,
    adj: Vec<BTreeSet<Vertex>>,
    alive: Vec<bool>,
    eligible: Vec<bool>,
    isolated: BTreeSet<Vertex>,
    deg1: BTreeSet<Vertex>,
    deg2: BTreeSet<Vertex>,
    small_edges: BTreeSet<Edge>,
    edges_left: usize,
}

impl Residual {
    fn new(g: &Graph, variant: Variant, s: usize) -> Self {
        let n = g.vertex_count();
        let mut r = Residual {
            variant,
            s,
            adj: g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect(),
            alive: vec![true; n],
            eligible: vec![false; n],
            isolated: BTreeSet::new(),
            deg1: BTreeSet::new(),
            deg2: BTreeSet::new(),
            small_edges: BTreeSet::new(),
            edges_left: g.edge_count(),
        };
        for v in 0..n {
            r.eligible[v] = r.is_eligible(v);
            r.index_degree(v);
        }
        for (u, v) in g.edges() {
            if r.eligible[u] && r.eligible[v] {
                r.small_edges.insert((u, v));
            }
        }
        r
    }

    fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Whether `v` may be an endpoint of an edge moved to `L`.
    fn is_eligible(&self, v: Vertex) -> bool {
        let d = self.degree(v);
        match self.variant {
            Variant::A | Variant::C => d <= self.s,
            Variant::B => (3..=self.s).contains(&d),
        }
    }

    fn index_degree(&mut self, v: Vertex) {
        self.isolated.remove(&v);
        self.deg1.remove(&v);
        self.deg2.remove(&v);
        if !self.alive[v] {
            return;
        }
        match self.degree(v) {
            0 => self.isolated.insert(v),
            1 => self.deg1.insert(v),
            2 => self.deg2.insert(v),
            _ => false,
        };
    }

    fn refresh(&mut self, v: Vertex) {
        self.index_degree(v);
        let now = self.is_eligible(v);
        if now != self.eligible[v] {
            self.eligible[v] = now;
            let nbrs: Vec<Vertex> = self.adj[v].iter().copied().collect();
            for w in nbrs {
                let e = edge(v, w);
                if now && self.eligible[w] {
                    self.small_edges.insert(e);
                } else {
                    self.small_edges.remove(&e);
                }
            }
        }
    }

    fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
        self.small_edges.remove(&edge(u, v));
        self.edges_left -= 1;
        self.refresh(u);
        self.refresh(v);
    }

    fn delete_vertex(&mut self, v: Vertex) {
        let nbrs: Vec<Vertex> = self.adj[v].iter().copied().collect();
        for w in nbrs {
            self.remove_edge(v, w);
        }
        self.alive[v] = false;
        self.index_degree(v);
    }

    fn min_degree(&self) -> usize {
        (0..self.adj.len())
            .filter(|&v| self.alive[v] && !self.adj[v].is_empty())
            .map(|v| self.degree(v))
            .min()
            .unwrap_or(0)
    }
}

fn finish(variant: Variant, s: usize, k: Option<usize>, mut labels: Vec<(Vertex, Vertex, EdgeLabel)>) -> Decomposition {
    labels.sort_unstable();
    Decomposition { variant, s, k, labels }
}

/// Variant (a): `G = T ∪ L` with `T` 2-degenerate and
/// `ĥδ(v) - 2 <= deg_L(v) <= ĥδ(v)` where `ĥδ(v) = min(deg v, s)`.
///
/// Rules: drop an isolated vertex; move an edge between two small vertices
/// to `L`; put the edges of a vertex of degree at most 2 into `T` and
/// delete it.
pub fn decompose_a(g: &Graph, genus: usize) -> Result<Decomposition, DecomposeError> {
    reduce_ab(g, genus, Variant::A)
}

/// Variant (b): as (a) but `L` edges join small vertices of degree at least
/// 3, giving `deg_L(v) <= ĥδ(v) - 2`.
pub fn decompose_b(g: &Graph, genus: usize) -> Result<Decomposition, DecomposeError> {
    reduce_ab(g, genus, Variant::B)
}

fn reduce_ab(g: &Graph, genus: usize, variant: Variant) -> Result<Decomposition, DecomposeError> {
    let s = d_of_genus(genus);
    let mut r = Residual::new(g, variant, s);
    let mut labels = Vec::with_capacity(g.edge_count());
    loop {
        if let Some(v) = r.isolated.pop_first() {
            r.alive[v] = false;
            continue;
        }
        if let Some(&(u, v)) = r.small_edges.first() {
            labels.push((u, v, EdgeLabel::L));
            r.remove_edge(u, v);
            continue;
        }
        let low = match (r.deg1.first(), r.deg2.first()) {
            (Some(&a), Some(&b)) => Some(a.min(b)),
            (a, b) => a.or(b).copied(),
        };
        if let Some(v) = low {
            for &w in &r.adj[v] {
                let (a, b) = edge(v, w);
                labels.push((a, b, EdgeLabel::T));
            }
            r.delete_vertex(v);
            continue;
        }
        if r.edges_left > 0 {
            return Err(DecomposeError::NoReductionApplies {
                genus,
                remaining_edges: r.edges_left,
                min_degree: r.min_degree(),
            });
        }
        break;
    }
    Ok(finish(variant, s, None, labels))
}

/// Variant (c), for graphs without `K_{2,k}`: `G = T ∪ T1 ∪ L` with `T`,
/// `T1` forests, `Δ(T1) <= (k-1)(s-1) + 2` and the (a) window on `deg_L`.
///
/// Rules, in order: drop an isolated vertex; small–small edge to `L`;
/// pendant edge to `T`; for a degree-2 vertex `v` with a neighbor `u` of
/// degree at most `k(s-1) + 1` (smaller id if both qualify) and other
/// neighbor `w`, put `vw` in `T`, `uv` in `T1`, and delete `v`.
pub fn decompose_c(g: &Graph, genus: usize, k: usize) -> Result<Decomposition, DecomposeError> {
    if k < 2 {
        return Err(DecomposeError::InvalidK(k));
    }
    if let Some(witness) = contains_k2k(g, k) {
        return Err(DecomposeError::K2kPresent { k, witness });
    }
    let s = d_of_genus(genus);
    let threshold = k * (s - 1) + 1;
    let mut r = Residual::new(g, Variant::C, s);
    let mut labels = Vec::with_capacity(g.edge_count());
    loop {
        if let Some(v) = r.isolated.pop_first() {
            r.alive[v] = false;
            continue;
        }
        if let Some(&(u, v)) = r.small_edges.first() {
            labels.push((u, v, EdgeLabel::L));
            r.remove_edge(u, v);
            continue;
        }
        if let Some(&v) = r.deg1.first() {
            let w = *r.adj[v].first().expect("degree one");
            let (a, b) = edge(v, w);
            labels.push((a, b, EdgeLabel::T));
            r.delete_vertex(v);
            continue;
        }
        let suppressible = r.deg2.iter().find_map(|&v| {
            let mut it = r.adj[v].iter().copied();
            let (x, y) = (it.next()?, it.next()?);
            if r.degree(x) <= threshold {
                Some((v, x, y))
            } else if r.degree(y) <= threshold {
                Some((v, y, x))
            } else {
                None
            }
        });
        if let Some((v, u, w)) = suppressible {
            let (a, b) = edge(v, w);
            labels.push((a, b, EdgeLabel::T));
            let (a, b) = edge(u, v);
            labels.push((a, b, EdgeLabel::T1));
            r.delete_vertex(v);
            continue;
        }
        if r.edges_left > 0 {
            return Err(DecomposeError::NoReductionApplies {
                genus,
                remaining_edges: r.edges_left,
                min_degree: r.min_degree(),
            });
        }
        break;
    }
    Ok(finish(Variant::C, s, Some(k), labels))
}

/// Runs the requested variant.
pub fn decompose(g: &Graph, genus: usize, variant: Variant, k: Option<usize>) -> Result<Decomposition, DecomposeError> {
    match variant {
        Variant::A => decompose_a(g, genus),
        Variant::B => decompose_b(g, genus),
        Variant::C => decompose_c(g, genus, k.unwrap_or(2)),
    }
}

/// One failed clause of a decomposition contract.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub variant: Variant,
    pub passed: bool,
    pub violations: Vec<Violation>,
    pub t_edges: usize,
    pub t1_edges: usize,
    pub l_edges: usize,
    pub max_degree_t: usize,
    pub max_degree_t1: usize,
    pub max_degree_l: usize,
    pub degeneracy_t: usize,
}

/// Checks a decomposition against the contract of its variant, using the
/// degrees of the original graph.
pub fn verify_decomposition(g: &Graph, d: &Decomposition) -> DecompositionReport {
    let mut violations = Vec::new();
    let mut fail = |clause: &str, detail: String| {
        violations.push(Violation {
            clause: clause.to_string(),
            detail,
        })
    };

    let mut labeled: Vec<Edge> = d.labels.iter().map(|&(u, v, _)| edge(u, v)).collect();
    labeled.sort_unstable();
    let dup = labeled.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]);
    if let Some(e) = dup {
        fail("partition", format!("edge {e:?} labeled more than once"));
    }
    labeled.dedup();
    if let Some(e) = labeled.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
        fail("partition", format!("labeled edge {e:?} is not in the graph"));
    }
    if let Some(e) = g.edges().find(|e| labeled.binary_search(e).is_err()) {
        fail("partition", format!("edge {e:?} is unlabeled"));
    }

    let t = d.part(g, EdgeLabel::T);
    let t1 = d.part(g, EdgeLabel::T1);
    let l = d.part(g, EdgeLabel::L);
    let s = d.s;
    let cap = |v: Vertex| g.degree(v).min(s);
    let degeneracy_t = degeneracy(&t).degeneracy;

    match d.variant {
        Variant::A | Variant::B => {
            if t1.edge_count() > 0 {
                fail(
                    "no-t1",
                    format!("variant {} has {} T1 edges", d.variant, t1.edge_count()),
                );
            }
            if degeneracy_t > 2 {
                fail("t-2-degenerate", format!("T is {degeneracy_t}-degenerate"));
            }
        }
        Variant::C => {
            if !is_forest(&t) {
                fail("t-forest", "T contains a cycle".to_string());
            }
            if !is_forest(&t1) {
                fail("t1-forest", "T1 contains a cycle".to_string());
            }
            match d.k {
                Some(k) if k >= 2 => {
                    let limit = (k - 1) * (s - 1) + 2;
                    if t1.max_degree() > limit {
                        fail(
                            "t1-max-degree",
                            format!("Δ(T1) = {} > (k-1)(s-1)+2 = {limit}", t1.max_degree()),
                        );
                    }
                }
                _ => fail("k", "variant c needs k >= 2".to_string()),
            }
        }
    }

    for v in g.vertices() {
        let dl = l.degree(v);
        let h = cap(v);
        match d.variant {
            Variant::A | Variant::C => {
                if dl + 2 < h || dl > h {
                    fail(
                        "l-degree-window",
                        format!("vertex {v}: deg_L = {dl} outside [{}, {h}]", h.saturating_sub(2)),
                    );
                }
            }
            Variant::B => {
                if g.degree(v) >= 2 && dl + 2 > h {
                    fail("l-degree-cap", format!("vertex {v}: deg_L = {dl} > ĥδ - 2 = {}", h - 2));
                }
                if g.degree(v) <= 1 && dl != 0 {
                    fail(
                        "l-degree-leaf",
                        format!("vertex {v} of degree {} has deg_L = {dl}", g.degree(v)),
                    );
                }
            }
        }
    }

    DecompositionReport {
        variant: d.variant,
        passed: violations.is_empty(),
        violations,
        t_edges: t.edge_count(),
        t1_edges: t1.edge_count(),
        l_edges: l.edge_count(),
        max_degree_t: t.max_degree(),
        max_degree_t1: t1.max_degree(),
        max_degree_l: l.max_degree(),
        degeneracy_t,
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeelError {
    #[error("threshold peeling needs γ >= 2 and 0 < ε <= 1 (got γ={genus}, ε={epsilon})")]
    InvalidParameter { genus: usize, epsilon: f64 },
    #[error("{remaining_edges} edges remain after {rounds} rounds")]
    ResidualNonempty { rounds: usize, remaining_edges: usize },
}

/// Peels the graph in `ceil(1/ε)` rounds. Round `i` repeatedly removes a
/// vertex of residual degree below `γ^{εi} + 6` and collects its residual
/// edges into `G_i`.
pub fn threshold_peel(g: &Graph, genus: usize, epsilon: f64) -> Result<Vec<Graph>, PeelError> {
    if genus < 2 || !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(PeelError::InvalidParameter { genus, epsilon });
    }
    let rounds = (1.0 / epsilon).ceil() as usize;
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut parts = Vec::with_capacity(rounds);
    let mut left = g.edge_count();
    for i in 1..=rounds {
        let threshold = (genus as f64).powf(epsilon * i as f64) + 6.0;
        let mut queue: BTreeSet<(usize, Vertex)> = (0..n).filter(|&v| alive[v]).map(|v| (adj[v].len(), v)).collect();
        let mut taken = Vec::new();
        while let Some(&(d, v)) = queue.first() {
            if (d as f64) >= threshold {
                break;
            }
            queue.pop_first();
            alive[v] = false;
            let nbrs: Vec<Vertex> = std::mem::take(&mut adj[v]).into_iter().collect();
            for w in nbrs {
                taken.push(edge(v, w));
                queue.remove(&(adj[w].len(), w));
                adj[w].remove(&v);
                queue.insert((adj[w].len(), w));
                left -= 1;
            }
        }
        parts.push(g.with_edges(taken));
    }
    if left > 0 {
        return Err(PeelError::ResidualNonempty {
            rounds,
            remaining_edges: left,
        });
    }
    Ok(parts)
}
