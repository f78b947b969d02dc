//! Deterministic constructions: the layered graphs `H^{k,d}_i`, balls of
//! regular `{p,q}` tessellations, and the named families used as a test
//! corpus.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{EmbeddedGraph, EmbeddingError};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("H^{{k,d}} needs 1 <= k < d with k dividing d (got k={k}, d={d})")]
    Divisibility { k: usize, d: usize },
    #[error("{{{p},{q}}} is not hyperbolic or Euclidean: 1/p + 1/q > 1/2")]
    NotHyperbolic { p: usize, q: usize },
    #[error("tessellation generator needs p >= 4, q >= 4 and radius >= 1 (got p={p}, q={q}, radius={radius})")]
    TessellationRange { p: usize, q: usize, radius: usize },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameter for {family}: {reason}")]
    BadParameter { family: &'static str, reason: String },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// A graph whose vertices are split into layers `S_0, S_1, ...` with every
/// edge joining consecutive layers.
#[derive(Clone, Debug)]
pub struct LayeredGraph {
    pub graph: Graph,
    pub layers: Vec<Vec<Vertex>>,
    /// Planar embedding, emitted for `k = 2` only.
    pub embedding: Option<EmbeddedGraph>,
}

impl LayeredGraph {
    /// Layer index of every vertex.
    pub fn layer_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.graph.vertex_count()];
        for (i, layer) in self.layers.iter().enumerate() {
            for &v in layer {
                out[v] = i;
            }
        }
        out
    }
}

/// Builds `H^{k,d}_i`.
///
/// `H_0 = K_{k,d-k}`; each further step cuts the newest layer into
/// consecutive `k`-tuples (children of one tuple stay together, in creation
/// order) and hangs `d - k` fresh vertices on every tuple.
pub fn gen_hkd(k: usize, d: usize, i: usize) -> Result<LayeredGraph, GenError> {
    if k == 0 || k >= d || !d.is_multiple_of(k) {
        return Err(GenError::Divisibility { k, d });
    }
    let fan = d - k;
    let mut layers: Vec<Vec<Vertex>> = vec![(0..k).collect(), (k..d).collect()];
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for a in 0..k {
        for c in k..d {
            edges.push((a, c));
        }
    }
    let mut n = d;

    // faces of the planar drawing (k = 2) and the face where each pair is opposite
    let planar = k == 2;
    let mut faces: Vec<Vec<Vertex>> = Vec::new();
    let mut pair_face: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    if planar {
        let ring = &layers[1];
        for j in 0..fan {
            let (x, y) = (ring[j], ring[(j + 1) % fan]);
            faces.push(vec![0, x, 1, y]);
            if j % 2 == 0 {
                pair_face.insert((x, y), faces.len() - 1);
            }
        }
    }

    for _ in 0..i {
        let current = layers.last().expect("nonempty").clone();
        let mut next = Vec::with_capacity(current.len() / k * fan);
        for tuple in current.chunks(k) {
            let children: Vec<Vertex> = (n..n + fan).collect();
            n += fan;
            for &c in &children {
                for &t in tuple {
                    edges.push((t, c));
                }
            }
            if planar {
                let (x, y) = (tuple[0], tuple[1]);
                let fi = pair_face[&(x, y)];
                let f = &faces[fi];
                let px = f.iter().position(|&v| v == x).expect("pair face contains x");
                let rot: Vec<Vertex> = (0..4).map(|s| f[(px + s) % 4]).collect();
                debug_assert_eq!(rot[2], y);
                let (u, w) = (rot[1], rot[3]);
                faces[fi] = vec![x, u, y, children[0]];
                for j in 0..fan - 1 {
                    faces.push(vec![x, children[j], y, children[j + 1]]);
                    if j % 2 == 0 {
                        pair_face.insert((children[j], children[j + 1]), faces.len() - 1);
                    }
                }
                faces.push(vec![x, children[fan - 1], y, w]);
            }
            next.extend(children);
        }
        layers.push(next);
    }

    let embedding = if planar {
        Some(EmbeddedGraph::from_faces(n, &faces, 0)?)
    } else {
        None
    };
    let graph = match &embedding {
        Some(e) => e.graph().clone(),
        None => Graph::from_edges(n, edges).expect("valid construction"),
    };
    Ok(LayeredGraph {
        graph,
        layers,
        embedding,
    })
}

/// A finite ball of the regular `{p,q}` tessellation around vertex 0.
#[derive(Clone, Debug)]
pub struct TessellationPatch {
    pub p: usize,
    pub q: usize,
    /// Number of face layers `F_0 .. F_{radius-1}`.
    pub radius: usize,
    pub embedding: EmbeddedGraph,
    pub root: Vertex,
    /// Bounded faces as vertex cycles, in the orientation used by the embedding.
    pub faces: Vec<Vec<Vertex>>,
    /// Construction layer of each bounded face.
    pub face_layer: Vec<usize>,
    /// Construction layer of each vertex (`0` for the root).
    pub vertex_layer: Vec<usize>,
    /// Vertices on the outer boundary cycle.
    pub boundary: Vec<bool>,
}

impl TessellationPatch {
    pub fn graph(&self) -> &Graph {
        self.embedding.graph()
    }

    /// Subgraph induced by the vertex layers `0..=max_layer`.
    pub fn ball(&self, max_layer: usize) -> Graph {
        let keep: Vec<bool> = self.vertex_layer.iter().map(|&l| l <= max_layer).collect();
        self.graph().induced(&keep)
    }

    /// The patch with the outer vertex layer removed; every vertex of it
    /// lies strictly inside the patch.
    pub fn interior(&self) -> Graph {
        self.ball(self.radius - 1)
    }
}

/// Grows a `{p,q}` ball one face layer at a time.
///
/// After each layer the outer boundary is a single cycle. Every boundary
/// vertex `b` gets `p - deg(b)` outward spokes; consecutive spokes at one
/// vertex bound a corner face with `q - 3` new vertices, and the spokes on
/// either side of a boundary edge bound a face with `q - 4` new vertices.
pub fn gen_tessellation(p: usize, q: usize, radius: usize) -> Result<TessellationPatch, GenError> {
    if p < 4 || q < 4 || radius == 0 {
        return Err(GenError::TessellationRange { p, q, radius });
    }
    if 2 * (p + q) > p * q {
        return Err(GenError::NotHyperbolic { p, q });
    }
    let mut deg: Vec<usize> = vec![0];
    let mut vertex_layer: Vec<usize> = vec![0];
    let mut faces: Vec<Vec<Vertex>> = Vec::new();
    let mut face_layer: Vec<usize> = Vec::new();

    let mut fresh = |layer: usize, deg: &mut Vec<usize>| {
        deg.push(0);
        vertex_layer.push(layer);
        deg.len() - 1
    };

    // face layer 0: p corner faces around the root
    let spokes: Vec<Vertex> = (0..p).map(|_| fresh(1, &mut deg)).collect();
    deg[0] = p;
    let mut boundary = Vec::new();
    for t in 0..p {
        let (a, b) = (spokes[t], spokes[(t + 1) % p]);
        let path: Vec<Vertex> = (0..q - 3).map(|_| fresh(1, &mut deg)).collect();
        let mut face = vec![0, a];
        face.extend(&path);
        face.push(b);
        faces.push(face);
        face_layer.push(0);
        boundary.push(a);
        boundary.extend(&path);
    }
    for (idx, &v) in boundary.iter().enumerate() {
        // spokes also see the root
        deg[v] = if idx % (q - 2) == 0 { 3 } else { 2 };
    }

    for layer in 1..radius {
        let m = boundary.len();
        let mut out: Vec<Vec<Vertex>> = Vec::with_capacity(m);
        for &b in &boundary {
            let r = p
                .checked_sub(deg[b])
                .filter(|&r| r >= 1)
                .expect("every boundary vertex has spare degree when p >= 4");
            let s: Vec<Vertex> = (0..r).map(|_| fresh(layer + 1, &mut deg)).collect();
            deg[b] = p;
            for &x in &s {
                deg[x] = 1;
            }
            out.push(s);
        }
        let mut next = Vec::new();
        for j in 0..m {
            let b = boundary[j];
            let s = &out[j];
            for t in 0..s.len() - 1 {
                let path: Vec<Vertex> = (0..q - 3).map(|_| fresh(layer + 1, &mut deg)).collect();
                let mut face = vec![b, s[t]];
                face.extend(&path);
                face.push(s[t + 1]);
                faces.push(face);
                face_layer.push(layer);
                next.push(s[t]);
                next.extend(&path);
            }
            let (b2, first2) = (boundary[(j + 1) % m], out[(j + 1) % m][0]);
            let last = *s.last().expect("at least one spoke");
            let path: Vec<Vertex> = (0..q - 4).map(|_| fresh(layer + 1, &mut deg)).collect();
            let mut face = vec![b, last];
            face.extend(&path);
            face.push(first2);
            face.push(b2);
            faces.push(face);
            face_layer.push(layer);
            next.push(last);
            next.extend(&path);
        }
        for &v in &next {
            deg[v] += 2;
        }
        boundary = next;
    }

    let n = deg.len();
    let embedding = EmbeddedGraph::from_faces(n, &faces, 0)?;
    let mut on_boundary = vec![false; n];
    for &v in &boundary {
        on_boundary[v] = true;
    }
    Ok(TessellationPatch {
        p,
        q,
        radius,
        embedding,
        root: 0,
        faces,
        face_layer,
        vertex_layer,
        boundary: on_boundary,
    })
}

/// Families available through [`gen_named`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Complete,
    CompleteBipartite,
    Star,
    Tree,
    Cycle,
    Path,
    Apollonian,
    Icosahedron,
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "complete" => Family::Complete,
            "complete-bipartite" => Family::CompleteBipartite,
            "star" => Family::Star,
            "tree" => Family::Tree,
            "cycle" => Family::Cycle,
            "path" => Family::Path,
            "apollonian" => Family::Apollonian,
            "icosahedron" => Family::Icosahedron,
            other => return Err(GenError::UnknownFamily(other.to_string())),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Complete => "complete",
            Family::CompleteBipartite => "complete-bipartite",
            Family::Star => "star",
            Family::Tree => "tree",
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Apollonian => "apollonian",
            Family::Icosahedron => "icosahedron",
        };
        f.write_str(s)
    }
}

/// Parameters for [`gen_named`]; each family reads the fields it needs.
///
/// * `complete`: `n`
/// * `complete-bipartite`: `m`, `n`
/// * `star`: `n` leaves
/// * `tree`: `arity`, `depth` (levels below the root)
/// * `cycle`, `path`: `n`
/// * `apollonian`: `rounds` of face subdivision
/// * `icosahedron`: none
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: usize,
    pub m: usize,
    pub arity: usize,
    pub depth: usize,
    pub rounds: usize,
}

pub fn gen_named(family: Family, params: FamilyParams) -> Result<Graph, GenError> {
    let bad = |family: &'static str, reason: &str| GenError::BadParameter {
        family,
        reason: reason.to_string(),
    };
    let FamilyParams {
        n,
        m,
        arity,
        depth,
        rounds,
    } = params;
    let g = match family {
        Family::Complete => complete(n),
        Family::CompleteBipartite => complete_bipartite(m, n),
        Family::Star => complete_bipartite(1, n),
        Family::Tree => {
            if arity == 0 {
                return Err(bad("tree", "arity must be positive"));
            }
            ary_tree(arity, depth)
        }
        Family::Cycle => {
            if n < 3 {
                return Err(bad("cycle", "n must be at least 3"));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle")
        }
        Family::Path => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path"),
        Family::Apollonian => apollonian(rounds).graph().clone(),
        Family::Icosahedron => icosahedron().graph().clone(),
    };
    Ok(g)
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).expect("complete")
}

/// `K_{m,n}` with the `m`-side on ids `0..m`.
pub fn complete_bipartite(m: usize, n: usize) -> Graph {
    Graph::from_edges(m + n, (0..m).flat_map(|i| (m..m + n).map(move |j| (i, j)))).expect("complete bipartite")
}

/// Complete `arity`-ary tree with `depth` levels below the root, numbered
/// in breadth-first order.
pub fn ary_tree(arity: usize, depth: usize) -> Graph {
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut n = 1;
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * arity);
        for &v in &level {
            for _ in 0..arity {
                edges.push((v, n));
                next.push(n);
                n += 1;
            }
        }
        level = next;
    }
    Graph::from_edges(n, edges).expect("tree")
}

/// Stacked triangulation: start from a triangle and, each round, insert a
/// vertex into every bounded face.
pub fn apollonian(rounds: usize) -> EmbeddedGraph {
    let outer = vec![0, 2, 1];
    let mut inner = vec![vec![0, 1, 2]];
    let mut n = 3;
    for _ in 0..rounds {
        let mut next = Vec::with_capacity(inner.len() * 3);
        for f in &inner {
            let (a, b, c) = (f[0], f[1], f[2]);
            next.push(vec![a, b, n]);
            next.push(vec![b, c, n]);
            next.push(vec![c, a, n]);
            n += 1;
        }
        inner = next;
    }
    inner.push(outer);
    EmbeddedGraph::from_faces(n, &inner, 0).expect("stacked triangulation is a sphere")
}

pub fn icosahedron() -> EmbeddedGraph {
    let up = |i: usize| 1 + i % 5;
    let lo = |i: usize| 6 + i % 5;
    let mut faces = Vec::new();
    for i in 0..5 {
        faces.push(vec![0, up(i), up(i + 1)]);
        faces.push(vec![up(i), lo(i), up(i + 1)]);
        faces.push(vec![up(i + 1), lo(i), lo(i + 1)]);
        faces.push(vec![11, lo(i + 1), lo(i)]);
    }
    EmbeddedGraph::from_faces(12, &faces, 0).expect("icosahedron is a sphere")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degeneracy, is_forest};

    #[test]
    fn hkd_base_and_layer_sizes() {
        let h0 = gen_hkd(2, 8, 0).unwrap();
        assert_eq!(h0.graph, complete_bipartite(2, 6));
        assert_eq!(h0.layers[1].len(), 6);

        let h1 = gen_hkd(2, 8, 1).unwrap();
        assert_eq!(h1.layers.len(), 3);
        assert_eq!(h1.layers[2].len(), 18);
        assert_eq!(h1.graph.max_degree(), 8);

        for i in 0..4 {
            let h = gen_hkd(3, 9, i).unwrap();
            for (j, layer) in h.layers.iter().enumerate() {
                assert_eq!(layer.len(), 3 * 2usize.pow(j as u32));
            }
        }
    }

    #[test]
    fn hkd_edges_join_consecutive_layers() {
        let h = gen_hkd(2, 6, 3).unwrap();
        let layer = h.layer_of();
        for (u, v) in h.graph.edges() {
            assert_eq!(layer[u].abs_diff(layer[v]), 1);
        }
    }

    #[test]
    fn hkd_planar_for_k2() {
        for d in [4, 6, 8, 10] {
            for i in 0..4 {
                let h = gen_hkd(2, d, i).unwrap();
                let e = h.embedding.as_ref().unwrap();
                assert_eq!(e.graph(), &h.graph);
                assert_eq!(e.euler_genus_traced().unwrap(), 0, "d={d} i={i}");
            }
        }
        assert!(gen_hkd(3, 9, 2).unwrap().embedding.is_none());
    }

    #[test]
    fn hkd_rejects_bad_parameters() {
        assert!(gen_hkd(3, 8, 1).is_err());
        assert!(gen_hkd(4, 4, 0).is_err());
        assert!(gen_hkd(0, 4, 0).is_err());
    }

    #[test]
    fn hkd_is_k_degenerate() {
        assert_eq!(degeneracy(&gen_hkd(2, 8, 2).unwrap().graph).degeneracy, 2);
        assert_eq!(degeneracy(&gen_hkd(3, 9, 2).unwrap().graph).degeneracy, 3);
    }

    #[test]
    fn tessellation_interior_is_regular() {
        for (p, q) in [(4, 4), (4, 5), (5, 4), (4, 6), (6, 4), (5, 5)] {
            let patch = gen_tessellation(p, q, 3).unwrap();
            let g = patch.graph();
            for v in g.vertices() {
                if !patch.boundary[v] {
                    assert_eq!(g.degree(v), p, "{{{p},{q}}} vertex {v}");
                }
            }
            assert!(patch.faces.iter().all(|f| f.len() == q));
            assert_eq!(patch.embedding.euler_genus_traced().unwrap(), 0);
            let faces = patch.embedding.trace_faces();
            assert_eq!(faces.len(), patch.faces.len() + 1);
        }
    }

    #[test]
    fn square_grid_ball() {
        let patch = gen_tessellation(4, 4, 2).unwrap();
        // the 5x5 grid
        assert_eq!(patch.graph().vertex_count(), 25);
        assert_eq!(patch.graph().edge_count(), 40);
    }

    #[test]
    fn tessellation_rejects_spherical() {
        assert_eq!(
            gen_tessellation(5, 3, 2).unwrap_err(),
            GenError::TessellationRange { p: 5, q: 3, radius: 2 }
        );
        assert!(gen_tessellation(4, 5, 0).is_err());
    }

    #[test]
    fn named_families() {
        let p = FamilyParams::default();
        let k33 = gen_named(Family::CompleteBipartite, FamilyParams { m: 3, n: 3, ..p }).unwrap();
        assert_eq!(k33.edge_count(), 9);
        let t = gen_named(
            Family::Tree,
            FamilyParams {
                arity: 2,
                depth: 4,
                ..p
            },
        )
        .unwrap();
        assert_eq!(t.vertex_count(), 31);
        assert!(is_forest(&t));
        let a = apollonian(3);
        assert_eq!(a.euler_genus_traced().unwrap(), 0);
        assert_eq!(degeneracy(a.graph()).degeneracy, 3);
        assert_eq!(a.graph().vertex_count(), 3 + 1 + 3 + 9);
        let ico = icosahedron();
        assert_eq!(ico.graph().edge_count(), 30);
        assert!(ico.graph().vertices().all(|v| ico.graph().degree(v) == 5));
        assert_eq!(ico.euler_genus_traced().unwrap(), 0);
        assert!("wheel".parse::<Family>().is_err());
    }
}
