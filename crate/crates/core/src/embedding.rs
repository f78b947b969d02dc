//! Rotation-system embeddings, face tracing and light edges.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{edge, Edge, Graph, GraphError, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("rotation at vertex {0} is not a permutation of its neighbors")]
    BadRotation(Vertex),
    #[error("rotation lists {0} vertices but the graph has {1}")]
    RotationSize(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("face list is not consistently orientable around edge ({0}, {1})")]
    NonOrientable(Vertex, Vertex),
    #[error("edge ({0}, {1}) lies on more than two faces")]
    OverfullEdge(Vertex, Vertex),
    #[error("faces around vertex {0} do not form a disk")]
    NotManifold(Vertex),
    #[error("face shorter than three vertices")]
    DegenerateFace,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One face boundary walk as a cyclic sequence of directed edge sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub sides: Vec<(Vertex, Vertex)>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    /// Tails of the sides, in walk order.
    pub fn vertices(&self) -> Vec<Vertex> {
        self.sides.iter().map(|&(u, _)| u).collect()
    }
}

/// A graph together with a cyclic order of neighbors at each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedGraph {
    graph: Graph,
    rotation: Vec<Vec<Vertex>>,
    declared_genus: usize,
    // rotation_index[v][j]: position of the j-th sorted neighbor of v in rotation[v]
    rotation_index: Vec<Vec<usize>>,
}

impl EmbeddedGraph {
    pub fn new(graph: Graph, rotation: Vec<Vec<Vertex>>, declared_genus: usize) -> Result<Self, EmbeddingError> {
        if rotation.len() != graph.vertex_count() {
            return Err(EmbeddingError::RotationSize(rotation.len(), graph.vertex_count()));
        }
        let mut rotation_index = Vec::with_capacity(rotation.len());
        for (v, rot) in rotation.iter().enumerate() {
            let nbrs = graph.neighbors(v);
            if rot.len() != nbrs.len() {
                return Err(EmbeddingError::BadRotation(v));
            }
            let mut index = vec![usize::MAX; nbrs.len()];
            for (pos, &u) in rot.iter().enumerate() {
                let j = nbrs.binary_search(&u).map_err(|_| EmbeddingError::BadRotation(v))?;
                if index[j] != usize::MAX {
                    return Err(EmbeddingError::BadRotation(v));
                }
                index[j] = pos;
            }
            rotation_index.push(index);
        }
        Ok(EmbeddedGraph {
            graph,
            rotation,
            declared_genus,
            rotation_index,
        })
    }

    /// Builds the embedding whose faces are the given vertex cycles.
    ///
    /// Face orientations are made consistent first. Edges used by a single
    /// face lie on the boundary of a disk-like region; the missing corners
    /// at those vertices are closed up, which adds the outer face(s) when
    /// the embedding is traced.
    pub fn from_faces(n: usize, faces: &[Vec<Vertex>], declared_genus: usize) -> Result<Self, EmbeddingError> {
        let mut edges = Vec::new();
        for f in faces {
            if f.len() < 3 {
                return Err(EmbeddingError::DegenerateFace);
            }
            for i in 0..f.len() {
                edges.push((f[i], f[(i + 1) % f.len()]));
            }
        }
        let graph = Graph::from_edges(n, edges)?;
        let flip = orient_faces(&graph, faces)?;

        // succ[v][j] = w means the corner (u, v, w) exists with u the j-th neighbor of v
        let mut succ: Vec<Vec<Option<Vertex>>> = graph.vertices().map(|v| vec![None; graph.degree(v)]).collect();
        let mut has_pred: Vec<Vec<bool>> = graph.vertices().map(|v| vec![false; graph.degree(v)]).collect();
        for (f, &flipped) in faces.iter().zip(&flip) {
            let len = f.len();
            for i in 0..len {
                let (u, v, w) = if flipped {
                    (f[(i + 2) % len], f[(i + 1) % len], f[i])
                } else {
                    (f[i], f[(i + 1) % len], f[(i + 2) % len])
                };
                let nb = graph.neighbors(v);
                let ju = nb.binary_search(&u).expect("face edge");
                let jw = nb.binary_search(&w).expect("face edge");
                if succ[v][ju].is_some() || has_pred[v][jw] {
                    return Err(EmbeddingError::NotManifold(v));
                }
                succ[v][ju] = Some(w);
                has_pred[v][jw] = true;
            }
        }

        let mut rotation = Vec::with_capacity(n);
        for v in graph.vertices() {
            let nb = graph.neighbors(v);
            if nb.is_empty() {
                rotation.push(Vec::new());
                continue;
            }
            let starts: Vec<usize> = (0..nb.len()).filter(|&j| !has_pred[v][j]).collect();
            let start = match starts.len() {
                0 => 0,
                1 => starts[0],
                _ => return Err(EmbeddingError::NotManifold(v)),
            };
            let mut rot = Vec::with_capacity(nb.len());
            let mut j = start;
            loop {
                rot.push(nb[j]);
                match succ[v][j] {
                    Some(w) => {
                        j = nb.binary_search(&w).expect("neighbor");
                        if j == start {
                            break;
                        }
                    }
                    None => break,
                }
                if rot.len() > nb.len() {
                    return Err(EmbeddingError::NotManifold(v));
                }
            }
            if rot.len() != nb.len() {
                return Err(EmbeddingError::NotManifold(v));
            }
            rotation.push(rot);
        }
        EmbeddedGraph::new(graph, rotation, declared_genus)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rotation
    }

    pub fn declared_genus(&self) -> usize {
        self.declared_genus
    }

    /// The neighbor following `u` in the rotation at `v`.
    pub fn next_around(&self, v: Vertex, u: Vertex) -> Vertex {
        let j = self.graph.neighbors(v).binary_search(&u).expect("u adjacent to v");
        let rot = &self.rotation[v];
        rot[(self.rotation_index[v][j] + 1) % rot.len()]
    }

    fn dart_offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.graph.vertex_count() + 1);
        let mut acc = 0;
        for v in self.graph.vertices() {
            off.push(acc);
            acc += self.graph.degree(v);
        }
        off.push(acc);
        off
    }

    /// Traces every face: the side after `u -> v` is `v -> w` where `w`
    /// follows `u` in the rotation at `v`.
    pub fn trace_faces(&self) -> Vec<Face> {
        let off = self.dart_offsets();
        let dart = |u: Vertex, v: Vertex| off[u] + self.graph.neighbors(u).binary_search(&v).expect("adjacent");
        let mut used = vec![false; off[self.graph.vertex_count()]];
        let mut faces = Vec::new();
        for u in self.graph.vertices() {
            for &v in self.graph.neighbors(u) {
                if used[dart(u, v)] {
                    continue;
                }
                let mut sides = Vec::new();
                let (mut a, mut b) = (u, v);
                while !used[dart(a, b)] {
                    used[dart(a, b)] = true;
                    sides.push((a, b));
                    let c = self.next_around(b, a);
                    a = b;
                    b = c;
                }
                faces.push(Face { sides });
            }
        }
        faces
    }

    /// Euler genus `2 - (n - e + f)` of the orientable surface traced by the
    /// rotation system. Isolated vertices are ignored.
    pub fn euler_genus_traced(&self) -> Result<usize, EmbeddingError> {
        let comps = self.graph.components().into_iter().filter(|c| c.len() > 1).count();
        if comps > 1 {
            return Err(EmbeddingError::Disconnected);
        }
        let n = self.graph.non_isolated().count() as i64;
        if n == 0 {
            return Ok(0);
        }
        let e = self.graph.edge_count() as i64;
        let f = self.trace_faces().len() as i64;
        Ok((2 - (n - e + f)) as usize)
    }
}

/// Chooses per-face flips so that every edge shared by two faces is
/// traversed in opposite directions.
fn orient_faces(graph: &Graph, faces: &[Vec<Vertex>]) -> Result<Vec<bool>, EmbeddingError> {
    // for each edge, the faces using it and the direction they use
    let mut users: std::collections::HashMap<Edge, Vec<(usize, bool)>> =
        std::collections::HashMap::with_capacity(graph.edge_count());
    for (fi, f) in faces.iter().enumerate() {
        for i in 0..f.len() {
            let (a, b) = (f[i], f[(i + 1) % f.len()]);
            users.entry(edge(a, b)).or_default().push((fi, a < b));
        }
    }
    let mut adjacent: Vec<Vec<(usize, bool, Edge)>> = vec![Vec::new(); faces.len()];
    for (&e, list) in &users {
        match list.as_slice() {
            [_] => {}
            [(f1, d1), (f2, d2)] => {
                // same stored direction means one of them must flip
                let must_differ = d1 == d2;
                adjacent[*f1].push((*f2, must_differ, e));
                adjacent[*f2].push((*f1, must_differ, e));
            }
            _ => return Err(EmbeddingError::OverfullEdge(e.0, e.1)),
        }
    }
    let mut flip: Vec<Option<bool>> = vec![None; faces.len()];
    for s in 0..faces.len() {
        if flip[s].is_some() {
            continue;
        }
        flip[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(f) = queue.pop_front() {
            let ff = flip[f].expect("assigned");
            for &(g, must_differ, e) in &adjacent[f] {
                let want = ff ^ must_differ;
                match flip[g] {
                    None => {
                        flip[g] = Some(want);
                        queue.push_back(g);
                    }
                    Some(x) if x != want => return Err(EmbeddingError::NonOrientable(e.0, e.1)),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(flip.into_iter().map(|x| x.unwrap_or(false)).collect())
}

/// Light-edge degree threshold `d(γ)` for a surface of Euler genus `γ`.
pub fn d_of_genus(genus: usize) -> usize {
    match genus {
        0..=1 => 10,
        2..=3 => 12,
        4..=5 => 2 * genus + 6,
        _ => 2 * genus + 4,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LightEdgeError {
    #[error("minimum degree {0} is below 3")]
    MinDegreeTooSmall(usize),
    #[error("lightest edge ({u}, {v}) has weight {weight} > d(γ)+3 = {limit}; the graph does not embed in Euler genus {genus}")]
    TooHeavy {
        u: Vertex,
        v: Vertex,
        weight: usize,
        limit: usize,
        genus: usize,
    },
}

/// Minimum-weight edge `uv` (weight `deg u + deg v`), ties broken
/// lexicographically.
pub fn find_light_edge(g: &Graph, genus: usize) -> Result<(Vertex, Vertex), LightEdgeError> {
    let delta = g.min_degree();
    if delta < 3 {
        return Err(LightEdgeError::MinDegreeTooSmall(delta));
    }
    let (weight, (u, v)) = g
        .edges()
        .map(|(u, v)| (g.degree(u) + g.degree(v), (u, v)))
        .min()
        .ok_or(LightEdgeError::MinDegreeTooSmall(0))?;
    let limit = d_of_genus(genus) + 3;
    if weight > limit {
        return Err(LightEdgeError::TooHeavy {
            u,
            v,
            weight,
            limit,
            genus,
        });
    }
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    fn sorted_sizes(e: &EmbeddedGraph) -> Vec<usize> {
        let mut s: Vec<usize> = e.trace_faces().iter().map(Face::len).collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn cycle_has_two_faces() {
        let g = Graph::from_edges(4, (0..4).map(|i| (i, (i + 1) % 4))).unwrap();
        let rot = (0..4).map(|i| vec![(i + 3) % 4, (i + 1) % 4]).collect();
        let e = EmbeddedGraph::new(g, rot, 0).unwrap();
        assert_eq!(sorted_sizes(&e), vec![4, 4]);
        assert_eq!(e.euler_genus_traced().unwrap(), 0);
    }

    #[test]
    fn planar_k4_from_faces() {
        let faces = vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]];
        let e = EmbeddedGraph::from_faces(4, &faces, 0).unwrap();
        assert_eq!(e.graph(), &complete(4));
        assert_eq!(sorted_sizes(&e), vec![3, 3, 3, 3]);
        assert_eq!(e.euler_genus_traced().unwrap(), 0);
    }

    #[test]
    fn from_faces_fixes_orientation_and_closes_outer_face() {
        // two squares sharing an edge, listed with clashing orientations
        let faces = vec![vec![0, 1, 4, 3], vec![1, 2, 5, 4]];
        let e = EmbeddedGraph::from_faces(6, &faces, 0).unwrap();
        assert_eq!(sorted_sizes(&e), vec![4, 4, 6]);
        assert_eq!(e.euler_genus_traced().unwrap(), 0);
    }

    #[test]
    fn nonplanar_rotations_trace_positive_genus() {
        let k5 = complete(5);
        let rot: Vec<Vec<usize>> = (0..5).map(|v| k5.neighbors(v).to_vec()).collect();
        let e = EmbeddedGraph::new(k5, rot, 0).unwrap();
        assert!(e.euler_genus_traced().unwrap() >= 1);

        let k33 = Graph::from_edges(6, (0..3).flat_map(|i| (3..6).map(move |j| (i, j)))).unwrap();
        let rot: Vec<Vec<usize>> = (0..6).map(|v| k33.neighbors(v).to_vec()).collect();
        let e = EmbeddedGraph::new(k33, rot, 0).unwrap();
        assert!(e.euler_genus_traced().unwrap() >= 1);
    }

    #[test]
    fn rotation_must_permute_neighbors() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let err = EmbeddedGraph::new(g, vec![vec![1], vec![0, 0], vec![1]], 0).unwrap_err();
        assert_eq!(err, EmbeddingError::BadRotation(1));
    }

    #[test]
    fn d_of_genus_table() {
        assert_eq!(d_of_genus(0), 10);
        assert_eq!(d_of_genus(1), 10);
        assert_eq!(d_of_genus(2), 12);
        assert_eq!(d_of_genus(3), 12);
        assert_eq!(d_of_genus(4), 14);
        assert_eq!(d_of_genus(5), 16);
        assert_eq!(d_of_genus(6), 16);
        assert_eq!(d_of_genus(10), 24);
    }

    #[test]
    fn light_edges() {
        assert_eq!(find_light_edge(&complete(7), 0), Ok((0, 1)));
        match find_light_edge(&complete(12), 0) {
            Err(LightEdgeError::TooHeavy { weight, limit, .. }) => {
                assert_eq!((weight, limit), (22, 13))
            }
            other => panic!("unexpected {other:?}"),
        }
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(find_light_edge(&path, 0), Err(LightEdgeError::MinDegreeTooSmall(1)));
    }
}
