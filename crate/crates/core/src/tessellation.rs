//! Layer partitions of tessellation patches, earthworms, the matchings
//! built from them and the forest cover that bounds the spectral radius.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{Bound, BoundError};
use crate::generators::TessellationPatch;
use crate::graph::{edge, is_forest, Edge, Graph, Vertex};
use crate::spectral::{fractional_bound, rho_power, SpectralError};

#[derive(Debug, Error)]
pub enum TessError {
    #[error("cycle is not interior: vertex {0} lies on the patch boundary")]
    CycleNotInterior(Vertex),
    #[error("not a cycle of the patch: {0}")]
    NotACycle(String),
    #[error("earthworm in layer {layer} from {start} has length {length} < {required}")]
    ShortEarthworm {
        layer: usize,
        start: Vertex,
        length: usize,
        required: usize,
    },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Vertex and face layers grown from a root by alternating closure:
/// `F_i` are the faces meeting `V_i` not already in earlier layers, and
/// `V_{i+1}` the new vertices of `F_i`.
#[derive(Clone, Debug)]
pub struct LayerStructure {
    pub root: Vertex,
    pub graph: Graph,
    pub faces: Vec<Vec<Vertex>>,
    pub vertex_layers: Vec<Vec<Vertex>>,
    pub face_layers: Vec<Vec<usize>>,
    pub layer_of: Vec<usize>,
    /// A vertex of `V_i`, `i >= 1`, is black when it has a neighbor in `V_{i-1}`.
    pub black: Vec<bool>,
    /// Layers `1..=interior_depth` are complete.
    pub interior_depth: usize,
}

impl LayerStructure {
    pub fn layer_graph(&self, i: usize) -> Graph {
        let keep: Vec<bool> = self.layer_of.iter().map(|&l| l == i).collect();
        self.graph.induced(&keep)
    }

    /// Union of the layer graphs `G_1 .. G_depth`.
    pub fn layer_union(&self) -> Graph {
        let d = self.interior_depth;
        self.graph.with_edges(
            self.graph
                .edges()
                .filter(|&(u, v)| self.layer_of[u] == self.layer_of[v] && (1..=d).contains(&self.layer_of[u])),
        )
    }

    /// Subgraph induced by layers `0..=interior_depth`.
    pub fn interior(&self) -> Graph {
        let keep: Vec<bool> = self.layer_of.iter().map(|&l| l <= self.interior_depth).collect();
        self.graph.induced(&keep)
    }

    /// Vertices of layer `i` in cyclic order, if `G_i` is a cycle.
    pub fn layer_cycle(&self, i: usize) -> Option<Vec<Vertex>> {
        let verts = self.vertex_layers.get(i)?;
        let in_layer = |v: Vertex| self.layer_of[v] == i;
        let nbrs = |v: Vertex| -> Vec<Vertex> {
            self.graph
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| in_layer(w))
                .collect()
        };
        if verts.len() < 3 || verts.iter().any(|&v| nbrs(v).len() != 2) {
            return None;
        }
        let start = *verts.iter().min()?;
        let mut order = vec![start];
        let (mut prev, mut cur) = (start, nbrs(start).into_iter().min()?);
        while cur != start {
            order.push(cur);
            let n = nbrs(cur);
            let next = if n[0] == prev { n[1] } else { n[0] };
            prev = cur;
            cur = next;
            if order.len() > verts.len() {
                return None;
            }
        }
        (order.len() == verts.len()).then_some(order)
    }
}

/// Computes the layer partition of a patch around `root`. Only the layers
/// below the outer boundary count as interior.
pub fn layer_partition(patch: &TessellationPatch, root: Vertex) -> LayerStructure {
    let boundary_layer = patch
        .boundary
        .iter()
        .position(|&b| b)
        .map(|_| patch.radius)
        .unwrap_or(usize::MAX);
    let mut ls = partition_faces(patch.graph().clone(), patch.faces.clone(), root);
    ls.interior_depth = boundary_layer
        .saturating_sub(1)
        .min(ls.vertex_layers.len().saturating_sub(1));
    // a layer touching the boundary is incomplete
    while ls.interior_depth > 0 && ls.vertex_layers[ls.interior_depth].iter().any(|&v| patch.boundary[v]) {
        ls.interior_depth -= 1;
    }
    ls
}

/// Layer partition from an arbitrary list of bounded faces. Every layer
/// except the last is treated as interior.
pub fn partition_faces(graph: Graph, faces: Vec<Vec<Vertex>>, root: Vertex) -> LayerStructure {
    let n = graph.vertex_count();
    let mut faces_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, f) in faces.iter().enumerate() {
        for &v in f {
            faces_at[v].push(i);
        }
    }
    let mut layer_of = vec![usize::MAX; n];
    let mut face_seen = vec![false; faces.len()];
    let mut vertex_layers = vec![vec![root]];
    let mut face_layers = Vec::new();
    layer_of[root] = 0;
    loop {
        let i = vertex_layers.len() - 1;
        let mut fl = Vec::new();
        for &v in &vertex_layers[i] {
            for &f in &faces_at[v] {
                if !face_seen[f] {
                    face_seen[f] = true;
                    fl.push(f);
                }
            }
        }
        fl.sort_unstable();
        let mut next = BTreeSet::new();
        for &f in &fl {
            for &v in &faces[f] {
                if layer_of[v] == usize::MAX {
                    layer_of[v] = i + 1;
                    next.insert(v);
                }
            }
        }
        if fl.is_empty() {
            break;
        }
        face_layers.push(fl);
        if next.is_empty() {
            break;
        }
        vertex_layers.push(next.into_iter().collect());
    }
    let black = (0..n)
        .map(|v| {
            let l = layer_of[v];
            l >= 1 && l != usize::MAX && graph.neighbors(v).iter().any(|&w| layer_of[w] == l - 1)
        })
        .collect();
    let interior_depth = vertex_layers.len().saturating_sub(2);
    LayerStructure {
        root,
        graph,
        faces,
        vertex_layers,
        face_layers,
        layer_of,
        black,
        interior_depth,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerCheck {
    pub layer: usize,
    pub size: usize,
    pub is_cycle: bool,
    pub back_neighbors_ok: bool,
    pub faces_ok: bool,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerReport {
    pub passed: bool,
    pub layers: Vec<LayerCheck>,
    /// Bounded faces of size below `q`.
    pub short_faces: Vec<usize>,
}

/// Checks on each interior layer `i`: (a) `G_i` is a cycle; (b) every
/// vertex of `V_i` has at most one neighbor in `V_{i-1}`; (c) every face of
/// `F_{i-1}` has at most two vertices in `V_{i-1}`, adjacent if two.
pub fn verify_layer_properties(ls: &LayerStructure, q: usize) -> LayerReport {
    let mut layers = Vec::new();
    for i in 1..=ls.interior_depth {
        let mut violations = Vec::new();
        let is_cycle = ls.layer_cycle(i).is_some();
        if !is_cycle {
            violations.push(format!("(a) G_{i} is not a cycle"));
        }
        let mut back_ok = true;
        for &v in &ls.vertex_layers[i] {
            let back = ls
                .graph
                .neighbors(v)
                .iter()
                .filter(|&&w| ls.layer_of[w] == i - 1)
                .count();
            if back > 1 {
                back_ok = false;
                violations.push(format!("(b) vertex {v} has {back} neighbors in V_{}", i - 1));
            }
        }
        let mut faces_ok = true;
        for &f in &ls.face_layers[i - 1] {
            let inner: Vec<Vertex> = ls.faces[f]
                .iter()
                .copied()
                .filter(|&v| ls.layer_of[v] == i - 1)
                .collect();
            let ok = match inner.len() {
                0 | 1 => true,
                2 => ls.graph.has_edge(inner[0], inner[1]),
                _ => false,
            };
            if !ok {
                faces_ok = false;
                violations.push(format!("(c) face {f} meets V_{} in {inner:?}", i - 1));
            }
        }
        layers.push(LayerCheck {
            layer: i,
            size: ls.vertex_layers[i].len(),
            is_cycle,
            back_neighbors_ok: back_ok,
            faces_ok,
            violations,
        });
    }
    let short_faces: Vec<usize> = (0..ls.faces.len()).filter(|&f| ls.faces[f].len() < q).collect();
    LayerReport {
        passed: short_faces.is_empty() && layers.iter().all(|l| l.violations.is_empty()),
        layers,
        short_faces,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDegreeReport {
    /// `|V(C)|`.
    pub k: usize,
    /// Sum over the cycle of degrees in the closed disk.
    pub d: usize,
    pub q: usize,
    /// `2(k-1)(q-1)/(q-2)`.
    pub limit: f64,
    pub holds: bool,
    pub inside_faces: usize,
}

/// Checks `d < 2(k-1)(q-1)/(q-2)` for the disk bounded by `cycle`, in exact
/// integer arithmetic. The cycle must avoid the patch boundary.
pub fn boundary_degree_check(patch: &TessellationPatch, cycle: &[Vertex]) -> Result<BoundaryDegreeReport, TessError> {
    check_with_index(patch, &FaceIndex::new(&patch.faces), cycle)
}

fn check_with_index(
    patch: &TessellationPatch,
    index: &FaceIndex,
    cycle: &[Vertex],
) -> Result<BoundaryDegreeReport, TessError> {
    let g = patch.graph();
    let k = cycle.len();
    if k < 3 {
        return Err(TessError::NotACycle(format!("{k} vertices")));
    }
    if let Some(&v) = cycle.iter().find(|&&v| v >= g.vertex_count() || patch.boundary[v]) {
        return Err(TessError::CycleNotInterior(v));
    }
    let distinct: BTreeSet<Vertex> = cycle.iter().copied().collect();
    if distinct.len() != k {
        return Err(TessError::NotACycle("repeated vertex".into()));
    }
    let cyc_edges: BTreeSet<Edge> = (0..k).map(|i| edge(cycle[i], cycle[(i + 1) % k])).collect();
    if let Some(&(u, v)) = cyc_edges.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
        return Err(TessError::NotACycle(format!("({u}, {v}) is not an edge")));
    }

    let inside = index.disk(&patch.faces, &cyc_edges)?;
    let mut disk: BTreeSet<Edge> = cyc_edges.clone();
    for &f in &inside {
        let face = &patch.faces[f];
        for j in 0..face.len() {
            disk.insert(edge(face[j], face[(j + 1) % face.len()]));
        }
    }
    let inside_faces = inside.len();
    let d = disk
        .iter()
        .map(|&(u, v)| distinct.contains(&u) as usize + distinct.contains(&v) as usize)
        .sum();
    let q = patch.q;
    Ok(BoundaryDegreeReport {
        k,
        d,
        q,
        limit: 2.0 * (k - 1) as f64 * (q - 1) as f64 / (q - 2) as f64,
        holds: d * (q - 2) < 2 * (k - 1) * (q - 1),
        inside_faces,
    })
}

/// Faces on each edge of a patch.
struct FaceIndex {
    edge_faces: HashMap<Edge, Vec<usize>>,
}

impl FaceIndex {
    fn new(faces: &[Vec<Vertex>]) -> Self {
        let mut edge_faces: HashMap<Edge, Vec<usize>> = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for j in 0..f.len() {
                edge_faces.entry(edge(f[j], f[(j + 1) % f.len()])).or_default().push(i);
            }
        }
        FaceIndex { edge_faces }
    }

    /// Faces enclosed by `cycle`. Floods both sides of the first cycle edge
    /// in lockstep; the side that reaches the outer face is the outside.
    fn disk(&self, faces: &[Vec<Vertex>], cycle: &BTreeSet<Edge>) -> Result<Vec<usize>, TessError> {
        let e0 = *cycle.first().expect("nonempty cycle");
        let Some(&[a, b]) = self.edge_faces.get(&e0).map(Vec::as_slice) else {
            return Err(TessError::NotACycle(format!("{e0:?} is not between two faces")));
        };
        let mut sides = [Side::new(a), Side::new(b)];
        loop {
            for t in 0..2 {
                match sides[t].step(self, faces, cycle) {
                    Some(true) => {
                        let other = &mut sides[1 - t];
                        while let Some(outer) = other.step(self, faces, cycle) {
                            if outer {
                                return Err(TessError::NotACycle("cycle does not separate the patch".into()));
                            }
                        }
                        let mut inside: Vec<usize> = other.seen.iter().copied().collect();
                        inside.sort_unstable();
                        return Ok(inside);
                    }
                    Some(false) => {}
                    None => {
                        let mut inside: Vec<usize> = sides[t].seen.iter().copied().collect();
                        inside.sort_unstable();
                        return Ok(inside);
                    }
                }
            }
        }
    }
}

struct Side {
    seen: std::collections::HashSet<usize>,
    queue: VecDeque<usize>,
}

impl Side {
    fn new(f: usize) -> Self {
        Side {
            seen: [f].into_iter().collect(),
            queue: [f].into_iter().collect(),
        }
    }

    /// Expands one face. `Some(true)` when it lies on the outer face,
    /// `None` when the side is exhausted.
    fn step(&mut self, index: &FaceIndex, faces: &[Vec<Vertex>], cycle: &BTreeSet<Edge>) -> Option<bool> {
        let f = self.queue.pop_front()?;
        let face = &faces[f];
        let mut outer = false;
        for j in 0..face.len() {
            let e = edge(face[j], face[(j + 1) % face.len()]);
            if cycle.contains(&e) {
                continue;
            }
            let fs = &index.edge_faces[&e];
            outer |= fs.len() == 1;
            for &h in fs {
                if self.seen.insert(h) {
                    self.queue.push_back(h);
                }
            }
        }
        Some(outer)
    }
}

/// Maximal path of a layer cycle between black vertices whose inner
/// vertices are white, oriented from the smaller black endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Earthworm {
    pub layer: usize,
    pub vertices: Vec<Vertex>,
}

impl Earthworm {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| edge(w[0], w[1]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarthwormSet {
    pub worms: Vec<Earthworm>,
    /// Layers that were skipped or had no black vertex.
    pub violations: Vec<String>,
}

impl EarthwormSet {
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for w in &self.worms {
            *h.entry(w.len()).or_insert(0) += 1;
        }
        h
    }

    pub fn min_len(&self) -> Option<usize> {
        self.worms.iter().map(Earthworm::len).min()
    }
}

/// Splits each interior layer cycle at its black vertices. Worms with an
/// empty edge set are reported as violations.
pub fn earthworms(ls: &LayerStructure, _q: usize) -> EarthwormSet {
    let mut worms = Vec::new();
    let mut violations = Vec::new();
    for i in 1..=ls.interior_depth {
        let Some(cycle) = ls.layer_cycle(i) else {
            violations.push(format!("layer {i} is not a cycle"));
            continue;
        };
        let m = cycle.len();
        let blacks: Vec<usize> = (0..m).filter(|&j| ls.black[cycle[j]]).collect();
        if blacks.is_empty() {
            violations.push(format!("layer {i} has no black vertex"));
            continue;
        }
        for (t, &a) in blacks.iter().enumerate() {
            let b = blacks[(t + 1) % blacks.len()];
            let span = if b > a { b - a } else { b + m - a };
            let mut vs: Vec<Vertex> = (0..=span).map(|j| cycle[(a + j) % m]).collect();
            if vs.len() < 2 || vs[0] == vs[1] {
                violations.push(format!("layer {i}: zero-length earthworm at {}", cycle[a]));
                continue;
            }
            if vs.last() < vs.first() {
                vs.reverse();
            }
            worms.push(Earthworm { layer: i, vertices: vs });
        }
    }
    worms.sort_by(|x, y| (x.layer, &x.vertices).cmp(&(y.layer, &y.vertices)));
    EarthwormSet { worms, violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matchings {
    /// `sets[t]` is `M_{t+1}`.
    pub sets: Vec<Vec<Edge>>,
    /// Vertices shared by two edges of one set.
    pub violations: Vec<String>,
}

/// `M_t` takes edge `t` of every worm, counting from its canonical start.
pub fn build_matchings(worms: &EarthwormSet, q: usize) -> Result<Matchings, TessError> {
    let count = q.saturating_sub(3);
    let mut sets = vec![Vec::new(); count];
    for w in &worms.worms {
        if w.len() < count {
            return Err(TessError::ShortEarthworm {
                layer: w.layer,
                start: w.vertices[0],
                length: w.len(),
                required: count,
            });
        }
        for (t, e) in w.edges().take(count).enumerate() {
            sets[t].push(e);
        }
    }
    let mut violations = Vec::new();
    for (t, set) in sets.iter_mut().enumerate() {
        set.sort_unstable();
        let mut seen = BTreeSet::new();
        for &(u, v) in set.iter() {
            for x in [u, v] {
                if !seen.insert(x) {
                    violations.push(format!("M_{} has two edges at vertex {x}", t + 1));
                }
            }
        }
    }
    Ok(Matchings { sets, violations })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestCheck {
    pub part: usize,
    pub edges: usize,
    pub is_forest: bool,
    pub max_degree: usize,
    pub rho_upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestReport {
    pub passed: bool,
    pub parts: Vec<ForestCheck>,
    /// `T_{q-2}` has maximum degree at most 2.
    pub layer_union_ok: bool,
    pub multiplicity: usize,
    pub fractional_value: f64,
    pub rho_lower: f64,
    pub rho_upper: f64,
    pub fractional_ok: bool,
}

/// `T_t` is the interior minus `M_t` for `t < q-2`, and `T_{q-2}` the
/// union of the interior layer graphs. Every interior edge lies in at
/// least `q-3` of them.
pub fn verify_forests(
    ls: &LayerStructure,
    q: usize,
    matchings: &Matchings,
    tolerance: f64,
) -> Result<ForestReport, TessError> {
    let interior = ls.interior();
    let mut parts = Vec::new();
    for set in &matchings.sets {
        let drop: BTreeSet<Edge> = set.iter().copied().collect();
        parts.push(interior.with_edges(interior.edges().filter(|e| !drop.contains(e))));
    }
    parts.push(ls.layer_union());
    let p = q.saturating_sub(3).max(1);
    let fb = fractional_bound(&interior, &parts, p, tolerance)?;
    let mut checks = Vec::new();
    let last = parts.len() - 1;
    for (t, g) in parts.iter().enumerate() {
        checks.push(ForestCheck {
            part: t + 1,
            edges: g.edge_count(),
            is_forest: t == last || is_forest(g),
            max_degree: g.max_degree(),
            rho_upper: fb.part_upper[t],
        });
    }
    let est = rho_power(&interior, tolerance)?;
    let layer_union_ok = parts[last].max_degree() <= 2;
    let fractional_ok = est.lower <= fb.value + 1e-9;
    Ok(ForestReport {
        passed: layer_union_ok && fractional_ok && checks.iter().all(|c| c.is_forest),
        parts: checks,
        layer_union_ok,
        multiplicity: p,
        fractional_value: fb.value,
        rho_lower: est.lower,
        rho_upper: est.upper,
        fractional_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub rho_lower: f64,
    pub rho_upper: f64,
    pub tessellation: f64,
    pub tessellation_satisfied: bool,
    /// Reported alongside; it does not decide `passed`.
    pub higuchi_shirai: f64,
    pub higuchi_shirai_satisfied: bool,
}

/// Everything `tess-analyze` reports for one patch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TessellationReport {
    pub p: usize,
    pub q: usize,
    pub radius: usize,
    pub vertices: usize,
    pub interior_vertices: usize,
    pub interior_depth: usize,
    pub layers: LayerReport,
    pub earthworm_histogram: BTreeMap<usize, usize>,
    pub earthworm_violations: Vec<String>,
    pub matching_violations: Vec<String>,
    pub boundary_checks: Vec<BoundaryDegreeReport>,
    pub forests: ForestReport,
    pub bound: BoundRow,
    pub passed: bool,
}

/// Runs the whole pipeline on a patch.
pub fn analyze_patch(patch: &TessellationPatch, tolerance: f64) -> Result<TessellationReport, TessError> {
    let (p, q) = (patch.p, patch.q);
    let ls = layer_partition(patch, patch.root);
    let layers = verify_layer_properties(&ls, q);
    let worms = earthworms(&ls, q);
    let matchings = build_matchings(&worms, q)?;
    let forests = verify_forests(&ls, q, &matchings, tolerance)?;

    let index = FaceIndex::new(&patch.faces);
    let mut boundary_checks = Vec::new();
    for face in &patch.faces {
        if face
            .iter()
            .all(|&v| ls.layer_of[v] <= ls.interior_depth && !patch.boundary[v])
        {
            boundary_checks.push(check_with_index(patch, &index, face)?);
        }
    }
    for i in 1..=ls.interior_depth {
        if let Some(c) = ls.layer_cycle(i) {
            boundary_checks.push(check_with_index(patch, &index, &c)?);
        }
    }

    let tessellation = Bound::Tessellation { p, q }.evaluate()?;
    let higuchi_shirai = Bound::HiguchiShirai { p, q }.evaluate()?;
    let bound = BoundRow {
        rho_lower: forests.rho_lower,
        rho_upper: forests.rho_upper,
        tessellation,
        tessellation_satisfied: forests.rho_upper <= tessellation + 1e-9,
        higuchi_shirai,
        higuchi_shirai_satisfied: forests.rho_upper <= higuchi_shirai + 1e-9,
    };
    let passed = layers.passed
        && worms.violations.is_empty()
        && forests.passed
        && bound.tessellation_satisfied
        && boundary_checks.iter().all(|b| b.holds);
    Ok(TessellationReport {
        p,
        q,
        radius: patch.radius,
        vertices: patch.graph().vertex_count(),
        interior_vertices: ls.layer_of.iter().filter(|&&l| l <= ls.interior_depth).count(),
        interior_depth: ls.interior_depth,
        layers,
        earthworm_histogram: worms.histogram(),
        earthworm_violations: worms.violations,
        matching_violations: matchings.violations,
        boundary_checks,
        forests,
        bound,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_tessellation;

    #[test]
    fn layers_match_construction() {
        for (p, q) in [(4, 5), (5, 4), (4, 4), (6, 4)] {
            let t = gen_tessellation(p, q, 3).unwrap();
            let ls = layer_partition(&t, 0);
            assert_eq!(ls.layer_of, t.vertex_layer, "{{{p},{q}}}");
            assert_eq!(ls.interior_depth, 2);
        }
    }

    #[test]
    fn layer_properties_pass() {
        for (p, q, r) in [(4, 5, 4), (6, 4, 3)] {
            let t = gen_tessellation(p, q, r).unwrap();
            let rep = verify_layer_properties(&layer_partition(&t, 0), q);
            assert!(rep.passed, "{:?}", rep);
            assert_eq!(rep.layers.len(), r - 1);
        }
    }

    #[test]
    fn grid_with_missing_edge_breaks_cycle() {
        let t = gen_tessellation(4, 4, 3).unwrap();
        let mut ls = layer_partition(&t, 0);
        let c = ls.layer_cycle(1).unwrap();
        let (a, b) = edge(c[0], c[1]);
        ls.graph = ls.graph.with_edges(ls.graph.edges().filter(|&e| e != (a, b)));
        let rep = verify_layer_properties(&ls, 4);
        assert!(!rep.passed);
        assert!(!rep.layers[0].is_cycle);
    }

    #[test]
    fn single_face_and_layer_cycle() {
        let t = gen_tessellation(4, 5, 3).unwrap();
        let rep = boundary_degree_check(&t, &t.faces[0]).unwrap();
        assert_eq!((rep.k, rep.d, rep.inside_faces), (5, 10, 1));
        assert!(rep.holds);

        let ls = layer_partition(&t, 0);
        let c1 = ls.layer_cycle(1).unwrap();
        let rep = boundary_degree_check(&t, &c1).unwrap();
        assert_eq!((rep.k, rep.d, rep.inside_faces), (12, 28, 4));
        assert!(rep.holds);

        let edge_vertex = (0..t.boundary.len()).find(|&v| t.boundary[v]).unwrap();
        assert!(matches!(
            boundary_degree_check(&t, &[0, 1, edge_vertex]),
            Err(TessError::CycleNotInterior(_))
        ));
    }

    #[test]
    fn triangle_free_for_q_at_least_4() {
        let t = gen_tessellation(5, 4, 3).unwrap();
        let g = t.graph();
        for (u, v) in g.edges() {
            assert!(!g.neighbors(u).iter().any(|&w| g.has_edge(v, w)));
        }
    }

    #[test]
    fn earthworm_lengths() {
        let t = gen_tessellation(4, 5, 3).unwrap();
        let ls = layer_partition(&t, 0);
        let w = earthworms(&ls, 5);
        assert!(w.violations.is_empty());
        assert!(w.worms.iter().filter(|w| w.layer == 1).all(|w| w.len() >= 2));

        let t = gen_tessellation(4, 6, 3).unwrap();
        let w = earthworms(&layer_partition(&t, 0), 6);
        assert!(w.min_len().unwrap() >= 3);
    }

    #[test]
    fn matchings_hit_every_worm_once() {
        let t = gen_tessellation(4, 5, 5).unwrap();
        let ls = layer_partition(&t, 0);
        let w = earthworms(&ls, 5);
        let m = build_matchings(&w, 5).unwrap();
        assert_eq!(m.sets.len(), 2);
        for set in &m.sets {
            let set: BTreeSet<Edge> = set.iter().copied().collect();
            for worm in &w.worms {
                assert_eq!(worm.edges().filter(|e| set.contains(e)).count(), 1);
            }
        }
        // both worms at the smallest black vertex of a layer start there
        assert_eq!(m.violations.len(), ls.interior_depth);

        let q4 = gen_tessellation(5, 4, 3).unwrap();
        let m = build_matchings(&earthworms(&layer_partition(&q4, 0), 4), 4).unwrap();
        assert_eq!(m.sets.len(), 1);
    }

    #[test]
    fn short_worm_is_an_error() {
        let w = EarthwormSet {
            worms: vec![Earthworm {
                layer: 1,
                vertices: vec![3, 4],
            }],
            violations: vec![],
        };
        assert!(matches!(
            build_matchings(&w, 5),
            Err(TessError::ShortEarthworm { length: 1, .. })
        ));
    }

    #[test]
    fn forests_and_empty_matchings() {
        let t = gen_tessellation(4, 5, 4).unwrap();
        let ls = layer_partition(&t, 0);
        let m = build_matchings(&earthworms(&ls, 5), 5).unwrap();
        let rep = verify_forests(&ls, 5, &m, 1e-8).unwrap();
        assert!(rep.passed, "{rep:?}");

        let empty = Matchings {
            sets: vec![Vec::new(); 2],
            violations: vec![],
        };
        let rep = verify_forests(&ls, 5, &empty, 1e-8).unwrap();
        assert!(!rep.parts[0].is_forest);
        assert!(!rep.passed);
    }

    #[test]
    fn full_pipeline() {
        let t = gen_tessellation(5, 4, 3).unwrap();
        let rep = analyze_patch(&t, 1e-8).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.bound.rho_upper <= rep.bound.tessellation);
    }
}
