//! Edge-list text and JSON graph documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{EmbeddedGraph, EmbeddingError};
use crate::generators::{LayeredGraph, TessellationPatch};
use crate::graph::{Graph, GraphError, Vertex};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("rotation given without genus")]
    MissingGenus,
}

/// Parses `u v` pairs, one per line. `#` starts a comment. The vertex count
/// is one more than the largest id.
pub fn parse_edge_list(text: &str) -> Result<Graph, IoError> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| IoError::Parse {
            line: i + 1,
            reason: reason.to_string(),
        };
        let mut parts = line.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected two vertex ids"));
        };
        let u: Vertex = a.parse().map_err(|_| bad("vertex id is not a nonnegative integer"))?;
        let v: Vertex = b.parse().map_err(|_| bad("vertex id is not a nonnegative integer"))?;
        edges.push((u, v));
    }
    Ok(Graph::from_edge_list(&edges)?)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("# n={} m={}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// JSON graph document. Optional sections carry layers, an embedding and
/// patch annotations.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<Vec<Vertex>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<Vertex, Vec<Vertex>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<Vertex>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, serde_json::Value>>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc {
            n: g.vertex_count(),
            edges: g.edges().collect(),
            ..Default::default()
        }
    }

    pub fn from_embedded(e: &EmbeddedGraph) -> Self {
        GraphDoc {
            rotation: Some(e.rotations().iter().cloned().enumerate().collect()),
            genus: Some(e.declared_genus()),
            ..Self::from_graph(e.graph())
        }
    }

    pub fn from_layered(h: &LayeredGraph) -> Self {
        let base = match &h.embedding {
            Some(e) => Self::from_embedded(e),
            None => Self::from_graph(&h.graph),
        };
        GraphDoc {
            layers: Some(h.layers.clone()),
            ..base
        }
    }

    pub fn from_patch(t: &TessellationPatch) -> Self {
        let mut layers: Vec<Vec<Vertex>> = Vec::new();
        for (v, &l) in t.vertex_layer.iter().enumerate() {
            if layers.len() <= l {
                layers.resize(l + 1, Vec::new());
            }
            layers[l].push(v);
        }
        GraphDoc {
            layers: Some(layers),
            faces: Some(t.faces.clone()),
            boundary: Some((0..t.boundary.len()).filter(|&v| t.boundary[v]).collect()),
            ..Self::from_embedded(&t.embedding)
        }
    }

    pub fn with_params(mut self, params: BTreeMap<String, serde_json::Value>) -> Self {
        self.params = Some(params);
        self
    }

    pub fn graph(&self) -> Result<Graph, IoError> {
        Ok(Graph::from_edges(self.n, self.edges.iter().copied())?)
    }

    /// The embedding, if a rotation section is present.
    pub fn embedding(&self) -> Result<Option<EmbeddedGraph>, IoError> {
        let Some(rot) = &self.rotation else {
            return Ok(None);
        };
        let genus = self.genus.ok_or(IoError::MissingGenus)?;
        let mut rotation = vec![Vec::new(); self.n];
        for (&v, nbrs) in rot {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange(v, v, self.n).into());
            }
            rotation[v] = nbrs.clone();
        }
        Ok(Some(EmbeddedGraph::new(self.graph()?, rotation, genus)?))
    }
}

/// Reads JSON when the text starts with `{`, an edge list otherwise.
pub fn read_graph_doc(text: &str) -> Result<GraphDoc, IoError> {
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(text)?)
    } else {
        Ok(GraphDoc::from_graph(&parse_edge_list(text)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_hkd, gen_tessellation, icosahedron};

    #[test]
    fn edge_list_round_trip() {
        let g = parse_edge_list("# triangle\n0 1\n1 2 # tail\n\n2 0\n").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            parse_edge_list("0 1\n2\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_edge_list("0 x\n"), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("3 3\n"), Err(IoError::Graph(_))));
    }

    #[test]
    fn json_round_trip_with_embedding() {
        let ico = icosahedron();
        let doc = GraphDoc::from_embedded(&ico);
        let text = serde_json::to_string(&doc).unwrap();
        let back = read_graph_doc(&text).unwrap();
        assert_eq!(back, doc);
        let e = back.embedding().unwrap().unwrap();
        assert_eq!(e.euler_genus_traced().unwrap(), 0);
    }

    #[test]
    fn minimal_json() {
        let doc = read_graph_doc(r#"{"n": 4, "edges": [[0,1],[2,3]]}"#).unwrap();
        assert_eq!(doc.graph().unwrap().edge_count(), 2);
        assert!(doc.embedding().unwrap().is_none());
    }

    #[test]
    fn layered_and_patch_docs() {
        let h = gen_hkd(2, 8, 1).unwrap();
        let doc = GraphDoc::from_layered(&h);
        assert_eq!(doc.layers.as_ref().unwrap()[2].len(), 18);
        assert!(doc.rotation.is_some());

        let t = gen_tessellation(4, 5, 2).unwrap();
        let doc = GraphDoc::from_patch(&t);
        assert_eq!(doc.layers.as_ref().unwrap()[0], vec![0]);
        assert_eq!(doc.faces.as_ref().unwrap().len(), t.faces.len());
    }
}
