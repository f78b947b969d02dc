//! The verification corpus and the bound rows computed over it.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::Bound;
use crate::generators::{
    apollonian, ary_tree, complete, complete_bipartite, gen_hkd, gen_named, gen_tessellation, icosahedron, Family,
    FamilyParams, GenError,
};
use crate::graph::{max_common_neighbors, orient_max_indegree, Graph, Vertex};
use crate::spectral::{rho_power, SpectralError, SpectralEstimate};

/// What is known about a corpus graph beyond its edges.
#[derive(Clone, Debug)]
pub enum EntryKind {
    Plain,
    Hkd {
        k: usize,
        d: usize,
        i: usize,
        layers: Vec<Vec<Vertex>>,
    },
    Tessellation {
        p: usize,
        q: usize,
        radius: usize,
    },
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub id: String,
    pub family: String,
    pub params: BTreeMap<String, Value>,
    pub graph: Graph,
    /// Euler genus of a known embedding, when there is one.
    pub genus: Option<usize>,
    pub kind: EntryKind,
}

impl CorpusEntry {
    pub fn is_planar(&self) -> bool {
        self.genus == Some(0)
    }
}

/// One bound checked on one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub graph_id: String,
    pub family: String,
    pub params: BTreeMap<String, Value>,
    pub max_degree: usize,
    pub genus: Option<usize>,
    pub rho_lower: f64,
    pub rho_upper: f64,
    pub bound_id: String,
    pub bound_value: f64,
    pub satisfied: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

pub const SATISFACTION_SLACK: f64 = 1e-9;

fn params(pairs: &[(&str, usize)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|&(k, v)| (k.to_string(), json!(v))).collect()
}

fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Euler genus of the standard orientable embedding of `K_n`.
fn genus_complete(n: usize) -> usize {
    if n <= 4 {
        0
    } else {
        2 * div_ceil((n - 3) * (n - 4), 12)
    }
}

fn genus_complete_bipartite(m: usize, n: usize) -> usize {
    if m.min(n) <= 2 {
        0
    } else {
        2 * div_ceil((m - 2) * (n - 2), 4)
    }
}

fn plain(id: String, family: &str, params: BTreeMap<String, Value>, graph: Graph, genus: Option<usize>) -> CorpusEntry {
    CorpusEntry {
        id,
        family: family.to_string(),
        params,
        graph,
        genus,
        kind: EntryKind::Plain,
    }
}

/// Small named graphs, all under 500 vertices.
pub fn named_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in [5, 16] {
        out.push(plain(
            format!("star-{n}"),
            "star",
            params(&[("n", n)]),
            complete_bipartite(1, n),
            Some(0),
        ));
    }
    for (m, n) in [(2, 6), (3, 3), (3, 7), (5, 5), (3, 33)] {
        out.push(plain(
            format!("kmn-{m}-{n}"),
            "complete-bipartite",
            params(&[("m", m), ("n", n)]),
            complete_bipartite(m, n),
            Some(genus_complete_bipartite(m, n)),
        ));
    }
    for n in [4, 5, 12] {
        out.push(plain(
            format!("k-{n}"),
            "complete",
            params(&[("n", n)]),
            complete(n),
            Some(genus_complete(n)),
        ));
    }
    for (family, n) in [(Family::Cycle, 8), (Family::Path, 10)] {
        let g = gen_named(
            family,
            FamilyParams {
                n,
                ..Default::default()
            },
        )
        .expect("named family");
        out.push(plain(
            format!("{family}-{n}"),
            &family.to_string(),
            params(&[("n", n)]),
            g,
            Some(0),
        ));
    }
    for (arity, depth) in [(2, 4), (12, 2)] {
        out.push(plain(
            format!("tree-{arity}-{depth}"),
            "tree",
            params(&[("arity", arity), ("depth", depth)]),
            ary_tree(arity, depth),
            Some(0),
        ));
    }
    for rounds in 1..=5 {
        out.push(plain(
            format!("apollonian-{rounds}"),
            "apollonian",
            params(&[("rounds", rounds)]),
            apollonian(rounds).graph().clone(),
            Some(0),
        ));
    }
    out.push(plain(
        "icosahedron".into(),
        "icosahedron",
        BTreeMap::new(),
        icosahedron().graph().clone(),
        Some(0),
    ));
    out
}

pub fn hkd_entry(k: usize, d: usize, i: usize) -> Result<CorpusEntry, GenError> {
    let h = gen_hkd(k, d, i)?;
    Ok(CorpusEntry {
        id: format!("hkd-{k}-{d}-{i}"),
        family: "hkd".into(),
        params: params(&[("k", k), ("d", d), ("i", i)]),
        genus: (k == 2).then_some(0),
        graph: h.graph,
        kind: EntryKind::Hkd {
            k,
            d,
            i,
            layers: h.layers,
        },
    })
}

pub fn tessellation_entry(p: usize, q: usize, radius: usize) -> Result<CorpusEntry, GenError> {
    let t = gen_tessellation(p, q, radius)?;
    Ok(CorpusEntry {
        id: format!("tess-{p}-{q}-{radius}"),
        family: "tessellation".into(),
        params: params(&[("p", p), ("q", q), ("radius", radius)]),
        graph: t.graph().clone(),
        genus: Some(0),
        kind: EntryKind::Tessellation { p, q, radius },
    })
}

/// Parameters of the `H^{k,d}_i` graphs in the default corpus.
pub const HKD_CORPUS: &[(usize, usize, usize)] = &[(2, 8, 5), (2, 10, 4), (2, 12, 3), (2, 16, 3), (3, 9, 4)];

/// Patches in the default corpus, as `(p, q, radius)`.
pub const TESSELLATION_CORPUS: &[(usize, usize, usize)] = &[
    (4, 5, 4),
    (5, 4, 4),
    (4, 6, 3),
    (6, 4, 3),
    (5, 5, 3),
    (10, 4, 2),
    (12, 5, 2),
];

/// Named graphs, every `H^{k,d}_i` up to the listed `i`, and the patches.
pub fn default_corpus() -> Vec<CorpusEntry> {
    let mut out = named_corpus();
    for &(k, d, top) in HKD_CORPUS {
        for i in 0..=top {
            out.push(hkd_entry(k, d, i).expect("corpus parameters are valid"));
        }
    }
    for &(p, q, r) in TESSELLATION_CORPUS {
        out.push(tessellation_entry(p, q, r).expect("corpus parameters are valid"));
    }
    out
}

/// Smallest `k` for which an orientation of max indegree `k` exists.
pub fn min_orienting_k(g: &Graph) -> usize {
    let n = g.non_isolated().count().max(1);
    let mut k = div_ceil(g.edge_count(), n).max(1);
    while orient_max_indegree(g, k).is_err() {
        k += 1;
    }
    k
}

/// The bounds that apply to `entry`, with their parameters filled in.
pub fn applicable_bounds(entry: &CorpusEntry) -> Vec<Bound> {
    let g = &entry.graph;
    let delta = g.max_degree();
    let mut out = Vec::new();
    if g.edge_count() == 0 {
        return out;
    }
    let k = min_orienting_k(g);
    if delta >= 2 * k {
        out.push(Bound::Hayes { k, max_degree: delta });
    }
    if let Some(genus) = entry.genus {
        if genus == 0 && delta >= 10 {
            out.push(Bound::Planar1 { max_degree: delta });
            out.push(Bound::Planar2 { max_degree: delta });
        }
        let d = crate::embedding::d_of_genus(genus);
        if delta >= d + 2 {
            out.push(Bound::GenusA {
                max_degree: delta,
                genus,
            });
        }
        let k2 = max_common_neighbors(g) + 1;
        if delta >= d {
            out.push(Bound::GenusK2k {
                max_degree: delta,
                genus,
                k: k2.max(2),
            });
        }
    }
    match entry.kind {
        EntryKind::Hkd { k, d, .. } => out.push(Bound::LowerLimit { k, d }),
        EntryKind::Tessellation { p, q, .. } => {
            out.push(Bound::Tessellation { p, q });
            out.push(Bound::HiguchiShirai { p, q });
        }
        EntryKind::Plain => {}
    }
    out
}

/// Power iteration that keeps the last interval if the cap is reached.
pub fn certified_rho(g: &Graph, tolerance: f64) -> Result<SpectralEstimate, SpectralError> {
    match rho_power(g, tolerance) {
        Err(SpectralError::IterationLimit { last, .. }) => Ok(*last),
        other => other,
    }
}

/// Rows for one graph. Graphs without edges produce none.
pub fn rows_for(entry: &CorpusEntry, tolerance: f64, timings: bool) -> Result<Vec<VerificationRow>, SpectralError> {
    let start = Instant::now();
    let bounds = applicable_bounds(entry);
    if bounds.is_empty() {
        return Ok(Vec::new());
    }
    let est = certified_rho(&entry.graph, tolerance)?;
    let runtime_ms = timings.then(|| start.elapsed().as_millis() as u64);
    Ok(bounds
        .iter()
        .map(|b| {
            let value = b.evaluate().expect("applicable bounds are in range");
            VerificationRow {
                graph_id: entry.id.clone(),
                family: entry.family.clone(),
                params: entry.params.clone(),
                max_degree: entry.graph.max_degree(),
                genus: entry.genus,
                rho_lower: est.lower,
                rho_upper: est.upper,
                bound_id: b.id().to_string(),
                bound_value: value,
                satisfied: est.upper <= value + SATISFACTION_SLACK,
                runtime_ms,
            }
        })
        .collect())
}

pub fn verify_corpus(
    entries: &[CorpusEntry],
    tolerance: f64,
    timings: bool,
) -> Result<Vec<VerificationRow>, SpectralError> {
    let mut rows = Vec::new();
    for e in entries {
        rows.extend(rows_for(e, tolerance, timings)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_genera() {
        assert_eq!(genus_complete(4), 0);
        assert_eq!(genus_complete(7), 2);
        assert_eq!(genus_complete_bipartite(3, 3), 2);
        assert_eq!(genus_complete_bipartite(2, 9), 0);
    }

    #[test]
    fn orienting_k() {
        assert_eq!(min_orienting_k(&complete(12)), 6);
        assert_eq!(min_orienting_k(&ary_tree(3, 3)), 1);
        assert_eq!(min_orienting_k(&icosahedron().graph().clone()), 3);
    }

    #[test]
    fn rows_for_a_star() {
        let e = &named_corpus()[1];
        let rows = rows_for(e, 1e-10, false).unwrap();
        let ids: Vec<&str> = rows.iter().map(|r| r.bound_id.as_str()).collect();
        assert_eq!(ids, ["hayes", "planar_1", "planar_2", "genus_a", "genus_k2k"]);
        assert!(rows.iter().all(|r| r.satisfied));
        assert!((rows[0].rho_upper - 4.0).abs() < 1e-8);
    }

    #[test]
    fn hkd_rows_include_the_limit() {
        let rows = rows_for(&hkd_entry(2, 8, 2).unwrap(), 1e-8, false).unwrap();
        let lim = rows.iter().find(|r| r.bound_id == "lower_limit").unwrap();
        assert!(lim.satisfied);
        assert!(lim.runtime_ms.is_none());
    }

    #[test]
    fn row_json_omits_runtime_by_default() {
        let rows = rows_for(&named_corpus()[0], 1e-8, false).unwrap();
        let s = serde_json::to_string(&rows[0]).unwrap();
        assert!(!s.contains("runtime_ms"));
        assert!(s.starts_with(r#"{"graph_id":"star-5""#));
    }
}
