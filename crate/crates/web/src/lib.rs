//! Browser bindings. Each export returns a JSON string that the page
//! parses and draws; the same functions are callable natively for tests.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use planar_spectra::bounds::{paschke_lower, paschke_objective, Bound, PASCHKE_SCAN_MAX, PASCHKE_SCAN_MIN};
use planar_spectra::generators::{gen_hkd, gen_tessellation};
use planar_spectra::spectral::{geometric_test_vector, rayleigh_lower};
use planar_spectra::tessellation::{analyze_patch, layer_partition};
use planar_spectra::verify::certified_rho;

/// Largest graph the page will build in one call.
pub const VERTEX_BUDGET: usize = 300_000;

const TOL: f64 = 1e-8;

#[derive(Debug, Serialize)]
pub struct HkdStep {
    pub i: usize,
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub rayleigh: f64,
}

#[derive(Debug, Serialize)]
pub struct HkdSequence {
    pub k: usize,
    pub d: usize,
    pub limit: f64,
    pub q: f64,
    pub steps: Vec<HkdStep>,
}

/// `ρ(H^{k,d}_i)` for growing `i` until the vertex budget runs out, with the
/// Rayleigh quotient of the geometric test vector for ratio `q`.
pub fn hkd_sequence(k: usize, d: usize, max_i: usize, q: f64) -> Result<HkdSequence, String> {
    let limit = Bound::LowerLimit { k, d }.evaluate().map_err(|e| e.to_string())?;
    let mut steps = Vec::new();
    for i in 0..=max_i {
        let h = gen_hkd(k, d, i).map_err(|e| e.to_string())?;
        let n = h.graph.vertex_count();
        if n > VERTEX_BUDGET {
            break;
        }
        let est = certified_rho(&h.graph, TOL).map_err(|e| e.to_string())?;
        let f = geometric_test_vector(n, &h.layers, q);
        let rayleigh = rayleigh_lower(&h.graph, &f).map_err(|e| e.to_string())?;
        steps.push(HkdStep {
            i,
            n,
            lower: est.lower,
            upper: est.upper,
            rayleigh,
        });
    }
    Ok(HkdSequence { k, d, limit, q, steps })
}

#[derive(Debug, Serialize)]
pub struct PatchLayout {
    pub p: usize,
    pub q: usize,
    pub radius: usize,
    pub positions: Vec<[f64; 2]>,
    pub layer: Vec<usize>,
    pub black: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
    pub rho_upper: f64,
    pub tessellation_bound: f64,
    pub passed: bool,
    pub earthworm_histogram: Vec<(usize, usize)>,
}

/// Vertices on concentric circles, one per layer, in cyclic layer order.
pub fn tessellation_layout(p: usize, q: usize, radius: usize) -> Result<PatchLayout, String> {
    let patch = gen_tessellation(p, q, radius).map_err(|e| e.to_string())?;
    let n = patch.graph().vertex_count();
    if n > VERTEX_BUDGET {
        return Err(format!("patch has {n} vertices, more than {VERTEX_BUDGET}"));
    }
    let ls = layer_partition(&patch, patch.root);
    let mut positions = vec![[0.0, 0.0]; n];
    let mut angle = vec![0.0f64; n];
    for (i, verts) in ls.vertex_layers.iter().enumerate().skip(1) {
        let order = ls.layer_cycle(i).unwrap_or_else(|| verts.clone());
        // rotate so the first vertex sits near its parent
        let m = order.len();
        let start = (0..m)
            .min_by(|&a, &b| parent_angle(&ls, &angle, order[a]).total_cmp(&parent_angle(&ls, &angle, order[b])))
            .unwrap_or(0);
        let step = std::f64::consts::TAU / m as f64;
        let rising = m < 3 || {
            let a1 = parent_angle(&ls, &angle, order[(start + m / 4) % m]);
            let a2 = parent_angle(&ls, &angle, order[(start + 3 * m / 4) % m]);
            a1 <= a2
        };
        let r = (i as f64 / radius as f64).powf(0.8);
        for j in 0..m {
            let v = if rising {
                order[(start + j) % m]
            } else {
                order[(start + m - j) % m]
            };
            let a = angle_base(&ls, &angle, order[start]) + step * j as f64;
            angle[v] = a;
            positions[v] = [r * a.cos(), r * a.sin()];
        }
    }
    let report = analyze_patch(&patch, TOL).map_err(|e| e.to_string())?;
    Ok(PatchLayout {
        p,
        q,
        radius,
        positions,
        layer: ls.layer_of.clone(),
        black: ls.black.clone(),
        edges: patch.graph().edges().collect(),
        rho_upper: report.bound.rho_upper,
        tessellation_bound: report.bound.tessellation,
        passed: report.passed,
        earthworm_histogram: report.earthworm_histogram.into_iter().collect(),
    })
}

fn parent_angle(ls: &planar_spectra::tessellation::LayerStructure, angle: &[f64], v: usize) -> f64 {
    let l = ls.layer_of[v];
    ls.graph
        .neighbors(v)
        .iter()
        .find(|&&w| ls.layer_of[w] + 1 == l)
        .map(|&w| angle[w].rem_euclid(std::f64::consts::TAU))
        .unwrap_or(f64::INFINITY)
}

fn angle_base(ls: &planar_spectra::tessellation::LayerStructure, angle: &[f64], v: usize) -> f64 {
    let a = parent_angle(ls, angle, v);
    if a.is_finite() {
        a
    } else {
        0.0
    }
}

#[derive(Debug, Serialize)]
pub struct PaschkeCurve {
    pub p: usize,
    pub q: usize,
    pub s: Vec<f64>,
    pub objective: Vec<f64>,
    pub minimum: f64,
    pub tree: f64,
    pub tessellation: Option<f64>,
    pub higuchi_shirai: Option<f64>,
}

/// Samples the Paschke objective on a geometric grid of `s`, next to its
/// minimum and the upper bounds for the same `(p, q)`.
pub fn paschke_curve(p: usize, q: usize, samples: usize) -> Result<PaschkeCurve, String> {
    let minimum = paschke_lower(p, q).map_err(|e| e.to_string())?;
    let samples = samples.clamp(2, 5000);
    let (lo, hi) = (PASCHKE_SCAN_MIN, PASCHKE_SCAN_MAX);
    let ratio = (hi / lo).powf(1.0 / (samples - 1) as f64);
    let s: Vec<f64> = (0..samples).map(|i| lo * ratio.powi(i as i32)).collect();
    let objective = s.iter().map(|&x| paschke_objective(p, q, x)).collect();
    Ok(PaschkeCurve {
        p,
        q,
        s,
        objective,
        minimum,
        tree: 2.0 * ((p - 1) as f64).sqrt(),
        tessellation: Bound::Tessellation { p, q }.evaluate().ok(),
        higuchi_shirai: Bound::HiguchiShirai { p, q }.evaluate().ok(),
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = hkdSequence)]
pub fn hkd_sequence_js(k: usize, d: usize, max_i: usize, q: f64) -> Result<String, JsError> {
    to_js(hkd_sequence(k, d, max_i, q))
}

#[wasm_bindgen(js_name = tessellationLayout)]
pub fn tessellation_layout_js(p: usize, q: usize, radius: usize) -> Result<String, JsError> {
    to_js(tessellation_layout(p, q, radius))
}

#[wasm_bindgen(js_name = paschkeCurve)]
pub fn paschke_curve_js(p: usize, q: usize, samples: usize) -> Result<String, JsError> {
    to_js(paschke_curve(p, q, samples))
}
