//! Certified spectral-radius estimates.
//!
//! For a connected graph and any positive vector `f`, the Collatz–Wielandt
//! ratios `(Af)(v) / f(v)` bracket the spectral radius. Power iteration on
//! `A + I` (the shift keeps bipartite graphs from oscillating) drives the
//! bracket shut; the returned interval is recomputed from the returned
//! witness, so it is a proof and not just an approximation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge, Edge, Graph, Vertex};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_MAX_APPLICATIONS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph has no edges")]
    NoEdges,
    #[error("power iteration did not reach width {tolerance} within {applications} matrix applications (last interval [{}, {}])", .last.lower, .last.upper)]
    IterationLimit {
        applications: usize,
        tolerance: f64,
        /// Still a valid, just wider, interval.
        last: Box<SpectralEstimate>,
    },
    #[error("test vector is zero")]
    ZeroVector,
    #[error("test vector has {got} entries but the graph has {expected} vertices")]
    VectorLength { expected: usize, got: usize },
    #[error("dense oracle is limited to {limit} vertices (got {n})")]
    SizeLimit { n: usize, limit: usize },
    #[error("edge ({u}, {v}) is covered by {count} parts, fewer than {required}")]
    CoverageViolation {
        u: Vertex,
        v: Vertex,
        count: usize,
        required: usize,
    },
}

/// A certified interval for the spectral radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Positive on `component`, zero elsewhere.
    pub witness: Vec<f64>,
    /// The connected component the interval was certified on; it carries the
    /// largest upper bound among all components.
    pub component: Vec<Vertex>,
    pub iterations: usize,
    pub tolerance: f64,
}

impl SpectralEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerOptions {
    pub tolerance: f64,
    /// Cap on matrix-vector products, summed over components.
    pub max_applications: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tolerance: DEFAULT_TOLERANCE,
            max_applications: DEFAULT_MAX_APPLICATIONS,
        }
    }
}

/// Collatz–Wielandt bounds `(min, max)` of `(A f)(v) / f(v)` over `component`.
///
/// `f` must be positive on the component.
pub fn collatz_wielandt(g: &Graph, component: &[Vertex], f: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in component {
        let af: f64 = g.neighbors(v).iter().map(|&u| f[u]).sum();
        let r = af / f[v];
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

pub fn rho_power(g: &Graph, tolerance: f64) -> Result<SpectralEstimate, SpectralError> {
    rho_power_with(
        g,
        PowerOptions {
            tolerance,
            ..PowerOptions::default()
        },
    )
}

/// Power iteration per connected component; reports the component with
/// the largest certified upper bound.
pub fn rho_power_with(g: &Graph, opts: PowerOptions) -> Result<SpectralEstimate, SpectralError> {
    if g.edge_count() == 0 {
        return Err(SpectralError::NoEdges);
    }
    let mut budget = opts.max_applications;
    let mut best: Option<SpectralEstimate> = None;
    let mut failed = false;
    for comp in g.components().into_iter().filter(|c| c.len() > 1) {
        let (est, converged) = power_component(g, &comp, opts.tolerance, &mut budget);
        failed |= !converged;
        if best.as_ref().is_none_or(|b| est.upper > b.upper) {
            best = Some(est);
        }
    }
    let best = best.expect("at least one component has an edge");
    if failed {
        return Err(SpectralError::IterationLimit {
            applications: opts.max_applications - budget,
            tolerance: opts.tolerance,
            last: Box::new(best),
        });
    }
    Ok(best)
}

fn power_component(g: &Graph, comp: &[Vertex], tolerance: f64, budget: &mut usize) -> (SpectralEstimate, bool) {
    // local CSR copy of the component
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in comp.iter().enumerate() {
        local[v] = i;
    }
    let mut offsets = Vec::with_capacity(comp.len() + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for &v in comp {
        targets.extend(g.neighbors(v).iter().map(|&u| local[u]));
        offsets.push(targets.len());
    }

    let m = comp.len();
    let mut x = vec![1.0f64; m];
    let mut y = vec![0.0f64; m];
    let mut iterations = 0;
    let (mut lo, mut hi);
    loop {
        lo = f64::INFINITY;
        hi = f64::NEG_INFINITY;
        let mut ymax: f64 = 0.0;
        for i in 0..m {
            let ax: f64 = targets[offsets[i]..offsets[i + 1]].iter().map(|&j| x[j]).sum();
            let r = ax / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
            y[i] = ax + x[i];
            ymax = ymax.max(y[i]);
        }
        iterations += 1;
        *budget = budget.saturating_sub(1);
        if hi - lo <= tolerance || *budget == 0 {
            break;
        }
        for i in 0..m {
            x[i] = y[i] / ymax;
        }
    }
    let mut witness = vec![0.0; g.vertex_count()];
    for (i, &v) in comp.iter().enumerate() {
        witness[v] = x[i];
    }
    let converged = hi - lo <= tolerance;
    (
        SpectralEstimate {
            lower: lo,
            upper: hi,
            witness,
            component: comp.to_vec(),
            iterations,
            tolerance,
        },
        converged,
    )
}

/// `<f|Af> / ||f||^2`, a lower bound on the spectral radius for any nonzero `f`.
pub fn rayleigh_lower(g: &Graph, f: &[f64]) -> Result<f64, SpectralError> {
    if f.len() != g.vertex_count() {
        return Err(SpectralError::VectorLength {
            expected: g.vertex_count(),
            got: f.len(),
        });
    }
    let norm2: f64 = f.iter().map(|x| x * x).sum();
    if norm2 == 0.0 {
        return Err(SpectralError::ZeroVector);
    }
    let quad: f64 = g.edges().map(|(u, v)| f[u] * f[v]).sum();
    Ok(2.0 * quad / norm2)
}

/// `f(v) = q^i` for `v` in layer `i`; vertices in no layer get 0.
pub fn geometric_test_vector(n: usize, layers: &[Vec<Vertex>], q: f64) -> Vec<f64> {
    let mut f = vec![0.0; n];
    let mut w = 1.0;
    for layer in layers {
        for &v in layer {
            f[v] = w;
        }
        w *= q;
    }
    f
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalBound {
    /// `(1/p) * sum of part upper bounds`.
    pub value: f64,
    pub part_upper: Vec<f64>,
    pub p: usize,
}

/// Upper bound on the spectral radius of `g` from parts that cover every
/// edge at least `p` times.
pub fn fractional_bound(
    g: &Graph,
    parts: &[Graph],
    p: usize,
    tolerance: f64,
) -> Result<FractionalBound, SpectralError> {
    assert!(p >= 1, "coverage multiplicity must be positive");
    let mut count: std::collections::HashMap<Edge, usize> = g.edges().map(|e| (e, 0)).collect();
    for part in parts {
        for (u, v) in part.edges() {
            if let Some(c) = count.get_mut(&edge(u, v)) {
                *c += 1;
            }
        }
    }
    if let Some((&(u, v), &c)) = count.iter().filter(|(_, &c)| c < p).min_by_key(|(&e, _)| e) {
        return Err(SpectralError::CoverageViolation {
            u,
            v,
            count: c,
            required: p,
        });
    }
    let mut part_upper = Vec::with_capacity(parts.len());
    for part in parts {
        let upper = match rho_power(part, tolerance) {
            Ok(est) => est.upper,
            Err(SpectralError::NoEdges) => 0.0,
            Err(SpectralError::IterationLimit { last, .. }) => last.upper,
            Err(e) => return Err(e),
        };
        part_upper.push(upper);
    }
    let value = part_upper.iter().sum::<f64>() / p as f64;
    Ok(FractionalBound { value, part_upper, p })
}
