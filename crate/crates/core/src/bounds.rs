//! Closed-form spectral radius bounds and the Paschke lower bound for
//! vertex-transitive graphs with short cycles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::d_of_genus;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{bound}: {reason}")]
pub struct BoundError {
    pub bound: &'static str,
    pub reason: String,
}

fn out_of_range(bound: &'static str, reason: impl Into<String>) -> BoundError {
    BoundError {
        bound,
        reason: reason.into(),
    }
}

/// A bound together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "bound_id", rename_all = "snake_case")]
pub enum Bound {
    /// Graphs with an orientation of max indegree `k`: `2 sqrt(k (Δ - k))`.
    Hayes { k: usize, max_degree: usize },
    /// Euler genus `γ`: `sqrt(8 (Δ - d(γ))) + d(γ)`.
    GenusA { max_degree: usize, genus: usize },
    /// Euler genus `γ` without `K_{2,k}`.
    GenusK2k { max_degree: usize, genus: usize, k: usize },
    /// Planar: `sqrt(8Δ - 80) + 2 sqrt(21)`.
    #[serde(rename = "planar_1")]
    Planar1 { max_degree: usize },
    /// Planar: `sqrt(8Δ - 16) + 2 sqrt(15)`.
    #[serde(rename = "planar_2")]
    Planar2 { max_degree: usize },
    /// Planar without separating 4-cycles (asserted by the caller).
    #[serde(rename = "planar_no4sep")]
    PlanarNo4Sep { max_degree: usize },
    /// `(p, >=q)` tessellations: `2 sqrt(p - 1) + 2 / (q - 3)`.
    Tessellation { p: usize, q: usize },
    /// Earlier tessellation bound `2 sqrt((p - 2)(1 + 1/(q - 2)))`.
    HiguchiShirai { p: usize, q: usize },
    /// Spectral radius of the infinite `H^{k,d}`: `2 sqrt(k (d - k))`.
    LowerLimit { k: usize, d: usize },
}

impl Bound {
    pub fn id(&self) -> &'static str {
        match self {
            Bound::Hayes { .. } => "hayes",
            Bound::GenusA { .. } => "genus_a",
            Bound::GenusK2k { .. } => "genus_k2k",
            Bound::Planar1 { .. } => "planar_1",
            Bound::Planar2 { .. } => "planar_2",
            Bound::PlanarNo4Sep { .. } => "planar_no4sep",
            Bound::Tessellation { .. } => "tessellation",
            Bound::HiguchiShirai { .. } => "higuchi_shirai",
            Bound::LowerLimit { .. } => "lower_limit",
        }
    }

    /// Evaluates the formula, rejecting parameters outside the range the
    /// bound is proved for.
    pub fn evaluate(&self) -> Result<f64, BoundError> {
        let id = self.id();
        let sqrt = |x: f64| x.sqrt();
        match *self {
            Bound::Hayes { k, max_degree } => {
                if k == 0 || max_degree < 2 * k {
                    return Err(out_of_range(
                        id,
                        format!("needs k >= 1 and Δ >= 2k (k={k}, Δ={max_degree})"),
                    ));
                }
                Ok(2.0 * sqrt((k * (max_degree - k)) as f64))
            }
            Bound::GenusA { max_degree, genus } => {
                let d = d_of_genus(genus);
                if max_degree < d + 2 {
                    return Err(out_of_range(id, format!("needs Δ >= d(γ) + 2 = {}", d + 2)));
                }
                Ok(sqrt(8.0 * (max_degree - d) as f64) + d as f64)
            }
            Bound::GenusK2k { max_degree, genus, k } => {
                let d = d_of_genus(genus);
                if k < 2 || max_degree < d {
                    return Err(out_of_range(id, format!("needs k >= 2 and Δ >= d(γ) = {d}")));
                }
                Ok(2.0 * sqrt((max_degree - d + 1) as f64) + 2.0 * sqrt(((k - 1) * (d - 1) + 1) as f64) + d as f64)
            }
            Bound::Planar1 { max_degree } => {
                planar_range(id, max_degree)?;
                Ok(sqrt(8.0 * max_degree as f64 - 80.0) + 2.0 * sqrt(21.0))
            }
            Bound::Planar2 { max_degree } => {
                planar_range(id, max_degree)?;
                Ok(sqrt(8.0 * max_degree as f64 - 16.0) + 2.0 * sqrt(15.0))
            }
            Bound::PlanarNo4Sep { max_degree } => {
                planar_range(id, max_degree)?;
                Ok(2.0 * sqrt(max_degree as f64 - 9.0) + 2.0 * sqrt(19.0) + 2.0 * sqrt(21.0))
            }
            Bound::Tessellation { p, q } => {
                tessellation_range(id, p, q, 4)?;
                Ok(2.0 * sqrt((p - 1) as f64) + 2.0 / (q - 3) as f64)
            }
            Bound::HiguchiShirai { p, q } => {
                tessellation_range(id, p, q, 3)?;
                Ok(2.0 * sqrt((p - 2) as f64 * (1.0 + 1.0 / (q - 2) as f64)))
            }
            Bound::LowerLimit { k, d } => {
                if k == 0 || k >= d {
                    return Err(out_of_range(id, format!("needs 1 <= k < d (k={k}, d={d})")));
                }
                Ok(2.0 * sqrt((k * (d - k)) as f64))
            }
        }
    }
}

fn planar_range(id: &'static str, max_degree: usize) -> Result<(), BoundError> {
    if max_degree < 10 {
        return Err(out_of_range(id, format!("needs Δ >= 10 (Δ={max_degree})")));
    }
    Ok(())
}

fn tessellation_range(id: &'static str, p: usize, q: usize, min: usize) -> Result<(), BoundError> {
    if p < min || q < min {
        return Err(out_of_range(id, format!("needs p, q >= {min} (p={p}, q={q})")));
    }
    if 2 * (p + q) > p * q {
        return Err(out_of_range(id, format!("needs 1/p + 1/q <= 1/2 (p={p}, q={q})")));
    }
    Ok(())
}

pub fn evaluate_bound(bound: &Bound) -> Result<f64, BoundError> {
    bound.evaluate()
}

/// `φ(t) = (sqrt(1 + t²) - 1) / t`, written to avoid cancellation.
fn phi(t: f64) -> f64 {
    t / ((1.0 + t * t).sqrt() + 1.0)
}

/// The function of `s` minimized in the Paschke bound:
/// `(p - 2) φ((1 + cosh sq) / (sinh sq sinh s)) + 2 cosh s`.
pub fn paschke_objective(p: usize, q: usize, s: f64) -> f64 {
    // (1 + cosh x) / sinh x = coth(x / 2)
    let half = 0.5 * s * q as f64;
    let t = 1.0 / (half.tanh() * s.sinh());
    (p as f64 - 2.0) * phi(t) + 2.0 * s.cosh()
}

pub const PASCHKE_SCAN_MIN: f64 = 1e-4;
pub const PASCHKE_SCAN_MAX: f64 = 4.0;
const PASCHKE_SCAN_POINTS: usize = 400;

/// Minimum of [`paschke_objective`] over `s > 0`: coarse geometric scan on
/// `[1e-4, 4]`, then golden-section refinement to `1e-10` in `s`.
pub fn paschke_lower(p: usize, q: usize) -> Result<f64, BoundError> {
    if p < 3 || q < 3 {
        return Err(out_of_range("paschke", format!("needs p, q >= 3 (p={p}, q={q})")));
    }
    let f = |s: f64| paschke_objective(p, q, s);
    let ratio = (PASCHKE_SCAN_MAX / PASCHKE_SCAN_MIN).powf(1.0 / (PASCHKE_SCAN_POINTS - 1) as f64);
    let grid: Vec<f64> = (0..PASCHKE_SCAN_POINTS)
        .map(|i| PASCHKE_SCAN_MIN * ratio.powi(i as i32))
        .collect();
    let best = (0..grid.len())
        .min_by(|&i, &j| f(grid[i]).total_cmp(&f(grid[j])))
        .expect("nonempty grid");
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(grid.len() - 1)];
    let s = golden_section(f, a, b, 1e-10);
    Ok(f(s).min(f(grid[best])))
}

/// Golden-section search for a minimizer of a unimodal `f` on `[a, b]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-4
    }

    #[test]
    fn formula_values() {
        assert!(close(
            Bound::Hayes { k: 3, max_degree: 12 }.evaluate().unwrap(),
            10.3923
        ));
        assert!(close(Bound::Tessellation { p: 4, q: 5 }.evaluate().unwrap(), 4.4641));
        assert!(close(Bound::LowerLimit { k: 2, d: 8 }.evaluate().unwrap(), 6.9282));
        assert!(close(
            Bound::Planar2 { max_degree: 10 }.evaluate().unwrap(),
            8.0 + 2.0 * 15f64.sqrt()
        ));
        assert!(close(
            Bound::Planar1 { max_degree: 10 }.evaluate().unwrap(),
            2.0 * 21f64.sqrt()
        ));
        assert!(close(
            Bound::PlanarNo4Sep { max_degree: 10 }.evaluate().unwrap(),
            2.0 + 2.0 * 19f64.sqrt() + 2.0 * 21f64.sqrt()
        ));
        assert!(close(
            Bound::GenusA {
                max_degree: 18,
                genus: 0
            }
            .evaluate()
            .unwrap(),
            8.0 + 10.0
        ));
        assert!(close(
            Bound::GenusK2k {
                max_degree: 10,
                genus: 0,
                k: 2
            }
            .evaluate()
            .unwrap(),
            2.0 + 2.0 * 10f64.sqrt() + 10.0
        ));
        assert!(close(
            Bound::HiguchiShirai { p: 4, q: 6 }.evaluate().unwrap(),
            2.0 * 2.5f64.sqrt()
        ));
    }

    #[test]
    fn ranges_are_enforced() {
        assert!(Bound::Hayes { k: 3, max_degree: 5 }.evaluate().is_err());
        assert!(Bound::Planar2 { max_degree: 9 }.evaluate().is_err());
        assert!(Bound::Tessellation { p: 3, q: 7 }.evaluate().is_err());
        assert!(Bound::Tessellation { p: 5, q: 3 }.evaluate().is_err());
        assert!(Bound::GenusA {
            max_degree: 11,
            genus: 0
        }
        .evaluate()
        .is_err());
        assert!(Bound::LowerLimit { k: 4, d: 4 }.evaluate().is_err());
    }

    #[test]
    fn bound_json_uses_ids() {
        let s = serde_json::to_string(&Bound::Planar2 { max_degree: 12 }).unwrap();
        assert_eq!(s, r#"{"bound_id":"planar_2","max_degree":12}"#);
        let b: Bound = serde_json::from_str(r#"{"bound_id":"hayes","k":3,"max_degree":12}"#).unwrap();
        assert_eq!(b.id(), "hayes");
    }

    #[test]
    fn paschke_tree_limit() {
        // as q grows the objective tends to (p-1)e^{-s} + e^{s}
        let v = paschke_lower(5, 60).unwrap();
        assert!((v - 4.0).abs() < 1e-6);
    }

    #[test]
    fn paschke_between_tree_and_upper_bound() {
        let v = paschke_lower(4, 5).unwrap();
        let tree = 2.0 * 3f64.sqrt();
        assert!(v >= tree - 1e-9 && v <= tree + 1.0, "{v}");
    }

    #[test]
    fn golden_section_quadratic() {
        let x = golden_section(|x| (x - 1.3).powi(2), 0.0, 4.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-9);
    }
}
