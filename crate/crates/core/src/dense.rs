//! Dense symmetric eigensolver (cyclic Jacobi rotations), used as an
//! oracle that shares no code path with power iteration.

use crate::graph::Graph;
use crate::spectral::SpectralError;

pub const ORACLE_VERTEX_LIMIT: usize = 2000;

/// Largest adjacency eigenvalue, computed densely.
pub fn rho_dense_oracle(g: &Graph) -> Result<f64, SpectralError> {
    let n = g.vertex_count();
    if n > ORACLE_VERTEX_LIMIT {
        return Err(SpectralError::SizeLimit {
            n,
            limit: ORACLE_VERTEX_LIMIT,
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let mut a = vec![0.0; n * n];
    for (u, v) in g.edges() {
        a[u * n + v] = 1.0;
        a[v * n + u] = 1.0;
    }
    let eig = jacobi_eigenvalues(&mut a, n);
    Ok(eig.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Eigenvalues of the symmetric row-major matrix `a` (destroyed).
pub(crate) fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = (f64::EPSILON * frob.max(1.0)).powi(2);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // rotate rows/columns p and q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, complete_bipartite};

    #[test]
    fn small_spectra() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!((rho_dense_oracle(&p3).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((rho_dense_oracle(&complete_bipartite(2, 3)).unwrap() - 6f64.sqrt()).abs() < 1e-12);
        assert!((rho_dense_oracle(&complete(6)).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn full_spectrum_of_path() {
        let n = 7;
        let mut a = vec![0.0; n * n];
        for i in 1..n {
            a[i * n + i - 1] = 1.0;
            a[(i - 1) * n + i] = 1.0;
        }
        let mut eig = jacobi_eigenvalues(&mut a, n);
        eig.sort_by(f64::total_cmp);
        for (j, lam) in eig.iter().enumerate() {
            let exact = 2.0 * (std::f64::consts::PI * (n - j) as f64 / (n + 1) as f64).cos();
            assert!((lam - exact).abs() < 1e-12, "{lam} vs {exact}");
        }
    }

    #[test]
    fn size_limit() {
        let g = Graph::empty(ORACLE_VERTEX_LIMIT + 1);
        assert!(matches!(rho_dense_oracle(&g), Err(SpectralError::SizeLimit { .. })));
    }
}
