use crate::degree::Degree;
use crate::error::Error;
use crate::graph::{KGraph, Path, VertexId};
use crate::Result;

/// Per-colour spectral radii and the common unimodal eigenvector of
/// the vertex adjacency matrices, normalized to sum one.
#[derive(Clone, Debug)]
pub struct SpectralData {
    /// Vertex adjacency matrix of each colour.
    pub b: Vec<Vec<Vec<u64>>>,
    /// Spectral radius of each colour's matrix.
    pub rho: Vec<f64>,
    /// The common positive eigenvector, with entries summing to one.
    pub x: Vec<f64>,
    /// Largest eigen-equation defect over all colours and vertices.
    pub residual: f64,
}

fn mat_vec(m: &[Vec<u64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(&a, &v)| a as f64 * v).sum())
        .collect()
}

/// Computes the spectral data by power iteration on the sum of the
/// colour adjacency matrices.
///
/// Requires every vertex to receive edges of every colour and the
/// graph to be strongly connected, which makes the matrices
/// irreducible with a common strictly positive eigenvector.
pub fn compute_spectral(kg: &KGraph) -> Result<SpectralData> {
    let checks = kg.structural_checks();
    if !checks.has_no_sources {
        return Err(Error::Precondition(
            "some vertex is missing incoming edges of some colour".into(),
        ));
    }
    if !checks.strongly_connected {
        return Err(Error::Precondition("the graph is not strongly connected".into()));
    }
    let k = kg.k();
    let n = kg.graph().vertex_count();
    let b: Vec<Vec<Vec<u64>>> = (1..=k).map(|i| kg.adjacency(i)).collect();
    let total: Vec<Vec<u64>> = (0..n)
        .map(|r| (0..n).map(|c| b.iter().map(|m| m[r][c]).sum()).collect())
        .collect();
    let tol = 1e-13;
    let mut x = vec![1.0 / n as f64; n];
    let mut converged = false;
    for _ in 0..1_000_000 {
        let y = mat_vec(&total, &x);
        let s: f64 = y.iter().sum();
        if s <= 0.0 {
            return Err(Error::NotConverged("iteration collapsed to zero".into()));
        }
        let next: Vec<f64> = y.iter().map(|v| v / s).collect();
        let delta = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        x = next;
        if delta < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged(
            "power iteration did not reach tolerance".into(),
        ));
    }
    let mut rho = Vec::with_capacity(k);
    let mut residual = 0.0f64;
    for m in &b {
        let y = mat_vec(m, &x);
        let r: f64 = y.iter().sum();
        for (yi, xi) in y.iter().zip(&x) {
            residual = residual.max((yi - r * xi).abs());
        }
        rho.push(r);
    }
    if residual > 1e-8 {
        return Err(Error::NotConverged(format!(
            "colour matrices have no common eigenvector within tolerance \
             (defect {residual:.3e})"
        )));
    }
    Ok(SpectralData { b, rho, x, residual })
}

impl SpectralData {
    /// The product of the colour radii raised to signed exponents.
    pub fn rho_pow(&self, n: &[i64]) -> f64 {
        self.rho
            .iter()
            .zip(n)
            .map(|(r, &e)| r.powi(e as i32))
            .product()
    }

    /// The measure of the cylinder of a path: rho^-d(lam) x(s(lam)).
    pub fn measure_cylinder(&self, lam: &Path) -> f64 {
        let neg: Vec<i64> = lam.degree.0.iter().map(|&c| -(c as i64)).collect();
        self.rho_pow(&neg) * self.x[lam.source.0]
    }

    /// e^{-beta r . p} against a degree, for partition sums.
    pub fn weight(&self, beta_r: &[f64], p: &Degree) -> f64 {
        (-beta_r
            .iter()
            .zip(&p.0)
            .map(|(br, &c)| br * c as f64)
            .sum::<f64>())
        .exp()
    }

    /// Whether x takes equal values at the two vertices, so a partial
    /// isomorphism between them preserves the measure.
    pub fn g_invariance(&self, dom: VertexId, cod: VertexId, tol: f64) -> bool {
        (self.x[dom.0] - self.x[cod.0]).abs() < tol
    }
}
