use serde::{Deserialize, Serialize};

use super::eigen::{jacobi_eigen, JacobiOptions};
use super::{GraphError, SpGraph, VertexSet};

/// Relative tolerance (times `d`) for eigenvalue comparisons.
pub const EIGEN_TOLERANCE: f64 = 1e-8;

/// Full spectrum of the adjacency matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// All `n` eigenvalues, descending.
    pub values: Vec<f64>,
    /// `max ||A v - theta v||_inf` over every computed eigenpair.
    pub residual: f64,
    pub sweeps: usize,
}

impl Spectrum {
    /// `max(lambda_2, -lambda_n)`.
    pub fn second_eigenvalue(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        self.values[1].max(-self.values[n - 1])
    }
}

/// Degree, order and second eigenvalue of the sum-product graph, measured
/// against `sqrt(2 r q^(2r-1))`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralCert {
    pub ring: String,
    pub n: u64,
    pub d: u64,
    pub eigenvalues: Vec<f64>,
    pub lambda: f64,
    pub bound: f64,
    pub bound_holds: bool,
    /// `bound < d`, i.e. `2r < q`.
    pub bound_nontrivial: bool,
    pub connected: bool,
    pub non_bipartite: bool,
    pub residual: f64,
    pub loops: u64,
    pub eigenvalue_sum: f64,
    pub eigenvalue_square_sum: f64,
    /// Multiplicity of eigenvalues within tolerance of `d`.
    pub top_multiplicity: usize,
}

/// The certificate as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub ring: String,
    pub n: u64,
    pub d: u64,
    pub lambda: f64,
    pub bound: f64,
    pub bound_holds: bool,
    pub bound_nontrivial: bool,
    pub connected: bool,
    pub non_bipartite: bool,
    pub residual: f64,
}

impl SpectralCert {
    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            ring: self.ring.clone(),
            n: self.n,
            d: self.d,
            lambda: self.lambda,
            bound: self.bound,
            bound_holds: self.bound_holds,
            bound_nontrivial: self.bound_nontrivial,
            connected: self.connected,
            non_bipartite: self.non_bipartite,
            residual: self.residual,
        }
    }

    /// `|sum theta - #loops|` and `|sum theta^2 - n d|`.
    pub fn trace_errors(&self) -> (f64, f64) {
        (
            (self.eigenvalue_sum - self.loops as f64).abs(),
            (self.eigenvalue_square_sum - (self.n * self.d) as f64).abs(),
        )
    }
}

/// Outcome of one expander-mixing comparison.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MixingCheck {
    pub edges: u64,
    pub expected: f64,
    pub deviation: f64,
    pub bound: f64,
    pub holds: bool,
}

impl SpGraph {
    /// Diagonalize the adjacency matrix and measure the eigenpair residuals.
    pub fn eigen_spectrum(&self, opts: JacobiOptions) -> Result<Spectrum, GraphError> {
        let m = self.matrix().ok_or(GraphError::NotMaterialized)?;
        let n = self.n() as usize;
        let dense: Vec<f64> = m.iter().map(|&x| x as f64).collect();
        let dec = jacobi_eigen(&dense, n, opts)?;
        let lists = self.adjacency_lists()?;

        let mut residual: f64 = 0.0;
        for (i, &theta) in dec.values.iter().enumerate() {
            let v = dec.vector(i);
            for (row, nbrs) in lists.iter().enumerate() {
                let av: f64 = nbrs.iter().map(|&w| v[w as usize]).sum();
                residual = residual.max((av - theta * v[row]).abs());
            }
        }
        Ok(Spectrum {
            values: dec.values,
            residual,
            sweeps: dec.sweeps,
        })
    }

    /// Compute the spectrum and assemble the certificate. Implicit graphs are
    /// materialized temporarily (subject to `max_n`).
    pub fn certify(&self, opts: JacobiOptions, max_n: u64) -> Result<SpectralCert, GraphError> {
        if self.matrix().is_none() {
            let dense = SpGraph::build(self.ring(), super::AdjacencyMode::Materialized, max_n)?;
            return dense.certify(opts, max_n);
        }
        let spectrum = self.eigen_spectrum(opts)?;
        Ok(self.certificate_from(&spectrum))
    }

    pub fn certificate_from(&self, spectrum: &Spectrum) -> SpectralCert {
        let ring = self.ring();
        let d = self.degree();
        let df = d as f64;
        let tol = EIGEN_TOLERANCE * df;
        let r = ring.r() as u64;
        let q = ring.q();
        let values = &spectrum.values;
        let lambda = spectrum.second_eigenvalue();
        let bound = ((2 * r) as f64 * (q as f64).powi(2 * r as i32 - 1)).sqrt();
        let top_multiplicity = values.iter().filter(|&&t| (t - df).abs() <= tol).count();
        let lambda_2 = values.get(1).copied().unwrap_or(f64::NEG_INFINITY);
        let lambda_n = values.last().copied().unwrap_or(0.0);

        SpectralCert {
            ring: ring.to_string(),
            n: self.n(),
            d,
            eigenvalues: values.clone(),
            lambda,
            bound,
            bound_holds: lambda <= bound + tol,
            bound_nontrivial: 2 * r < q,
            connected: self.is_connected() && lambda_2 < df - tol,
            non_bipartite: lambda_n > -df + tol,
            residual: spectrum.residual,
            loops: self.loop_count(),
            eigenvalue_sum: values.iter().sum(),
            eigenvalue_square_sum: values.iter().map(|t| t * t).sum(),
            top_multiplicity,
        }
    }

    /// `|e(B,C) - d|B||C|/n| <= lambda sqrt(|B||C|)` with the certified lambda.
    pub fn mixing_check(&self, cert: &SpectralCert, b: &VertexSet, c: &VertexSet) -> MixingCheck {
        let edges = self.edge_count(b, c);
        let size = (b.len() * c.len()) as f64;
        let expected = self.degree() as f64 * size / self.n() as f64;
        let deviation = (edges as f64 - expected).abs();
        let bound = cert.lambda * size.sqrt();
        MixingCheck {
            edges,
            expected,
            deviation,
            bound,
            holds: deviation <= bound + 1e-9 * (1.0 + expected),
        }
    }
}
