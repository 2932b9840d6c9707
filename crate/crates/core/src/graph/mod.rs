//! The sum-product graph on `R x R`: `(a, b) ~ (c, d)` iff `a + c = b d`.
//!
//! The graph is `q^r`-regular on `q^(2r)` vertices. A vertex with
//! `2a = b^2` is adjacent to itself; its adjacency-matrix diagonal entry is 1,
//! so every row of the matrix sums to exactly `q^r`.

pub mod eigen;
mod identity;
mod spectral;

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{RingElem, RingSpec};

pub use identity::{A2Report, Mismatch};
pub use spectral::{CertificateRecord, MixingCheck, SpectralCert, Spectrum, EIGEN_TOLERANCE};

/// Default ceiling on the vertex count of a materialized graph.
pub const DEFAULT_MAX_MATERIALIZED: u64 = 4096;

// bitset membership for edge counts is used up to this many vertices
const BITSET_MAX_VERTICES: u64 = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("materialized graph needs n = {n} <= {cap} vertices")]
    TooLarge { n: u64, cap: u64 },
    #[error("ring of order {0} is too large for a vertex index")]
    RingTooLarge(u64),
    #[error("operation requires a materialized adjacency matrix")]
    NotMaterialized,
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("A^2 identity fails at ({u:?}, {v:?}): A^2 = {lhs}, decomposition = {rhs}")]
    IdentityViolation {
        u: Vertex,
        v: Vertex,
        lhs: i64,
        rhs: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdjacencyMode {
    Implicit,
    Materialized,
}

impl std::str::FromStr for AdjacencyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "implicit" => Ok(AdjacencyMode::Implicit),
            "materialized" => Ok(AdjacencyMode::Materialized),
            other => Err(format!("unknown adjacency mode {other:?}")),
        }
    }
}

/// A vertex `(a, b)` of the sum-product graph, stored as element codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub a: u64,
    pub b: u64,
}

impl Vertex {
    pub fn new(a: RingElem, b: RingElem) -> Self {
        Vertex {
            a: a.code(),
            b: b.code(),
        }
    }
}

/// A duplicate-free, sorted set of vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vertex> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.0.binary_search(v).is_ok()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone)]
pub struct SpGraph {
    ring: RingSpec,
    mode: AdjacencyMode,
    order: u64,
    n: u64,
    // row-major n x n 0/1 matrix
    matrix: Option<Vec<u8>>,
}

/// Build the sum-product graph of `ring`.
pub fn build_graph(ring: &RingSpec, mode: AdjacencyMode, max_n: u64) -> Result<SpGraph, GraphError> {
    SpGraph::build(ring, mode, max_n)
}

impl SpGraph {
    pub fn build(ring: &RingSpec, mode: AdjacencyMode, max_n: u64) -> Result<Self, GraphError> {
        let order = ring.order();
        if order > u32::MAX as u64 {
            return Err(GraphError::RingTooLarge(order));
        }
        let n = order * order;
        let mut graph = SpGraph {
            ring: ring.clone(),
            mode,
            order,
            n,
            matrix: None,
        };
        if mode == AdjacencyMode::Materialized {
            if n > max_n {
                return Err(GraphError::TooLarge { n, cap: max_n });
            }
            graph.matrix = Some(graph.assemble_matrix());
        }
        Ok(graph)
    }

    // every ordered pair is tested, so symmetry of the result is a check on
    // the edge relation rather than an artifact of construction
    fn assemble_matrix(&self) -> Vec<u8> {
        let n = self.n as usize;
        let mut m = vec![0u8; n * n];
        m.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let u = self.vertex(i as u64);
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.is_edge(u, self.vertex(j as u64)) as u8;
            }
        });
        debug_assert!((0..n).all(|i| (0..n).all(|j| m[i * n + j] == m[j * n + i])));
        m
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn mode(&self) -> AdjacencyMode {
        self.mode
    }

    /// Number of vertices, `q^(2r)`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Valency, `q^r`.
    pub fn degree(&self) -> u64 {
        self.order
    }

    pub fn index(&self, v: Vertex) -> u64 {
        v.a * self.order + v.b
    }

    pub fn vertex(&self, index: u64) -> Vertex {
        Vertex {
            a: index / self.order,
            b: index % self.order,
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).map(|i| self.vertex(i))
    }

    pub fn matrix(&self) -> Option<&[u8]> {
        self.matrix.as_deref()
    }

    /// Whether the materialized matrix equals its transpose.
    pub fn is_symmetric(&self) -> Option<bool> {
        let m = self.matrix.as_ref()?;
        let n = self.n as usize;
        Some((0..n).all(|i| (i + 1..n).all(|j| m[i * n + j] == m[j * n + i])))
    }

    /// Edge test `a + c = b d`.
    pub fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.ring.add_code(u.a, v.a) == self.ring.mul_code(u.b, v.b)
    }

    /// The `q^r` neighbours `(b d - a, d)` of `u`.
    pub fn neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.order).map(move |d| Vertex {
            a: self.ring.sub_code(self.ring.mul_code(u.b, d), u.a),
            b: d,
        })
    }

    pub fn is_loop(&self, u: Vertex) -> bool {
        self.is_edge(u, u)
    }

    /// Number of vertices with `2a = b^2`.
    pub fn loop_count(&self) -> u64 {
        self.vertices().filter(|&u| self.is_loop(u)).count() as u64
    }

    /// Largest deviation of a vertex degree from `q^r`, loops counted once.
    ///
    /// Materialized graphs use row sums; implicit graphs count the solutions
    /// of `a + u = b v` over every candidate vertex `(u, v)`.
    pub fn degree_check(&self) -> u64 {
        let d = self.degree();
        let n = self.n as usize;
        let deviation = |deg: u64| deg.abs_diff(d);
        match &self.matrix {
            Some(m) => m
                .par_chunks(n)
                .map(|row| deviation(row.iter().map(|&x| x as u64).sum()))
                .max()
                .unwrap_or(0),
            None => (0..self.n)
                .into_par_iter()
                .map(|i| {
                    let u = self.vertex(i);
                    deviation(self.vertices().filter(|&w| self.is_edge(u, w)).count() as u64)
                })
                .max()
                .unwrap_or(0),
        }
    }

    /// Common-neighbour count from valuations: with `k = v(b - d)`, it is
    /// `q^k` when `v(a - c) >= k` and 0 otherwise.
    pub fn common_neighbors_closed_form(&self, u: Vertex, v: Vertex) -> u64 {
        let alpha = self.ring.valuation_code(self.ring.sub_code(u.b, v.b));
        let beta = self.ring.valuation_code(self.ring.sub_code(u.a, v.a));
        if beta >= alpha {
            self.ring.q().pow(alpha)
        } else {
            0
        }
    }

    /// Common-neighbour count by scanning every vertex.
    pub fn common_neighbors_bruteforce(&self, u: Vertex, v: Vertex) -> u64 {
        self.vertices()
            .filter(|&w| self.is_edge(u, w) && self.is_edge(w, v))
            .count() as u64
    }

    /// Breadth-first connectivity sweep.
    pub fn is_connected(&self) -> bool {
        let n = self.n as usize;
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0u64]);
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(i) = queue.pop_front() {
            for w in self.neighbors(self.vertex(i)) {
                let j = self.index(w) as usize;
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    queue.push_back(j as u64);
                }
            }
        }
        reached == n
    }

    /// `e(B, C)`: ordered pairs `(u, w)` in `B x C` with `u ~ w`, by testing
    /// every pair.
    pub fn edge_count_pairwise(&self, b: &VertexSet, c: &VertexSet) -> u64 {
        b.as_slice()
            .par_iter()
            .map(|&u| c.iter().filter(|&&w| self.is_edge(u, w)).count() as u64)
            .sum()
    }

    /// `e(B, C)`. Picks between pairwise testing and walking the `q^r`
    /// neighbours of each `u` with a membership structure over `C`.
    pub fn edge_count(&self, b: &VertexSet, c: &VertexSet) -> u64 {
        if (c.len() as u64) <= self.order {
            return self.edge_count_pairwise(b, c);
        }
        if self.n <= BITSET_MAX_VERTICES {
            let mut bits = vec![0u64; (self.n as usize).div_ceil(64)];
            for w in c {
                let i = self.index(*w) as usize;
                bits[i / 64] |= 1 << (i % 64);
            }
            b.as_slice()
                .par_iter()
                .map(|&u| {
                    self.neighbors(u)
                        .filter(|w| {
                            let i = self.index(*w) as usize;
                            bits[i / 64] >> (i % 64) & 1 == 1
                        })
                        .count() as u64
                })
                .sum()
        } else {
            let members: HashSet<Vertex> = c.iter().copied().collect();
            b.as_slice()
                .par_iter()
                .map(|&u| self.neighbors(u).filter(|w| members.contains(w)).count() as u64)
                .sum()
        }
    }

    /// Neighbour lists read off the materialized matrix.
    pub(crate) fn adjacency_lists(&self) -> Result<Vec<Vec<u32>>, GraphError> {
        let m = self.matrix.as_ref().ok_or(GraphError::NotMaterialized)?;
        let n = self.n as usize;
        Ok(m.chunks(n)
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &x)| x == 1)
                    .map(|(j, _)| j as u32)
                    .collect()
            })
            .collect())
    }
}
