//! Exact check of the decomposition
//!
//! ```text
//! A^2 = J + (q^r - 1) I - sum_{k=0..r} E_k + sum_{k=1..r-1} (q^k - 1) F_k
//! ```
//!
//! where, for `U = (a, b)` and `V = (c, d)`, `E_k` marks pairs with
//! `v(b - d) = k, v(a - c) < k` and `F_k` marks pairs with
//! `v(b - d) = k, v(a - c) >= k`.

use rayon::prelude::*;
use serde::Serialize;

use super::{GraphError, SpGraph, Vertex};

#[derive(Debug, Clone, Serialize)]
pub struct A2Report {
    pub holds: bool,
    pub max_deviation: u64,
    /// First pair (in row-major order) where the two sides differ.
    pub offending: Option<Mismatch>,
    /// Largest row sum of `E_k`, indexed by `k = 0..=r`.
    pub e_row_sums: Vec<u64>,
    /// Largest row sum of `F_k`, indexed by `k = 0..=r` (only `1..r` are used).
    pub f_row_sums: Vec<u64>,
    /// Every `E_k` row sum is below `q^(2r-k)` and every `F_k` row sum below
    /// `q^(2(r-k))`.
    pub valency_bounds_hold: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Mismatch {
    pub u: Vertex,
    pub v: Vertex,
    pub lhs: i64,
    pub rhs: i64,
}

impl A2Report {
    /// Turn a failed check into an error naming the offending pair.
    pub fn into_result(self) -> Result<A2Report, GraphError> {
        match self.offending {
            Some(Mismatch { u, v, lhs, rhs }) => {
                Err(GraphError::IdentityViolation { u, v, lhs, rhs })
            }
            None => Ok(self),
        }
    }
}

struct RowOutcome {
    max_dev: u64,
    first_bad: Option<(usize, i64, i64)>,
    e_sums: Vec<u64>,
    f_sums: Vec<u64>,
}

impl SpGraph {
    /// Compute `A^2` from the materialized matrix and compare it entrywise
    /// with the valuation decomposition, in exact integer arithmetic.
    pub fn verify_a2_identity(&self) -> Result<A2Report, GraphError> {
        let lists = self.adjacency_lists()?;
        let matrix = self.matrix().ok_or(GraphError::NotMaterialized)?;
        let n = self.n() as usize;
        let ring = self.ring();
        let r = ring.r() as usize;
        let q = ring.q() as i64;
        let qr = self.degree() as i64;
        let val: Vec<usize> = (0..self.degree())
            .map(|c| ring.valuation_code(c) as usize)
            .collect();
        let q_pow: Vec<i64> = (0..=2 * r as u32).map(|k| q.pow(k)).collect();

        let rows: Vec<RowOutcome> = (0..n)
            .into_par_iter()
            .map(|i| {
                // row i of A^2 as the sum of the rows of i's neighbours
                let mut sq = vec![0i64; n];
                for &w in &lists[i] {
                    let row = &matrix[w as usize * n..(w as usize + 1) * n];
                    for (acc, &x) in sq.iter_mut().zip(row) {
                        *acc += x as i64;
                    }
                }
                let u = self.vertex(i as u64);
                let mut out = RowOutcome {
                    max_dev: 0,
                    first_bad: None,
                    e_sums: vec![0; r + 1],
                    f_sums: vec![0; r + 1],
                };
                for (j, &lhs) in sq.iter().enumerate() {
                    let v = self.vertex(j as u64);
                    let alpha = val[ring.sub_code(u.b, v.b) as usize];
                    let beta = val[ring.sub_code(u.a, v.a) as usize];
                    let mut rhs = 1;
                    if i == j {
                        rhs += qr - 1;
                    }
                    if beta < alpha {
                        out.e_sums[alpha] += 1;
                        rhs -= 1;
                    } else {
                        out.f_sums[alpha] += 1;
                        if (1..r).contains(&alpha) {
                            rhs += q_pow[alpha] - 1;
                        }
                    }
                    let dev = lhs.abs_diff(rhs);
                    if dev > 0 && out.first_bad.is_none() {
                        out.first_bad = Some((j, lhs, rhs));
                    }
                    out.max_dev = out.max_dev.max(dev);
                }
                out
            })
            .collect();

        let mut e_row_sums = vec![0u64; r + 1];
        let mut f_row_sums = vec![0u64; r + 1];
        let mut max_deviation = 0;
        let mut offending = None;
        for (i, row) in rows.iter().enumerate() {
            max_deviation = max_deviation.max(row.max_dev);
            if offending.is_none() {
                if let Some((j, lhs, rhs)) = row.first_bad {
                    offending = Some(Mismatch {
                        u: self.vertex(i as u64),
                        v: self.vertex(j as u64),
                        lhs,
                        rhs,
                    });
                }
            }
            for k in 0..=r {
                e_row_sums[k] = e_row_sums[k].max(row.e_sums[k]);
                f_row_sums[k] = f_row_sums[k].max(row.f_sums[k]);
            }
        }
        let valency_bounds_hold = (1..=r).all(|k| (e_row_sums[k] as i64) < q_pow[2 * r - k])
            && (1..r).all(|k| (f_row_sums[k] as i64) < q_pow[2 * (r - k)])
            && e_row_sums[0] == 0;

        Ok(A2Report {
            holds: max_deviation == 0,
            max_deviation,
            offending,
            e_row_sums,
            f_row_sums,
            valency_bounds_hold,
        })
    }
}
