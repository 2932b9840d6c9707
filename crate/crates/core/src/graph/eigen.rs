//! Cyclic Jacobi diagonalization of dense real symmetric matrices.

use rayon::prelude::*;

use super::GraphError;

#[derive(Debug, Clone, Copy)]
pub struct JacobiOptions {
    /// Stop once the Frobenius norm of the off-diagonal part drops below
    /// `tolerance_per_row * n`.
    pub tolerance_per_row: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        JacobiOptions {
            tolerance_per_row: 1e-10,
            max_sweeps: 60,
        }
    }
}

/// Eigenvalues sorted in descending order with matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub n: usize,
    pub values: Vec<f64>,
    /// Row `i` holds the eigenvector of `values[i]` (length `n`).
    pub vectors: Vec<f64>,
    pub sweeps: usize,
    pub off_norm: f64,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Diagonalize the symmetric row-major `n x n` matrix `matrix`.
///
/// Rotations are applied in round-robin order: each round pairs every index
/// with exactly one partner, so the `n/2` rotations of a round commute and are
/// applied together as one pass over the columns followed by one pass over
/// the rows. `n - 1` rounds make a sweep that annihilates every off-diagonal
/// position once.
pub fn jacobi_eigen(
    matrix: &[f64],
    n: usize,
    opts: JacobiOptions,
) -> Result<EigenDecomposition, GraphError> {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    let mut a = matrix.to_vec();
    // columns of v accumulate the rotations
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let tol = opts.tolerance_per_row * n as f64;
    // entries this small cannot keep the off-diagonal norm above tol
    let skip_below = 0.01 * tol / n as f64;
    let m = n + n % 2;
    let mut slots: Vec<usize> = (0..m).collect();

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a, n);
    while off > tol {
        if sweeps == opts.max_sweeps {
            return Err(GraphError::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for _ in 0..m.saturating_sub(1) {
            let rotations: Vec<Rotation> = (0..m / 2)
                .filter_map(|i| {
                    let (p, q) = (slots[i].min(slots[m - 1 - i]), slots[i].max(slots[m - 1 - i]));
                    if q >= n {
                        return None;
                    }
                    Rotation::annihilating(&a, n, p, q, skip_below)
                })
                .collect();
            if !rotations.is_empty() {
                apply_round(&mut a, &mut v, n, &rotations);
            }
            slots[1..].rotate_right(1);
        }
        off = off_diagonal_norm(&a, n);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        vectors.extend((0..n).map(|k| v[k * n + i]));
    }
    Ok(EigenDecomposition {
        n,
        values,
        vectors,
        sweeps,
        off_norm: off,
    })
}

#[derive(Debug, Clone, Copy)]
struct Rotation {
    p: usize,
    q: usize,
    c: f64,
    s: f64,
}

impl Rotation {
    /// The plane rotation that zeroes `a[p][q]`, or `None` if that entry is
    /// already negligible.
    fn annihilating(a: &[f64], n: usize, p: usize, q: usize, skip_below: f64) -> Option<Rotation> {
        let apq = a[p * n + q];
        if apq.abs() <= skip_below {
            return None;
        }
        let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let c = 1.0 / (t * t + 1.0).sqrt();
        Some(Rotation { p, q, c, s: t * c })
    }
}

// A <- J^T A J and V <- V J for the block-diagonal rotation J of one round.
fn apply_round(a: &mut [f64], v: &mut [f64], n: usize, rotations: &[Rotation]) {
    let column_pass = |row: &mut [f64]| {
        for rot in rotations {
            let (x, y) = (row[rot.p], row[rot.q]);
            row[rot.p] = rot.c * x - rot.s * y;
            row[rot.q] = rot.s * x + rot.c * y;
        }
    };
    a.par_chunks_mut(n).for_each(column_pass);
    v.par_chunks_mut(n).for_each(column_pass);

    let mut rows: Vec<Option<&mut [f64]>> = a.chunks_mut(n).map(Some).collect();
    let pairs: Vec<(&mut [f64], &mut [f64], Rotation)> = rotations
        .iter()
        .map(|rot| {
            let rp = rows[rot.p].take().expect("rotations in a round are disjoint");
            let rq = rows[rot.q].take().expect("rotations in a round are disjoint");
            (rp, rq, *rot)
        })
        .collect();
    pairs.into_par_iter().for_each(|(rp, rq, rot)| {
        for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
            let (xp, yq) = (*x, *y);
            *x = rot.c * xp - rot.s * yq;
            *y = rot.s * xp + rot.c * yq;
        }
        rp[rot.q] = 0.0;
        rq[rot.p] = 0.0;
    });
}
