//! One-sided Jacobi singular value decomposition.
//!
//! Cyclic sweeps of plane rotations orthogonalize the columns of the working
//! matrix; right rotations accumulate into V. The method needs no external
//! dependency and keeps high relative accuracy for small singular values,
//! which the instability experiments depend on.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::system::SingularSystem;

/// A rotation pair counts as converged once |⟨w_i, w_j⟩| falls below
/// `JACOBI_REL_TOL · ‖w_i‖ ‖w_j‖`.
pub const JACOBI_REL_TOL: f64 = 1e-12;

/// Hard cap on cyclic sweeps before reporting non-convergence.
const MAX_SWEEPS: usize = 64;

/// Largest accepted column count (the Gram matrix would have up to
/// 4096 × 4096 entries) and largest accepted total entry count.
const MAX_GRAM_SIDE: usize = 4096;
const MAX_ENTRIES: usize = MAX_GRAM_SIDE * MAX_GRAM_SIDE;

/// Column-major working storage for the sweep phase.
struct Columns {
    rows: usize,
    data: Vec<f64>,
}

impl Columns {
    fn from_row_major(a: &DenseMatrix) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        let mut data = vec![0.0; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                data[c * rows + r] = a.at(r, c);
            }
        }
        Self { rows, data }
    }

    fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { rows: n, data }
    }

    #[inline]
    fn col(&self, c: usize) -> &[f64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    /// Borrow two distinct columns mutably.
    #[inline]
    fn col_pair_mut(&mut self, i: usize, j: usize) -> (&mut [f64], &mut [f64]) {
        debug_assert!(i < j);
        let (head, tail) = self.data.split_at_mut(j * self.rows);
        (
            &mut head[i * self.rows..(i + 1) * self.rows],
            &mut tail[..self.rows],
        )
    }
}

#[inline]
fn rotate(ci: &mut [f64], cj: &mut [f64], c: f64, s: f64) {
    for (a, b) in ci.iter_mut().zip(cj.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// Compute the singular system of `a`, dropping modes with
/// σ_n ≤ `rank_tol` · σ_1.
///
/// Columns of the returned U live in the domain of `a` (length = cols),
/// columns of V in its range (length = rows). Singular values come back
/// strictly positive and non-increasing; each u_n is scaled so that its
/// first nonzero entry is positive.
pub fn compute_svd(a: &DenseMatrix, rank_tol: f64) -> Result<SingularSystem> {
    if rank_tol < 0.0 || !rank_tol.is_finite() {
        return Err(Error::InvalidParameter(
            "rank tolerance must be finite and nonnegative".into(),
        ));
    }
    if a.cols().max(a.rows()) > MAX_GRAM_SIDE || a.rows() * a.cols() > MAX_ENTRIES {
        return Err(Error::ResourceLimit(format!(
            "matrix {}x{} exceeds the supported workspace ({} columns, {} entries)",
            a.rows(),
            a.cols(),
            MAX_GRAM_SIDE,
            MAX_ENTRIES
        )));
    }

    // Work on the tall orientation; swap the factors back afterwards.
    if a.rows() < a.cols() {
        let sys = compute_svd(&a.transposed(), rank_tol)?;
        return Ok(sys.swapped());
    }

    let mut work = Columns::from_row_major(a);
    let mut right = Columns::identity(a.cols());
    let n = a.cols();

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in (i + 1)..n {
                let (ci, cj) = (work.col(i), work.col(j));
                let aa = crate::matrix::dot(ci, ci);
                let bb = crate::matrix::dot(cj, cj);
                let d = crate::matrix::dot(ci, cj);
                if d == 0.0 || d * d <= JACOBI_REL_TOL * JACOBI_REL_TOL * aa * bb {
                    continue;
                }
                rotated = true;
                let zeta = (bb - aa) / (2.0 * d);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (wi, wj) = work.col_pair_mut(i, j);
                rotate(wi, wj, c, s);
                let (vi, vj) = right.col_pair_mut(i, j);
                rotate(vi, vj, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    // Column norms are the singular values; order them non-increasing.
    let norms: Vec<f64> = (0..n)
        .map(|c| crate::matrix::dot(work.col(c), work.col(c)).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let sigma_max = norms[order[0]];
    if sigma_max <= 0.0 {
        return Err(Error::EmptySpectrum);
    }
    let keep: Vec<usize> = order
        .into_iter()
        .filter(|&c| norms[c] > rank_tol * sigma_max)
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptySpectrum);
    }

    let n_modes = keep.len();
    let dim_y = a.rows();
    let dim_x = a.cols();
    let mut sigma = Vec::with_capacity(n_modes);
    // Row-major factors: u-columns live in X (length dim_x), v-columns in Y.
    let mut u = vec![0.0; dim_x * n_modes];
    let mut v = vec![0.0; dim_y * n_modes];
    for (m, &c) in keep.iter().enumerate() {
        sigma.push(norms[c]);
        let wcol = work.col(c);
        let ucol = right.col(c);
        // Sign convention: first nonzero entry of u_n positive.
        let flip = ucol
            .iter()
            .find(|e| **e != 0.0)
            .map_or(1.0, |e| if *e < 0.0 { -1.0 } else { 1.0 });
        for r in 0..dim_x {
            u[r * n_modes + m] = flip * ucol[r];
        }
        let inv = flip / norms[c];
        for r in 0..dim_y {
            v[r * n_modes + m] = inv * wcol[r];
        }
    }

    SingularSystem::from_parts(
        sigma,
        DenseMatrix::new(dim_x, n_modes, u)?,
        DenseMatrix::new(dim_y, n_modes, v)?,
    )
}
