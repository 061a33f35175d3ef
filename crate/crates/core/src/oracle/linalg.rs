//! Real dense linear algebra for the oracles: cyclic Jacobi for symmetric
//! eigenvalues and one-sided (Hestenes) Jacobi for singular values.
//!
//! Both are self-contained so that results depend only on IEEE arithmetic
//! and the order of operations here.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Default sweep budget for both Jacobi iterations.
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        let mut m = RMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self[(i, j)] * self[(i, j)];
                }
            }
        }
        acc.sqrt()
    }
}

impl Index<(usize, usize)> for RMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, in
/// diagonal order (unsorted). Stops once the off-diagonal Frobenius norm is
/// at most `tol · ‖a‖_F`.
pub fn symmetric_eigenvalues(a: &RMatrix, tol: f64, max_sweeps: usize) -> Result<Vec<f64>> {
    assert_eq!(a.rows, a.cols, "matrix must be square");
    let n = a.rows;
    let mut a = a.clone();
    let norm = a.frobenius_norm();
    let diag = |a: &RMatrix| (0..n).map(|i| a[(i, i)]).collect::<Vec<_>>();
    if norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for sweep in 0..max_sweeps {
        if a.off_diagonal_norm() <= tol * norm {
            return Ok(diag(&a));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                // negligible against both diagonal entries: drop it
                if sweep > 3 && app.abs() + 100.0 * apq.abs() == app.abs() && aqq.abs() + 100.0 * apq.abs() == aqq.abs()
                {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
    }
    if a.off_diagonal_norm() <= tol * norm {
        return Ok(diag(&a));
    }
    Err(Error::NoConvergence("symmetric Jacobi eigensolver", max_sweeps))
}

/// Thin singular value decomposition data: `a · V = U Σ`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// One per column of the input, not sorted.
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns, orthonormal.
    pub v: RMatrix,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.iter().copied().fold(0.0, f64::max)
    }

    /// Number of singular values above `tol · scale`.
    pub fn rank(&self, tol: f64, scale: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > tol * scale).count()
    }

    /// True if some singular value lies within a factor 10 of the threshold.
    pub fn near_threshold(&self, tol: f64, scale: f64) -> bool {
        let thr = tol * scale;
        thr > 0.0 && self.singular_values.iter().any(|&s| s > thr / 10.0 && s < thr * 10.0)
    }

    /// Orthonormal basis (as columns) of the numerical null space.
    pub fn null_space(&self, tol: f64, scale: f64) -> Vec<Vec<f64>> {
        self.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= tol * scale)
            .map(|(j, _)| self.v.column(j))
            .collect()
    }
}

/// One-sided Jacobi SVD: orthogonalizes the columns of `a` by plane
/// rotations accumulated into `V`.
pub fn svd(a: &RMatrix) -> Result<Svd> {
    let (m, k) = (a.rows, a.cols);
    let mut u = a.clone();
    let mut v = RMatrix::identity(k);
    let eps = 1e-15;
    // columns this small are zero for any rank threshold in use
    let negligible = (eps * a.frobenius_norm()).powi(2);
    let mut converged = k < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    alpha += up * up;
                    beta += uq * uq;
                    gamma += up * uq;
                }
                if gamma == 0.0
                    || alpha <= negligible
                    || beta <= negligible
                    || gamma.abs() <= eps * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
                for i in 0..k {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence("one-sided Jacobi SVD", MAX_SWEEPS));
    }
    let singular_values = (0..k)
        .map(|j| (0..m).map(|i| u[(i, j)] * u[(i, j)]).sum::<f64>().sqrt())
        .collect();
    Ok(Svd { singular_values, v })
}
