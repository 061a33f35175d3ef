//! Random points of the fibre over `diag(μ)`, obtained by conjugating the
//! canonical point with block-diagonal unitaries from `K_M`.

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::oracle::Prng;
use crate::realization::{render_numeric, HermitianMatrix, PointSpec};

/// Columns whose residual norm drops below this after projection trigger a
/// fresh draw.
const DEGENERATE_NORM: f64 = 1e-10;

/// Haar-distributed `k × k` unitary: Gram–Schmidt on complex Gaussian
/// columns (equivalently QR with positive diagonal in `R`).
pub fn random_unitary(k: usize, prng: &mut Prng) -> CMatrix {
    'draw: loop {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(k);
        for _ in 0..k {
            let mut v: Vec<Complex64> = (0..k).map(|_| prng.complex_gaussian()).collect();
            // two passes of modified Gram–Schmidt
            for _ in 0..2 {
                for q in &cols {
                    let dot: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= dot * qi;
                    }
                }
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < DEGENERATE_NORM {
                continue 'draw;
            }
            for vi in &mut v {
                *vi /= norm;
            }
            cols.push(v);
        }
        let mut u = CMatrix::zeros(k, k);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                u[(i, j)] = v;
            }
        }
        return u;
    }
}

/// `diag(1, u) · p̃ · diag(1, u)†` with `u` block diagonal, one Haar block per
/// distinct `μ` value. Such `u` commute with `diag(μ)`, so the moment image
/// is unchanged while the border vector is rotated within each block.
#[allow(non_snake_case)]
pub fn sample_KM_conjugate(spec: &PointSpec, prng: &mut Prng) -> HermitianMatrix {
    let p = render_numeric(spec);
    let order = p.order();
    let mut big = CMatrix::zeros(order, order);
    big[(0, 0)] = Complex64::new(1.0, 0.0);
    let mut offset = 1;
    for b in &spec.blocks {
        big.set_block(offset, offset, &random_unitary(b.size, prng));
        offset += b.size;
    }
    let conj = &(&big * p.as_cmatrix()) * &big.adjoint();
    HermitianMatrix::new(conj).expect("unitary conjugate of a Hermitian matrix is Hermitian")
}
