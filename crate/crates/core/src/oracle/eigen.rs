use crate::error::Result;
use crate::oracle::linalg::{symmetric_eigenvalues, RMatrix, MAX_SWEEPS};
use crate::realization::HermitianMatrix;

/// Eigenvalues of a Hermitian matrix, non-increasing, with multiplicity.
///
/// `H = A + iB` is realified to the symmetric `[[A, −B], [B, A]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled; every second
/// sorted value is returned.
pub fn eig_hermitian(m: &HermitianMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = m.order();
    let mut s = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = m.entry(i, j);
            s[(i, j)] = v.re;
            s[(n + i, n + j)] = v.re;
            s[(i, n + j)] = -v.im;
            s[(n + i, j)] = v.im;
        }
    }
    let mut ev = symmetric_eigenvalues(&s, tol, MAX_SWEEPS)?;
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev.into_iter().step_by(2).collect())
}

/// `max_i |computed_i − expected_i| / (1 + max|expected|)`.
pub fn spectrum_deviation(computed: &[f64], expected: &[f64]) -> f64 {
    if computed.len() != expected.len() {
        return f64::INFINITY;
    }
    let scale = 1.0 + expected.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    computed
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::CMatrix;
    use num_complex::Complex64;

    #[test]
    fn small_arrowhead() {
        let c = |v| Complex64::new(v, 0.0);
        let m = CMatrix::from_vec(
            3,
            3,
            vec![c(1.0), c(1.0), c(0.0), c(1.0), c(1.0), c(0.0), c(0.0), c(0.0), c(1.0)],
        );
        let ev = eig_hermitian(&HermitianMatrix::new(m).unwrap(), 1e-14).unwrap();
        assert!(spectrum_deviation(&ev, &[2.0, 1.0, 0.0]) < 1e-10);
    }

    #[test]
    fn diagonal_is_sorted_diagonal() {
        let ev = eig_hermitian(&HermitianMatrix::from_real_diag(&[-1.0, 4.0, 2.5, 2.5]), 1e-14).unwrap();
        assert_eq!(ev, vec![4.0, 2.5, 2.5, -1.0]);
    }

    #[test]
    fn complex_entries() {
        // [[0, -i], [i, 0]] (Pauli y) has eigenvalues ±1
        let m = CMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let ev = eig_hermitian(&HermitianMatrix::new(m).unwrap(), 1e-14).unwrap();
        assert!(spectrum_deviation(&ev, &[1.0, -1.0]) < 1e-14);
    }
}
