//! The canonical point `p̃` in the fibre of the moment map over `diag(μ)`
//! and exact orbit-membership tests.
//!
//! A point over `diag(μ)` is an arrowhead matrix
//!
//! ```text
//!     ⎡ c   z₁†  …  z_m† ⎤
//!     ⎢ z₁  μ₁I          ⎥
//!     ⎢ ⋮        ⋱       ⎥
//!     ⎣ z_m          μ_mI⎦
//! ```
//!
//! and it lies in the orbit of `diag(λ)` iff its characteristic polynomial
//! equals `∏(x − λ_i)`. That polynomial only involves `c`, the `μ` blocks and
//! the squared norms `‖z_μ‖²`, so membership is decided in exact rational
//! arithmetic. Floating point is used only by [`render_numeric`].

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::exactmath::{poly_from_roots, PolyQ, Rational};
use crate::normalform::compute_mgs;
use crate::pattern::{build_pattern, multiset_stats, Shape, SpectrumPair};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointBlock {
    pub mu_value: Rational,
    pub size: usize,
    pub z_norm_squared: Rational,
}

/// Exact description of an arrowhead point: corner `c` and, per distinct `μ`
/// value, the block size and `‖z_μ‖²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSpec {
    pub c: Rational,
    /// Decreasing `mu_value`.
    pub blocks: Vec<PointBlock>,
}

impl PointSpec {
    /// `n`, the size of the lower-right block.
    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// `μ` with multiplicities, non-increasing.
    pub fn mu(&self) -> Vec<Rational> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.mu_value.clone(), b.size))
            .collect()
    }
}

/// Hermitian matrix stored densely in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Relative tolerance for the Hermitian test on construction.
    pub const SYMMETRY_TOL: f64 = 1e-12;

    /// Accepts `m` if `|m_ij − conj(m_ji)| ≤ 1e-12 · max(1, max|m|)` and
    /// stores the exactly Hermitian part `(m + m†) / 2`.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::NotHermitian(m.rows()));
        }
        let scale = m.max_abs().max(1.0);
        let adj = m.adjoint();
        let dev = (&m - &adj).max_abs();
        if !dev.is_finite() || dev > Self::SYMMETRY_TOL * scale {
            return Err(Error::NotHermitian(m.rows()));
        }
        if dev == 0.0 {
            return Ok(HermitianMatrix(m));
        }
        Ok(HermitianMatrix((&m + &adj).scale(Complex64::new(0.5, 0.0))))
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        HermitianMatrix(CMatrix::from_real_diag(d))
    }

    pub fn order(&self) -> usize {
        self.0.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.0
    }

    /// Row-major `[[re, im], …]` rows.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.order())
            .map(|i| {
                (0..self.order())
                    .map(|j| {
                        let v = self.entry(i, j);
                        [v.re, v.im]
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("matrix rows must all have the matrix order".into()));
        }
        let data = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
        HermitianMatrix::new(CMatrix::from_vec(n, n, data))
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.to_pairs();
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in &rows {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        HermitianMatrix::from_pairs(&rows).map_err(serde::de::Error::custom)
    }
}

/// Canonical `p̃`: `c = Σλ − Σμ` and `‖z_μ‖² = r_μ²` on every block.
pub fn build_point_spec(pair: &SpectrumPair) -> PointSpec {
    let mgs = compute_mgs(pair);
    PointSpec {
        c: mgs.c.clone(),
        blocks: mgs
            .mu_blocks
            .iter()
            .zip(&mgs.r_squared)
            .map(|(b, r)| PointBlock {
                mu_value: b.value.clone(),
                size: b.size,
                z_norm_squared: r.r_squared.clone(),
            })
            .collect(),
    }
}

/// Characteristic polynomial of the arrowhead point,
/// `(x−c)∏(x−μ)^{n_μ} − Σ_μ ‖z_μ‖² (x−μ)^{n_μ−1} ∏_{τ≠μ}(x−τ)^{n_τ}`.
pub fn charpoly_rhs(spec: &PointSpec) -> PolyQ {
    let factors: Vec<PolyQ> = spec
        .blocks
        .iter()
        .map(|b| PolyQ::x_minus(&b.mu_value).pow(b.size))
        .collect();
    let full = factors.iter().fold(PolyQ::one(), |acc, f| &acc * f);
    let mut out = &PolyQ::x_minus(&spec.c) * &full;
    for (k, b) in spec.blocks.iter().enumerate() {
        if b.z_norm_squared.is_zero() {
            continue;
        }
        let mut term = PolyQ::x_minus(&b.mu_value).pow(b.size - 1);
        for (j, f) in factors.iter().enumerate() {
            if j != k {
                term = &term * f;
            }
        }
        out = &out - &term.scale(&b.z_norm_squared);
    }
    out
}

/// `∏(x − λ_i)`.
pub fn lambda_charpoly(pair: &SpectrumPair) -> PolyQ {
    poly_from_roots(multiset_stats(pair.lambda()).iter())
}

/// True iff the point described by `spec` has spectrum `λ`.
pub fn membership_check(pair: &SpectrumPair, spec: &PointSpec) -> bool {
    charpoly_rhs(spec) == lambda_charpoly(pair)
}

/// Right-hand side of the reduced identity,
/// `(x−c)∏_M(x−μ) − Σ_M r_μ² ∏_{M, τ≠μ}(x−τ)`.
pub fn reduced_rhs(pair: &SpectrumPair) -> PolyQ {
    let mgs = compute_mgs(pair);
    let m_labels: Vec<(&Rational, &Rational)> = mgs
        .mu_blocks
        .iter()
        .zip(&mgs.r_squared)
        .filter(|(b, _)| b.shape == Shape::M)
        .map(|(b, r)| (&b.value, &r.r_squared))
        .collect();
    let prod = m_labels
        .iter()
        .fold(PolyQ::one(), |acc, (v, _)| &acc * &PolyQ::x_minus(v));
    let mut out = &PolyQ::x_minus(&mgs.c) * &prod;
    for (k, (_, r2)) in m_labels.iter().enumerate() {
        let others = m_labels
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .fold(PolyQ::one(), |acc, (_, (v, _))| &acc * &PolyQ::x_minus(v));
        out = &out - &others.scale(r2);
    }
    out
}

/// `∏_{W-shape λ}(x − λ)`.
pub fn w_label_poly(pair: &SpectrumPair) -> PolyQ {
    let pattern = build_pattern(pair);
    poly_from_roots(pattern.labels_with_shape(Shape::W).iter().map(|l| (l, 1)))
}

/// `∏_W(x−λ) = (x−c)∏_M(x−μ) − Σ_M r_μ² ∏_{M,τ≠μ}(x−τ)`, exactly.
pub fn reduced_identity_check(pair: &SpectrumPair) -> bool {
    w_label_poly(pair) == reduced_rhs(pair)
}

/// Divides the canonical characteristic polynomial by
/// `∏_M(x−τ)^{n_τ−1} ∏_{W,P}(x−τ)^{n_τ}` and checks that the division is
/// exact with quotient equal to [`reduced_rhs`].
pub fn factorization_check(pair: &SpectrumPair) -> bool {
    let spec = build_point_spec(pair);
    let mgs = compute_mgs(pair);
    let divisor = mgs.mu_blocks.iter().fold(PolyQ::one(), |acc, b| {
        let e = if b.shape == Shape::M { b.size - 1 } else { b.size };
        &acc * &PolyQ::x_minus(&b.value).pow(e)
    });
    match charpoly_rhs(&spec).div_rem(&divisor) {
        Some((quot, rem)) => rem.is_zero() && quot == reduced_rhs(pair),
        None => false,
    }
}

/// Floating-point arrowhead matrix with `√‖z_μ‖²` in the first coordinate of
/// each block and zeros elsewhere in the border.
pub fn render_numeric(spec: &PointSpec) -> HermitianMatrix {
    let order = spec.n() + 1;
    let mut m = CMatrix::zeros(order, order);
    m[(0, 0)] = Complex64::new(spec.c.to_f64(), 0.0);
    let mut row = 1;
    for b in &spec.blocks {
        let mu = b.mu_value.to_f64();
        for k in 0..b.size {
            m[(row + k, row + k)] = Complex64::new(mu, 0.0);
        }
        let r = b.z_norm_squared.to_f64().max(0.0).sqrt();
        if r != 0.0 {
            m[(row, 0)] = Complex64::new(r, 0.0);
            m[(0, row)] = Complex64::new(r, 0.0);
        }
        row += b.size;
    }
    HermitianMatrix(m)
}

/// Bottom-right principal submatrix of order `order − 1`: the moment map for
/// `U(n)` embedded as `diag(1, U(n))`.
pub fn moment_projection(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    let order = m.order();
    if order < 2 {
        return Err(Error::OrderTooSmall(order));
    }
    Ok(HermitianMatrix(m.0.submatrix(1, 1, order - 1, order - 1)))
}
