//! Brute-force symplectic slice at a point of the fibre over `diag(μ)`.
//!
//! Tangent vectors to the orbit are `[ξ, p]` with
//! `ξ = [[0, −x†], [x, X]] ∈ u(n+1)`, `X ∈ u(n)`, `x ∈ C^n`. Those that are
//! ω-orthogonal to the `U(n)` orbit are cut out by
//!
//! ```text
//!     x†z + z†x = 0,        xz† + zx† + [X, M] = 0,
//! ```
//!
//! a real linear system in `n² + 2n` unknowns whose null space is computed
//! numerically. The map `T(X, x) = (c − M)x + Xz` sends solutions into `C^n`;
//! per `μ` block its image is `V_i`, and `U_i = {Y z_i : Y ∈ u(n_i)}` is the
//! image of the directions tangent to the `K_M` orbit.

use num_complex::Complex64;
use serde::Serialize;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::normalform::{compute_mgs, MgsData};
use crate::oracle::linalg::{svd, RMatrix, Svd};
use crate::pattern::{Shape, SpectrumPair};
use crate::realization::{build_point_spec, render_numeric, HermitianMatrix};

/// Default relative rank threshold.
pub const RANK_TOL: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real coordinates on `u(k)`: `k` diagonal entries `i·t`, then for each
/// `a < b` the pair `E_ab − E_ba` and `i(E_ab + E_ba)`.
fn anti_hermitian_from_params(k: usize, theta: &[f64]) -> CMatrix {
    debug_assert_eq!(theta.len(), k * k);
    let mut m = CMatrix::zeros(k, k);
    for a in 0..k {
        m[(a, a)] = Complex64::new(0.0, theta[a]);
    }
    let mut idx = k;
    for a in 0..k {
        for b in a + 1..k {
            let (re, im) = (theta[idx], theta[idx + 1]);
            idx += 2;
            m[(a, b)] = Complex64::new(re, im);
            m[(b, a)] = Complex64::new(-re, im);
        }
    }
    m
}

/// Basis of `u(k)` in the coordinates of [`anti_hermitian_from_params`].
pub fn u_basis(k: usize) -> Vec<CMatrix> {
    (0..k * k)
        .map(|j| {
            let mut e = vec![0.0; k * k];
            e[j] = 1.0;
            anti_hermitian_from_params(k, &e)
        })
        .collect()
}

fn push_complex(out: &mut Vec<f64>, v: Complex64) {
    out.push(v.re);
    out.push(v.im);
}

fn realify_matrix(m: &CMatrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * m.data().len());
    for &v in m.data() {
        push_complex(&mut out, v);
    }
    out
}

fn realify_vec(v: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * v.len());
    for &x in v {
        push_complex(&mut out, x);
    }
    out
}

/// Matrix whose `j`-th column is `f(e_j)` for a linear map `f: R^dim → R^m`.
fn linear_map_matrix(dim: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> RMatrix {
    let columns: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            f(&e)
        })
        .collect();
    let rows = columns.first().map_or(0, Vec::len);
    RMatrix::from_columns(rows, &columns)
}

/// A point over `diag(μ)` split into corner, border and diagonal.
#[derive(Debug, Clone)]
struct Arrowhead {
    c: f64,
    z: Vec<Complex64>,
    mu: Vec<f64>,
    /// `(offset, size)` of each `μ` block in `0..n`.
    blocks: Vec<(usize, usize)>,
    matrix: CMatrix,
}

impl Arrowhead {
    fn new(p: &HermitianMatrix, data: &MgsData) -> Self {
        let n = data.n;
        let m = p.as_cmatrix().clone();
        let mut blocks = Vec::new();
        let mut offset = 0;
        for b in &data.mu_blocks {
            blocks.push((offset, b.size));
            offset += b.size;
        }
        Arrowhead {
            c: m[(0, 0)].re,
            z: (1..=n).map(|i| m[(i, 0)]).collect(),
            mu: (1..=n).map(|i| m[(i, i)].re).collect(),
            blocks,
            matrix: m,
        }
    }

    fn n(&self) -> usize {
        self.z.len()
    }

    fn m_matrix(&self) -> CMatrix {
        CMatrix::from_real_diag(&self.mu)
    }

    fn unpack(&self, theta: &[f64]) -> (CMatrix, Vec<Complex64>) {
        let n = self.n();
        let x_big = anti_hermitian_from_params(n, &theta[..n * n]);
        let x = (0..n)
            .map(|k| Complex64::new(theta[n * n + 2 * k], theta[n * n + 2 * k + 1]))
            .collect();
        (x_big, x)
    }

    /// Residuals of the two orthogonality conditions, realified.
    fn constraints(&self, theta: &[f64]) -> Vec<f64> {
        let n = self.n();
        let (xm, x) = self.unpack(theta);
        let scalar: Complex64 = x.iter().zip(&self.z).map(|(a, b)| a.conj() * b + b.conj() * a).sum();
        let mut out = vec![scalar.re];
        let mut outer = CMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                outer[(a, b)] = x[a] * self.z[b].conj() + self.z[a] * x[b].conj();
            }
        }
        let eq = &outer + &xm.commutator(&self.m_matrix());
        out.extend(realify_matrix(&eq));
        out
    }

    /// `T(X, x) = (c − M)x + Xz`.
    fn t_image(&self, theta: &[f64]) -> Vec<Complex64> {
        let (xm, x) = self.unpack(theta);
        let xz = xm.mul_vec(&self.z);
        (0..self.n()).map(|k| (self.c - self.mu[k]) * x[k] + xz[k]).collect()
    }

    /// `ξ = [[0, −x†], [x, X]]`.
    fn xi(&self, theta: &[f64]) -> CMatrix {
        let n = self.n();
        let (xm, x) = self.unpack(theta);
        let mut out = CMatrix::zeros(n + 1, n + 1);
        for k in 0..n {
            out[(k + 1, 0)] = x[k];
            out[(0, k + 1)] = -x[k].conj();
        }
        out.set_block(1, 1, &xm);
        out
    }

    /// `Tr(p [a, b]) / i`, the orbit symplectic form on `[a, p]`, `[b, p]`.
    fn omega(&self, a: &CMatrix, b: &CMatrix) -> Complex64 {
        (&self.matrix * &a.commutator(b)).trace() / I
    }
}

/// Orthonormal null space of the orthogonality system at `p`.
struct SliceSystem {
    point: Arrowhead,
    null_basis: Vec<Vec<f64>>,
    unstable: bool,
}

impl SliceSystem {
    fn new(point: Arrowhead, tol: f64) -> Result<Self> {
        let n = point.n();
        let a = linear_map_matrix(n * n + 2 * n, |t| point.constraints(t));
        let s = svd(&a)?;
        let scale = s.sigma_max();
        let null_basis = if scale == 0.0 {
            (0..a.cols())
                .map(|j| {
                    let mut e = vec![0.0; a.cols()];
                    e[j] = 1.0;
                    e
                })
                .collect()
        } else {
            s.null_space(tol, scale)
        };
        Ok(SliceSystem {
            unstable: s.near_threshold(tol, scale),
            point,
            null_basis,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceBlock {
    pub value: String,
    pub shape: Shape,
    pub size: usize,
    pub dim_u: usize,
    pub dim_v: usize,
    pub dim_quotient: i64,
    /// Real dimension of the corresponding `W` summand: `2·size` on
    /// parallelograms, else 0.
    pub predicted: usize,
    /// `U_i ⊆ V_i` numerically.
    pub u_in_v: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceReport {
    pub blocks: Vec<SliceBlock>,
    /// Dimension of the solution space of the orthogonality system.
    pub dim_solutions: usize,
    /// `dim V` computed on all of `C^n` at once; equals `Σ dim V_i` when `V`
    /// splits along the blocks.
    pub dim_v_total: usize,
    /// Largest deviation between the orbit form on slice representatives
    /// and the block form with coefficients `1 / C_μ` (0 when `W = {0}`).
    pub max_form_deviation: f64,
    /// Some singular value lay within a factor 10 of a rank threshold.
    pub rank_warning: bool,
}

impl SliceReport {
    pub fn matches_prediction(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.u_in_v && b.dim_quotient == b.predicted as i64)
            && self.dim_v_total == self.blocks.iter().map(|b| b.dim_v).sum::<usize>()
    }

    pub fn dim_w(&self) -> i64 {
        self.blocks.iter().map(|b| b.dim_quotient).sum()
    }
}

fn rows_of(vectors: &[Vec<f64>], r0: usize, len: usize) -> Vec<Vec<f64>> {
    vectors.iter().map(|v| v[r0..r0 + len].to_vec()).collect()
}

fn svd_of_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Option<Svd>> {
    if columns.is_empty() || rows == 0 {
        return Ok(None);
    }
    svd(&RMatrix::from_columns(rows, columns)).map(Some)
}

fn rank_of(s: &Option<Svd>, tol: f64, scale: f64) -> usize {
    s.as_ref()
        .map_or(0, |s| if scale == 0.0 { 0 } else { s.rank(tol, scale) })
}

/// Slice dimensions at the canonical point `p̃` of the pair.
pub fn tangent_slice_dims(pair: &SpectrumPair, tol: f64) -> Result<SliceReport> {
    let p = render_numeric(&build_point_spec(pair));
    tangent_slice_dims_at(pair, &p, tol)
}

/// Slice dimensions at an arbitrary point `p` over `diag(μ)`, e.g. a
/// `K_M`-conjugate of `p̃`.
pub fn tangent_slice_dims_at(pair: &SpectrumPair, p: &HermitianMatrix, tol: f64) -> Result<SliceReport> {
    let data = compute_mgs(pair);
    if p.order() != data.n + 1 {
        return Err(Error::Input(format!(
            "point has order {}, expected {}",
            p.order(),
            data.n + 1
        )));
    }
    let system = SliceSystem::new(Arrowhead::new(p, &data), tol)?;
    let point = &system.point;
    let n = point.n();
    let images: Vec<Vec<f64>> = system
        .null_basis
        .iter()
        .map(|t| realify_vec(&point.t_image(t)))
        .collect();
    let full = svd_of_columns(2 * n, &images)?;
    let v_scale = full.as_ref().map_or(0.0, Svd::sigma_max);
    let mut rank_warning = system.unstable || full.as_ref().is_some_and(|s| s.near_threshold(tol, v_scale));
    let dim_v_total = rank_of(&full, tol, v_scale);

    // U_i generators: Y z_i for Y in a basis of u(n_i)
    let u_gens: Vec<Vec<Vec<f64>>> = point
        .blocks
        .iter()
        .map(|&(off, size)| {
            let zi = &point.z[off..off + size];
            u_basis(size).iter().map(|y| realify_vec(&y.mul_vec(zi))).collect()
        })
        .collect();
    let u_svds: Vec<Option<Svd>> = point
        .blocks
        .iter()
        .zip(&u_gens)
        .map(|(&(_, size), gens)| svd_of_columns(2 * size, gens))
        .collect::<Result<_>>()?;
    let u_scale = u_svds.iter().flatten().map(Svd::sigma_max).fold(0.0, f64::max);
    let scale = v_scale.max(u_scale);

    let mut blocks = Vec::new();
    for (k, (&(off, size), mb)) in point.blocks.iter().zip(&data.mu_blocks).enumerate() {
        let vi = rows_of(&images, 2 * off, 2 * size);
        let vi_svd = svd_of_columns(2 * size, &vi)?;
        let dim_v = rank_of(&vi_svd, tol, v_scale);
        let dim_u = rank_of(&u_svds[k], tol, u_scale);
        if let Some(s) = &u_svds[k] {
            rank_warning |= u_scale > 0.0 && s.near_threshold(tol, u_scale);
        }
        if let Some(s) = &vi_svd {
            rank_warning |= v_scale > 0.0 && s.near_threshold(tol, v_scale);
        }
        let mut joint = vi.clone();
        joint.extend(u_gens[k].iter().cloned());
        let joint_rank = rank_of(&svd_of_columns(2 * size, &joint)?, tol, scale);
        let dim_v_joint = rank_of(&vi_svd, tol, scale);
        blocks.push(SliceBlock {
            value: mb.value.to_string(),
            shape: mb.shape,
            size,
            dim_u,
            dim_v,
            dim_quotient: dim_v as i64 - dim_u as i64,
            predicted: if mb.shape == Shape::P { 2 * size } else { 0 },
            u_in_v: joint_rank == dim_v_joint,
        });
    }
    let max_form_deviation = if data.w_summands.is_empty() {
        0.0
    } else {
        form_deviation(&system, &data)?
    };
    Ok(SliceReport {
        blocks,
        dim_solutions: system.null_basis.len(),
        dim_v_total,
        max_form_deviation,
        rank_warning,
    })
}

/// Compares the orbit form on slice representatives with
/// `Σ_P (1/C_μ) · (−u_μ†w_μ + w_μ†u_μ) / i` on their `T`-images, and checks
/// that the orbit form pairs every slice vector to zero with the `K_M`
/// directions (so it descends to the quotient by `U_p`).
fn form_deviation(system: &SliceSystem, data: &MgsData) -> Result<f64> {
    let point = &system.point;
    let xis: Vec<CMatrix> = system.null_basis.iter().map(|t| point.xi(t)).collect();
    let images: Vec<Vec<Complex64>> = system.null_basis.iter().map(|t| point.t_image(t)).collect();
    let coeffs: Vec<Option<f64>> = data
        .mu_blocks
        .iter()
        .map(|b| {
            data.w_summands
                .iter()
                .find(|w| w.value == b.value)
                .map(|w| w.coefficient.to_f64())
        })
        .collect();
    let model = |u: &[Complex64], w: &[Complex64]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(off, size), coef) in point.blocks.iter().zip(&coeffs) {
            let Some(coef) = coef else { continue };
            let (ub, wb) = (&u[off..off + size], &w[off..off + size]);
            let uw: Complex64 = ub.iter().zip(wb).map(|(a, b)| a.conj() * b).sum();
            let wu: Complex64 = wb.iter().zip(ub).map(|(a, b)| a.conj() * b).sum();
            acc += (-uw + wu) * *coef;
        }
        acc / I
    };
    let mut dev: f64 = 0.0;
    for a in 0..xis.len() {
        for b in 0..xis.len() {
            let orbit = point.omega(&xis[a], &xis[b]);
            let slice = model(&images[a], &images[b]);
            dev = dev.max((orbit - slice).norm());
        }
    }
    // K_M directions diag(0, Y), Y block diagonal
    let n = point.n();
    for &(off, size) in &point.blocks {
        for y in u_basis(size) {
            let mut eta = CMatrix::zeros(n + 1, n + 1);
            eta.set_block(1 + off, 1 + off, &y);
            for xi in &xis {
                dev = dev.max(point.omega(xi, &eta).norm());
            }
        }
    }
    Ok(dev)
}

/// Maximum deviation between the orbit form on the slice at `p̃` and the
/// block form with coefficients `1 / C_μ`. Errors when `W = {0}`.
pub fn symplectic_form_check(pair: &SpectrumPair, tol: f64) -> Result<f64> {
    let data = compute_mgs(pair);
    if data.w_summands.is_empty() {
        return Err(Error::EmptyCheck);
    }
    let p = render_numeric(&build_point_spec(pair));
    let system = SliceSystem::new(Arrowhead::new(&p, &data), tol)?;
    form_deviation(&system, &data)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsotropyReport {
    /// Dimension of `{Y ∈ u(n) : [diag(0, Y), p̃] = 0}`.
    pub dim_found: usize,
    /// `Σ dim L_block`.
    pub dim_expected: usize,
    /// Every generator of every declared `L` block commutes with `p̃`.
    pub generators_ok: bool,
    pub max_generator_residual: f64,
}

impl IsotropyReport {
    pub fn matches(&self) -> bool {
        self.dim_found == self.dim_expected && self.generators_ok
    }
}

/// Lie algebra of the stabilizer of `p̃` in `U(n)` versus the declared `L`.
pub fn isotropy_group_check(pair: &SpectrumPair, tol: f64) -> Result<IsotropyReport> {
    let data = compute_mgs(pair);
    let n = data.n;
    let p = render_numeric(&build_point_spec(pair));
    let pm = p.as_cmatrix();
    let embed = |y: &CMatrix, off: usize| {
        let mut e = CMatrix::zeros(n + 1, n + 1);
        e.set_block(1 + off, 1 + off, y);
        e
    };
    let a = linear_map_matrix(n * n, |t| {
        realify_matrix(&embed(&anti_hermitian_from_params(n, t), 0).commutator(pm))
    });
    let s = svd(&a)?;
    let scale = s.sigma_max();
    let dim_found = if scale == 0.0 {
        n * n
    } else {
        n * n - s.rank(tol, scale)
    };
    let mut residual: f64 = 0.0;
    let mut offset = 0;
    for b in &data.l_blocks {
        let (gen_off, k) = if b.pinned {
            (offset + 1, b.size - 1)
        } else {
            (offset, b.size)
        };
        for y in u_basis(k) {
            residual = residual.max(embed(&y, gen_off).commutator(pm).max_abs());
        }
        offset += b.size;
    }
    let norm = pm.max_abs().max(1.0);
    Ok(IsotropyReport {
        dim_found,
        dim_expected: data.dim_l(),
        generators_ok: residual <= tol * norm,
        max_generator_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{ints, lagrangian_case, q, worked_example};

    fn quotients(r: &SliceReport) -> Vec<i64> {
        r.blocks.iter().map(|b| b.dim_quotient).collect()
    }

    #[test]
    fn basis_is_anti_hermitian() {
        for y in u_basis(3) {
            assert_eq!(y.adjoint(), y.scale(Complex64::new(-1.0, 0.0)));
        }
    }

    #[test]
    fn worked_example_slice() {
        let r = tangent_slice_dims(&worked_example(), RANK_TOL).unwrap();
        assert_eq!(quotients(&r), vec![0, 2, 0, 4, 0]);
        assert!(r.matches_prediction(), "{r:?}");
        assert!(r.max_form_deviation < 1e-8, "{}", r.max_form_deviation);
        assert!(!r.rank_warning);
    }

    #[test]
    fn lagrangian_slice() {
        let r = tangent_slice_dims(&lagrangian_case(&q("2"), &q("1"), &q("0")), RANK_TOL).unwrap();
        assert_eq!(quotients(&r), vec![0]);
        // {Y z : Y ∈ u(2)} is the real hyperplane Re(z†v) = 0
        assert_eq!((r.blocks[0].dim_u, r.blocks[0].dim_v), (3, 3));
    }

    #[test]
    fn single_parallelogram() {
        let pair = SpectrumPair::new(ints(&[1, 0]), ints(&[1])).unwrap();
        let r = tangent_slice_dims(&pair, RANK_TOL).unwrap();
        assert_eq!(quotients(&r), vec![2]);
        let dev = symplectic_form_check(&pair, RANK_TOL).unwrap();
        assert!(dev < 1e-12, "{dev}");
        assert_eq!(compute_mgs(&pair).w_summands[0].coefficient, q("-1"));
    }

    #[test]
    fn point_orbit_has_empty_slice() {
        let pair = SpectrumPair::new(ints(&[1, 1]), ints(&[1])).unwrap();
        let r = tangent_slice_dims(&pair, RANK_TOL).unwrap();
        assert_eq!(quotients(&r), vec![0]);
        assert!(matches!(symplectic_form_check(&pair, RANK_TOL), Err(Error::EmptyCheck)));
    }

    #[test]
    fn isotropy_dimensions() {
        let r = isotropy_group_check(&worked_example(), RANK_TOL).unwrap();
        assert_eq!((r.dim_found, r.dim_expected), (7, 7));
        assert!(r.matches());
        let r = isotropy_group_check(&lagrangian_case(&q("2"), &q("1"), &q("0")), RANK_TOL).unwrap();
        assert_eq!(r.dim_found, 1);
        assert!(r.matches());
        let generic = SpectrumPair::new(ints(&[2, 1, 0]), vec![q("3/2"), q("1/2")]).unwrap();
        let r = isotropy_group_check(&generic, RANK_TOL).unwrap();
        assert_eq!(r.dim_found, 0);
        assert!(r.matches());
    }
}
