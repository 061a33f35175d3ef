//! Local normal form data `(M, L, W, ω)` of a point with moment image
//! `diag(μ)`, read off from the interlacing pattern of `(λ, μ)`.
//!
//! * `M = diag(μ)`; its stabilizer `K_M` is block diagonal with one `U(k)`
//!   factor per distinct `μ` value of multiplicity `k`.
//! * `L ≤ K_M` keeps the full factor except on M-shape labels, where the
//!   factor is pinned to `diag(1, U(k−1))`.
//! * `W` has one summand `C^k` per parallelogram label, with the symplectic
//!   form scaled by `1 / C_μ`.
//!
//! Equality of [`MgsData`] is structural; no attempt is made to decide
//! equivalence up to automorphisms of `U(n)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::pattern::{build_pattern, multiset_stats, InterlacingPattern, MultisetStats, Shape, SpectrumPair};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuBlock {
    pub value: Rational,
    pub size: usize,
    pub shape: Shape,
}

/// One block of `L`. A pinned block is `{diag(1, k) : k ∈ U(size − 1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LBlock {
    pub size: usize,
    pub pinned: bool,
}

impl LBlock {
    /// Real dimension of the block group.
    pub fn dim(&self) -> usize {
        let k = if self.pinned { self.size - 1 } else { self.size };
        k * k
    }

    /// Rank of the unitary group this block is isomorphic to (0 = trivial).
    pub fn unitary_rank(&self) -> usize {
        if self.pinned {
            self.size - 1
        } else {
            self.size
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WSummand {
    pub value: Rational,
    pub dim_complex: usize,
    #[serde(rename = "C")]
    pub c_mu: Rational,
    /// Scale of the symplectic form on this summand, `1 / C_μ`.
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RSquared {
    pub value: Rational,
    pub r_squared: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MStarSummand {
    pub value: Rational,
    /// Complex dimension of the `C^{k−1}` factor; the summand is `R × C^{k−1}`.
    pub complex_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MgsData {
    pub n: usize,
    /// Decreasing `μ` values.
    pub mu_blocks: Vec<MuBlock>,
    /// Parallel to `mu_blocks`.
    pub l_blocks: Vec<LBlock>,
    pub w_summands: Vec<WSummand>,
    /// Parallel to `mu_blocks`; zero off M-shapes.
    pub r_squared: Vec<RSquared>,
    pub c: Rational,
    pub mstar_summands: Vec<MStarSummand>,
}

impl MgsData {
    pub fn r_squared_of(&self, value: &Rational) -> Option<&Rational> {
        self.r_squared.iter().find(|r| &r.value == value).map(|r| &r.r_squared)
    }

    pub fn dim_l(&self) -> usize {
        self.l_blocks.iter().map(LBlock::dim).sum()
    }

    /// Label-free description: block sizes, pinning and summand dimensions.
    pub fn structure(&self) -> MgsStructure {
        MgsStructure {
            blocks: self
                .mu_blocks
                .iter()
                .zip(&self.l_blocks)
                .map(|(m, l)| (m.shape, l.size, l.pinned))
                .collect(),
            w_dims: self.w_summands.iter().map(|w| w.dim_complex).collect(),
            mstar_dims: self.mstar_summands.iter().map(|m| m.complex_dim).collect(),
        }
    }

    /// `W` written as a direct sum over all `μ` blocks, e.g.
    /// `{0} ⊕ C ⊕ {0} ⊕ C^2 ⊕ {0}`.
    pub fn w_display(&self) -> String {
        self.mu_blocks
            .iter()
            .map(|b| match b.shape {
                Shape::P if b.size == 1 => "C".to_string(),
                Shape::P => format!("C^{}", b.size),
                _ => "{0}".to_string(),
            })
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }

    /// `L` as a product of unitary groups, `1` for trivial factors.
    pub fn l_display(&self) -> String {
        self.l_blocks
            .iter()
            .map(|b| match b.unitary_rank() {
                0 => "1".to_string(),
                k => format!("U({k})"),
            })
            .collect::<Vec<_>>()
            .join(" × ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MgsStructure {
    pub blocks: Vec<(Shape, usize, bool)>,
    pub w_dims: Vec<usize>,
    pub mstar_dims: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub dim_orbit: usize,
    pub dim_k_mod_l: usize,
    pub dim_mstar: usize,
    pub dim_w: usize,
}

/// `c = Σλ − Σμ`, the corner entry of the canonical point.
pub fn compute_c(pair: &SpectrumPair) -> Rational {
    pair.lambda().iter().sum::<Rational>() - pair.mu().iter().sum::<Rational>()
}

fn require_label(pair: &SpectrumPair, mu_value: &Rational) -> Result<()> {
    if pair.mu().contains(mu_value) {
        Ok(())
    } else {
        Err(Error::NotALabel(mu_value.to_string()))
    }
}

fn r_squared_with(pattern: &InterlacingPattern, mu_value: &Rational) -> Rational {
    if pattern.shape_of(mu_value) != Some(Shape::M) {
        return Rational::zero();
    }
    let w_prod: Rational = pattern
        .labels_with_shape(Shape::W)
        .iter()
        .map(|l| mu_value - l)
        .product();
    let m_prod: Rational = pattern
        .labels_with_shape(Shape::M)
        .iter()
        .filter(|t| *t != mu_value)
        .map(|t| mu_value - t)
        .product();
    -(w_prod / m_prod)
}

fn c_coefficient_with(pattern: &InterlacingPattern, c: &Rational, mu_value: &Rational) -> Result<Rational> {
    if pattern.shape_of(mu_value) == Some(Shape::M) {
        return Err(Error::MShapeLabel(mu_value.to_string()));
    }
    let mut acc = c - mu_value;
    for tau in pattern.labels_with_shape(Shape::M) {
        acc += &(r_squared_with(pattern, &tau) / (mu_value - &tau));
    }
    Ok(acc)
}

/// Squared border norm forced on the `μ` block: positive on M-shape labels,
/// zero elsewhere.
pub fn compute_r_squared(pair: &SpectrumPair, mu_value: &Rational) -> Result<Rational> {
    require_label(pair, mu_value)?;
    Ok(r_squared_with(&build_pattern(pair), mu_value))
}

/// `C_μ = c − μ + Σ_{M-shape τ} r_τ² / (μ − τ)`; undefined on M-shape labels.
#[allow(non_snake_case)]
pub fn compute_C(pair: &SpectrumPair, mu_value: &Rational) -> Result<Rational> {
    require_label(pair, mu_value)?;
    c_coefficient_with(&build_pattern(pair), &compute_c(pair), mu_value)
}

/// `C_μ` for every non-M-shape label of `μ`, decreasing. Zero exactly on the
/// W-shape labels.
pub fn all_c_coefficients(pair: &SpectrumPair) -> Vec<(Rational, Shape, Rational)> {
    let pattern = build_pattern(pair);
    let c = compute_c(pair);
    multiset_stats(pair.mu())
        .distinct
        .into_iter()
        .filter_map(|v| {
            let shape = pattern.shape_of(&v)?;
            let cc = c_coefficient_with(&pattern, &c, &v).ok()?;
            Some((v, shape, cc))
        })
        .collect()
}

pub fn compute_mgs(pair: &SpectrumPair) -> MgsData {
    let pattern = build_pattern(pair);
    let c = compute_c(pair);
    let stats = multiset_stats(pair.mu());
    let mut mu_blocks = Vec::new();
    let mut l_blocks = Vec::new();
    let mut w_summands = Vec::new();
    let mut r_squared = Vec::new();
    let mut mstar_summands = Vec::new();
    for (value, size) in stats.iter() {
        let shape = pattern.shape_of(value).expect("every mu value labels a component");
        mu_blocks.push(MuBlock {
            value: value.clone(),
            size,
            shape,
        });
        l_blocks.push(LBlock {
            size,
            pinned: shape == Shape::M,
        });
        r_squared.push(RSquared {
            value: value.clone(),
            r_squared: r_squared_with(&pattern, value),
        });
        match shape {
            Shape::P => {
                let c_mu = c_coefficient_with(&pattern, &c, value).expect("not an M-shape");
                let coefficient = c_mu.recip().expect("C is nonzero on parallelogram labels");
                w_summands.push(WSummand {
                    value: value.clone(),
                    dim_complex: size,
                    c_mu,
                    coefficient,
                });
            }
            Shape::M => mstar_summands.push(MStarSummand {
                value: value.clone(),
                complex_dim: size - 1,
            }),
            Shape::W => {}
        }
    }
    MgsData {
        n: pair.n(),
        mu_blocks,
        l_blocks,
        w_summands,
        r_squared,
        c,
        mstar_summands,
    }
}

/// Dimension count of the model bundle `K ×_L (m* × W)` against the orbit.
pub fn dimension_report(data: &MgsData, lambda_stats: &MultisetStats) -> Result<DimReport> {
    let n = data.n;
    let dim_orbit = (n + 1) * (n + 1) - lambda_stats.multiplicity.iter().map(|k| k * k).sum::<usize>();
    let dim_k_mod_l = n * n - data.dim_l();
    let dim_mstar = data.mstar_summands.iter().map(|m| 1 + 2 * m.complex_dim).sum();
    let dim_w = data.w_summands.iter().map(|w| 2 * w.dim_complex).sum();
    let report = DimReport {
        dim_orbit,
        dim_k_mod_l,
        dim_mstar,
        dim_w,
    };
    if dim_orbit != dim_k_mod_l + dim_mstar + dim_w {
        return Err(Error::Internal(format!(
            "dimension mismatch: orbit {dim_orbit} != {dim_k_mod_l} + {dim_mstar} + {dim_w}"
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{ints, lagrangian_case, q, worked_example};

    #[test]
    fn c_examples() {
        assert_eq!(compute_c(&worked_example()), q("3"));
        assert_eq!(
            compute_c(&SpectrumPair::new(ints(&[2, 1, 0]), ints(&[1, 1])).unwrap()),
            q("1")
        );
        let (a, b) = (q("9/4"), q("-1/3"));
        assert_eq!(
            compute_c(&SpectrumPair::new(vec![a.clone(), b.clone()], vec![a]).unwrap()),
            b
        );
    }

    // Hand values: r² = −∏_W(μ−λ)/∏_{M,τ≠μ}(μ−τ) with W = {6,2,0}, M = {4,1}.
    #[test]
    fn r_squared_examples() {
        let p = worked_example();
        assert_eq!(compute_r_squared(&p, &q("4")).unwrap(), q("16/3"));
        assert_eq!(compute_r_squared(&p, &q("1")).unwrap(), q("5/3"));
        assert_eq!(compute_r_squared(&p, &q("3")).unwrap(), q("0"));
        assert_eq!(compute_r_squared(&p, &q("6")).unwrap(), q("0"));
        assert!(matches!(compute_r_squared(&p, &q("2")), Err(Error::NotALabel(_))));

        let (l1, l2, l3) = (q("7/2"), q("1"), q("-2/3"));
        let ala = lagrangian_case(&l1, &l2, &l3);
        assert_eq!(compute_r_squared(&ala, &l2).unwrap(), (&l1 - &l2) * (&l2 - &l3));
    }

    // Hand values via ∏_W(μ−λ) = −C_μ ∏_M(μ−τ):
    // μ=5: −15 = −C·4, μ=3: −9 = −C·(−2), μ=6: 0.
    #[test]
    fn c_coefficient_examples() {
        let p = worked_example();
        assert_eq!(compute_C(&p, &q("5")).unwrap(), q("15/4"));
        assert_eq!(compute_C(&p, &q("3")).unwrap(), q("-9/2"));
        assert_eq!(compute_C(&p, &q("6")).unwrap(), q("0"));
        assert!(matches!(compute_C(&p, &q("4")), Err(Error::MShapeLabel(_))));
        let all = all_c_coefficients(&p);
        assert_eq!(
            all,
            vec![
                (q("6"), Shape::W, q("0")),
                (q("5"), Shape::P, q("15/4")),
                (q("3"), Shape::P, q("-9/2"))
            ]
        );
    }

    #[test]
    fn worked_example_mgs() {
        let d = compute_mgs(&worked_example());
        let l: Vec<_> = d.l_blocks.iter().map(|b| (b.size, b.pinned)).collect();
        assert_eq!(l, vec![(1, false), (1, false), (1, true), (2, false), (2, true)]);
        assert_eq!(d.l_display(), "U(1) × U(1) × 1 × U(2) × U(1)");
        assert_eq!(d.w_display(), "{0} ⊕ C ⊕ {0} ⊕ C^2 ⊕ {0}");
        assert_eq!(d.w_summands.len(), 2);
        assert_eq!(d.w_summands[0].coefficient, q("4/15"));
        assert_eq!(d.w_summands[1].coefficient, q("-2/9"));
        assert_eq!(d.dim_l(), 7);
        let ms: Vec<_> = d
            .mstar_summands
            .iter()
            .map(|m| (m.value.clone(), m.complex_dim))
            .collect();
        assert_eq!(ms, vec![(q("4"), 0), (q("1"), 1)]);
        let dims = dimension_report(&d, &multiset_stats(worked_example().lambda())).unwrap();
        assert_eq!(
            (dims.dim_orbit, dims.dim_k_mod_l, dims.dim_mstar, dims.dim_w),
            (52, 42, 4, 6)
        );
    }

    #[test]
    fn lagrangian_case_mgs() {
        let ala = lagrangian_case(&q("2"), &q("1"), &q("0"));
        let d = compute_mgs(&ala);
        assert_eq!(d.l_blocks, vec![LBlock { size: 2, pinned: true }]);
        assert_eq!(d.l_display(), "U(1)");
        assert!(d.w_summands.is_empty());
        assert_eq!(
            d.mstar_summands,
            vec![MStarSummand {
                value: q("1"),
                complex_dim: 1
            }]
        );
        let dims = dimension_report(&d, &multiset_stats(ala.lambda())).unwrap();
        assert_eq!(
            (dims.dim_orbit, dims.dim_k_mod_l, dims.dim_mstar, dims.dim_w),
            (6, 3, 3, 0)
        );
    }

    #[test]
    fn point_orbit() {
        let pair = SpectrumPair::new(ints(&[1, 1]), ints(&[1])).unwrap();
        let d = compute_mgs(&pair);
        assert_eq!(d.mu_blocks[0].shape, Shape::W);
        assert_eq!(d.l_blocks, vec![LBlock { size: 1, pinned: false }]);
        assert!(d.w_summands.is_empty() && d.mstar_summands.is_empty());
        let dims = dimension_report(&d, &multiset_stats(pair.lambda())).unwrap();
        assert_eq!(
            (dims.dim_orbit, dims.dim_k_mod_l, dims.dim_mstar, dims.dim_w),
            (0, 0, 0, 0)
        );
    }

    #[test]
    fn dimension_mismatch_is_internal_error() {
        let mut d = compute_mgs(&worked_example());
        d.l_blocks[0].pinned = true;
        assert!(matches!(
            dimension_report(&d, &multiset_stats(worked_example().lambda())),
            Err(Error::Internal(_))
        ));
    }
}
