//! Interlacing pairs and their labelled interlacing patterns.
//!
//! Vertices sit on two staggered rows: `λ_1 … λ_{n+1}` on top and
//! `μ_1 … μ_n` below, with `μ_i` between `λ_i` and `λ_{i+1}`. Two vertices are
//! joined when they are nearest neighbours with equal labels, which gives
//! exactly four kinds of edge:
//!
//! * `top(i) – top(i+1)` when `λ_i = λ_{i+1}`
//! * `bottom(i) – bottom(i+1)` when `μ_i = μ_{i+1}`
//! * `top(i) – bottom(i)` when `λ_i = μ_i`
//! * `top(i+1) – bottom(i)` when `μ_i = λ_{i+1}`
//!
//! Components are classified by counting vertices on each row.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// A validated pair `(λ, μ)` with `λ_1 ≥ μ_1 ≥ λ_2 ≥ … ≥ μ_n ≥ λ_{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumPair {
    lambda: Vec<Rational>,
    mu: Vec<Rational>,
}

impl SpectrumPair {
    pub fn new(lambda: Vec<Rational>, mu: Vec<Rational>) -> Result<Self> {
        validate_interlacing(lambda, mu)
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn mu(&self) -> &[Rational] {
        &self.mu
    }

    /// Rank of the acting group, `U(n)`.
    pub fn n(&self) -> usize {
        self.mu.len()
    }
}

impl<'de> Deserialize<'de> for SpectrumPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lambda: Vec<Rational>,
            mu: Vec<Rational>,
        }
        let raw = Raw::deserialize(d)?;
        validate_interlacing(raw.lambda, raw.mu).map_err(serde::de::Error::custom)
    }
}

fn check_monotone(name: &'static str, seq: &[Rational]) -> Result<()> {
    for (i, w) in seq.windows(2).enumerate() {
        if w[0] < w[1] {
            return Err(Error::NotMonotone {
                name,
                index: i + 1,
                left: w[0].to_string(),
                right: w[1].to_string(),
            });
        }
    }
    Ok(())
}

/// Checks lengths, monotonicity and the interlacing chain. The error names
/// the first violated inequality in chain order.
pub fn validate_interlacing(lambda: Vec<Rational>, mu: Vec<Rational>) -> Result<SpectrumPair> {
    if mu.is_empty() || lambda.len() != mu.len() + 1 {
        return Err(Error::Length {
            lambda: lambda.len(),
            mu: mu.len(),
        });
    }
    check_monotone("lambda", &lambda)?;
    check_monotone("mu", &mu)?;
    for i in 0..mu.len() {
        if lambda[i] < mu[i] {
            return Err(Error::Interlacing {
                inequality: format!("lambda_{} >= mu_{}", i + 1, i + 1),
                left: lambda[i].to_string(),
                right: mu[i].to_string(),
            });
        }
        if mu[i] < lambda[i + 1] {
            return Err(Error::Interlacing {
                inequality: format!("mu_{} >= lambda_{}", i + 1, i + 2),
                left: mu[i].to_string(),
                right: lambda[i + 1].to_string(),
            });
        }
    }
    Ok(SpectrumPair { lambda, mu })
}

/// Distinct values of a non-increasing sequence with their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultisetStats {
    /// Strictly decreasing.
    pub distinct: Vec<Rational>,
    /// `multiplicity[k]` belongs to `distinct[k]`.
    pub multiplicity: Vec<usize>,
}

impl MultisetStats {
    /// Number of distinct values.
    pub fn m(&self) -> usize {
        self.distinct.len()
    }

    pub fn multiplicity_of(&self, value: &Rational) -> Option<usize> {
        self.distinct
            .iter()
            .position(|v| v == value)
            .map(|k| self.multiplicity[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, usize)> {
        self.distinct.iter().zip(self.multiplicity.iter().copied())
    }
}

/// Run-length summary of a non-increasing sequence.
pub fn multiset_stats(seq: &[Rational]) -> MultisetStats {
    let mut distinct: Vec<Rational> = Vec::new();
    let mut multiplicity = Vec::new();
    for v in seq {
        match distinct.last() {
            Some(last) if last == v => *multiplicity.last_mut().unwrap() += 1,
            _ => {
                debug_assert!(distinct.last().is_none_or(|l| l > v), "sequence not non-increasing");
                distinct.push(v.clone());
                multiplicity.push(1);
            }
        }
    }
    MultisetStats { distinct, multiplicity }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Row {
    Top,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Shape {
    /// More top vertices than bottom ones.
    W,
    /// More bottom vertices than top ones.
    M,
    /// Parallelogram: equal, nonzero counts.
    P,
}

impl Shape {
    /// Classification by vertex counts. `None` for counts that cannot occur
    /// in a valid pattern.
    pub fn classify(top: usize, bottom: usize) -> Option<Shape> {
        if top == bottom + 1 {
            Some(Shape::W)
        } else if bottom == top + 1 {
            Some(Shape::M)
        } else if top == bottom && top > 0 {
            Some(Shape::P)
        } else {
            None
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::W => "W",
            Shape::M => "M",
            Shape::P => "P",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vertex {
    pub row: Row,
    /// 1-based position within its row.
    pub index: usize,
    pub label: Rational,
    /// Drawing coordinates: top row at `y = 0`, bottom row at `y = -1`.
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub label: Rational,
    pub top_count: usize,
    pub bottom_count: usize,
    pub shape: Shape,
    /// Indices into [`InterlacingPattern::vertices`].
    pub vertices: Vec<usize>,
}

/// The labelled interlacing pattern of a pair.
///
/// Vertex ids: `0..=n` are `λ_1..λ_{n+1}`, `n+1..2n+1` are `μ_1..μ_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingPattern {
    pub n: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
    /// Ordered by decreasing label; each label has exactly one component.
    pub components: Vec<Component>,
}

impl InterlacingPattern {
    pub fn top(&self, i: usize) -> usize {
        i
    }

    pub fn bottom(&self, i: usize) -> usize {
        self.n + 1 + i
    }

    pub fn component_of_label(&self, label: &Rational) -> Option<&Component> {
        self.components.iter().find(|c| &c.label == label)
    }

    pub fn shape_of(&self, label: &Rational) -> Option<Shape> {
        self.component_of_label(label).map(|c| c.shape)
    }

    /// Labels of components with the given shape, decreasing.
    pub fn labels_with_shape(&self, shape: Shape) -> Vec<Rational> {
        self.components
            .iter()
            .filter(|c| c.shape == shape)
            .map(|c| c.label.clone())
            .collect()
    }

    /// Sorted multiset of `(shape, top_count, bottom_count)`; the label-free
    /// fingerprint of the pattern.
    pub fn shape_signature(&self) -> Vec<(Shape, usize, usize)> {
        let mut sig: Vec<_> = self
            .components
            .iter()
            .map(|c| (c.shape, c.top_count, c.bottom_count))
            .collect();
        sig.sort();
        sig
    }
}

/// Edge list of the pattern on ids as in [`InterlacingPattern`].
pub(crate) fn pattern_edges(lambda: &[Rational], mu: &[Rational]) -> Vec<(usize, usize)> {
    let n = mu.len();
    let bottom = |i: usize| n + 1 + i;
    let mut edges = Vec::new();
    for i in 0..n {
        if lambda[i] == lambda[i + 1] {
            edges.push((i, i + 1));
        }
        if lambda[i] == mu[i] {
            edges.push((i, bottom(i)));
        }
        if mu[i] == lambda[i + 1] {
            edges.push((i + 1, bottom(i)));
        }
        if i + 1 < n && mu[i] == mu[i + 1] {
            edges.push((bottom(i), bottom(i + 1)));
        }
    }
    edges.sort();
    edges
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(size: usize) -> Self {
        UnionFind((0..size).collect())
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn build_pattern(pair: &SpectrumPair) -> InterlacingPattern {
    let (lambda, mu) = (pair.lambda(), pair.mu());
    let n = pair.n();
    let mut vertices = Vec::with_capacity(2 * n + 1);
    for (i, l) in lambda.iter().enumerate() {
        vertices.push(Vertex {
            row: Row::Top,
            index: i + 1,
            label: l.clone(),
            x: i as f64,
            y: 0.0,
        });
    }
    for (i, m) in mu.iter().enumerate() {
        vertices.push(Vertex {
            row: Row::Bottom,
            index: i + 1,
            label: m.clone(),
            x: i as f64 + 0.5,
            y: -1.0,
        });
    }
    let edges = pattern_edges(lambda, mu);
    let mut uf = UnionFind::new(vertices.len());
    for &(a, b) in &edges {
        uf.union(a, b);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..vertices.len() {
        groups.entry(uf.find(v)).or_default().push(v);
    }
    let mut components: Vec<Component> = groups
        .into_values()
        .map(|members| {
            let top_count = members.iter().filter(|&&v| v <= n).count();
            let bottom_count = members.len() - top_count;
            let shape = Shape::classify(top_count, bottom_count)
                .expect("valid interlacing pairs only produce W, M and P components");
            Component {
                label: vertices[members[0]].label.clone(),
                top_count,
                bottom_count,
                shape,
                vertices: members,
            }
        })
        .collect();
    components.sort_by(|a, b| b.label.cmp(&a.label));
    debug_assert!(components.windows(2).all(|w| w[0].label != w[1].label));
    InterlacingPattern {
        n,
        vertices,
        edges,
        components,
    }
}

/// `(Σλ − Σμ) − (Σ_{W} λ − Σ_{M} μ)`; zero for every valid pair.
pub fn sum_identity_residual(pair: &SpectrumPair) -> Rational {
    let pattern = build_pattern(pair);
    let lhs: Rational = pair.lambda().iter().sum::<Rational>() - pair.mu().iter().sum::<Rational>();
    let rhs: Rational = pattern.labels_with_shape(Shape::W).iter().sum::<Rational>()
        - pattern.labels_with_shape(Shape::M).iter().sum::<Rational>();
    lhs - rhs
}

/// Parses a comma-separated list of rationals, e.g. `"6,6,5,3/2"`.
pub fn parse_spectrum(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(crate::exactmath::rat_parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{ints, q, worked_example};

    #[test]
    fn validates_worked_example() {
        assert!(worked_example().n() == 7);
        let ok = SpectrumPair::new(ints(&[1, 1]), ints(&[1])).unwrap();
        assert_eq!(ok.n(), 1);
    }

    #[test]
    fn reports_first_violation() {
        let err = SpectrumPair::new(ints(&[1, 0]), ints(&[2])).unwrap_err();
        match err {
            Error::Interlacing { inequality, .. } => assert_eq!(inequality, "lambda_1 >= mu_1"),
            e => panic!("unexpected {e}"),
        }
        let err = SpectrumPair::new(ints(&[3, 2, 0]), ints(&[1, 0])).unwrap_err();
        assert!(matches!(err, Error::Interlacing { ref inequality, .. } if inequality == "mu_1 >= lambda_2"));
        let err = SpectrumPair::new(ints(&[3, 2, 0]), ints(&[3, 3])).unwrap_err();
        assert!(matches!(err, Error::Interlacing { ref inequality, .. } if inequality == "lambda_2 >= mu_2"));
        assert!(matches!(
            SpectrumPair::new(ints(&[1, 2]), ints(&[1])),
            Err(Error::NotMonotone { name: "lambda", .. })
        ));
        assert!(matches!(
            SpectrumPair::new(ints(&[1, 2]), ints(&[])),
            Err(Error::Length { .. })
        ));
        assert!(matches!(
            SpectrumPair::new(ints(&[2, 1, 0]), ints(&[1])),
            Err(Error::Length { .. })
        ));
    }

    #[test]
    fn multiset_examples() {
        let s = multiset_stats(&ints(&[6, 5, 4, 3, 3, 1, 1]));
        assert_eq!(s.distinct, ints(&[6, 5, 4, 3, 1]));
        assert_eq!(s.multiplicity, vec![1, 1, 1, 2, 2]);
        assert_eq!(s.m(), 5);
        let c = q("7/3");
        let s = multiset_stats(&[c.clone(), c.clone(), c.clone()]);
        assert_eq!(s.distinct, vec![c]);
        assert_eq!(s.multiplicity, vec![3]);
        assert_eq!(multiset_stats(&ints(&[3, 2, 1])).multiplicity, vec![1, 1, 1]);
    }

    #[test]
    fn worked_example_shapes() {
        let p = build_pattern(&worked_example());
        assert_eq!(p.labels_with_shape(Shape::W), ints(&[6, 2, 0]));
        assert_eq!(p.labels_with_shape(Shape::M), ints(&[4, 1]));
        assert_eq!(p.labels_with_shape(Shape::P), ints(&[5, 3]));
        // 3 + 1 + 5 + 3 edges as drawn
        assert_eq!(p.edges.len(), 12);
        let three = p.component_of_label(&q("3")).unwrap();
        assert_eq!((three.top_count, three.bottom_count), (2, 2));
    }

    #[test]
    fn two_equal_mu_between_distinct_lambdas() {
        let pair = SpectrumPair::new(ints(&[5, 2, -1]), ints(&[2, 2])).unwrap();
        let p = build_pattern(&pair);
        assert_eq!(p.labels_with_shape(Shape::W), ints(&[5, -1]));
        assert_eq!(p.labels_with_shape(Shape::M), ints(&[2]));
        let m = p.component_of_label(&q("2")).unwrap();
        assert_eq!((m.top_count, m.bottom_count), (1, 2));
    }

    #[test]
    fn generic_point_has_no_edges() {
        let pair = SpectrumPair::new(ints(&[2, 1, 0]), vec![q("3/2"), q("1/2")]).unwrap();
        let p = build_pattern(&pair);
        assert!(p.edges.is_empty());
        assert_eq!(p.labels_with_shape(Shape::W).len(), 3);
        assert_eq!(p.labels_with_shape(Shape::M).len(), 2);
        assert!(p.labels_with_shape(Shape::P).is_empty());
    }

    #[test]
    fn sum_identity_examples() {
        assert!(sum_identity_residual(&worked_example()).is_zero());
        assert!(sum_identity_residual(&SpectrumPair::new(ints(&[1, 1]), ints(&[1])).unwrap()).is_zero());
        let ala = SpectrumPair::new(vec![q("7/2"), q("1"), q("-2/3")], vec![q("1"), q("1")]).unwrap();
        assert!(sum_identity_residual(&ala).is_zero());
    }

    #[test]
    fn parse_spectrum_list() {
        assert_eq!(parse_spectrum("6, 5,3/2").unwrap(), vec![q("6"), q("5"), q("3/2")]);
        assert!(parse_spectrum("1,x").is_err());
    }

    #[test]
    fn deserializes_and_validates() {
        let p: SpectrumPair = serde_json::from_str(r#"{"lambda":["2","1",0],"mu":["1","1"]}"#).unwrap();
        assert_eq!(p.n(), 2);
        assert!(serde_json::from_str::<SpectrumPair>(r#"{"lambda":["1","0"],"mu":["2"]}"#).is_err());
    }
}
