//! Faces of the polytope `Δ_λ = {μ : (λ, μ) interlaces}`.
//!
//! `Δ_λ` is the box `∏ [λ_{i+1}, λ_i]`, so a face fixes, for every slot `i`,
//! whether `μ_i` sits at the upper end, the lower end, or is free. Faces are
//! identified by their closed tight set: the equalities `μ_i = λ_i` and
//! `μ_i = λ_{i+1}` that hold on the relative interior. A slot with
//! `λ_i = λ_{i+1}` always carries both flags.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::normalform::{compute_mgs, dimension_report, DimReport, MgsData};
use crate::pattern::{build_pattern, multiset_stats, validate_interlacing, Shape, SpectrumPair, UnionFind};

/// Largest `n` accepted by [`enumerate_faces`].
pub const MAX_FACE_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// `μ_i = λ_i`.
    Upper,
    /// `μ_i = λ_{i+1}`.
    Lower,
}

/// One tightness flag; `slot` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TightFlag {
    pub slot: usize,
    pub side: Side,
}

impl fmt::Display for TightFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = match self.side {
            Side::Upper => self.slot,
            Side::Lower => self.slot + 1,
        };
        write!(f, "mu_{} = lambda_{}", self.slot, j)
    }
}

impl Serialize for TightFlag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// State of a single slot on a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    Free,
    Upper,
    Lower,
    /// `λ_i = λ_{i+1}`: both flags, no freedom.
    Pinned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceDescriptor {
    /// Closed tight set, sorted.
    pub tight_set: Vec<TightFlag>,
    pub dimension: usize,
    pub shape_signature: Vec<(Shape, usize, usize)>,
    pub representative_mu: Vec<Rational>,
}

impl FaceDescriptor {
    fn slot_state(&self, slot: usize) -> Slot {
        let up = self.tight_set.contains(&TightFlag {
            slot,
            side: Side::Upper,
        });
        let lo = self.tight_set.contains(&TightFlag {
            slot,
            side: Side::Lower,
        });
        match (up, lo) {
            (false, false) => Slot::Free,
            (true, false) => Slot::Upper,
            (false, true) => Slot::Lower,
            (true, true) => Slot::Pinned,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceLattice {
    pub lambda: Vec<Rational>,
    /// Sorted by dimension, then tight set.
    pub faces: Vec<FaceDescriptor>,
    /// Hasse diagram: `(sub-face, super-face)` index pairs where the
    /// super-face frees exactly one slot.
    pub order_relation: Vec<(usize, usize)>,
}

impl FaceLattice {
    /// Number of faces of each dimension, starting at 0.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.dimension).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for face in &self.faces {
            f[face.dimension] += 1;
        }
        f
    }

    /// `a ⊆ b` as faces, i.e. the tight set of `a` contains that of `b`.
    pub fn is_subface(&self, a: usize, b: usize) -> bool {
        let big: BTreeSet<_> = self.faces[a].tight_set.iter().collect();
        self.faces[b].tight_set.iter().all(|t| big.contains(t))
    }

    /// Index of the unique face of maximal dimension.
    pub fn maximal(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn vertices(&self) -> impl Iterator<Item = &FaceDescriptor> {
        self.faces.iter().filter(|f| f.dimension == 0)
    }
}

/// Adds the flags forced by the tight set and by repeats in `λ`; `None` if
/// the set asks `μ_i` to equal both ends of a nondegenerate interval.
pub fn close_tight_set(lambda: &[Rational], flags: &[TightFlag]) -> Option<Vec<TightFlag>> {
    let n = lambda.len().saturating_sub(1);
    let mut set: BTreeSet<TightFlag> = flags.iter().copied().collect();
    for slot in 1..=n {
        let up = TightFlag {
            slot,
            side: Side::Upper,
        };
        let lo = TightFlag {
            slot,
            side: Side::Lower,
        };
        if lambda[slot - 1] == lambda[slot] {
            set.insert(up);
            set.insert(lo);
        } else if set.contains(&up) && set.contains(&lo) {
            return None;
        }
    }
    Some(set.into_iter().collect())
}

fn check_lambda(lambda: &[Rational]) -> Result<usize> {
    if lambda.len() < 2 {
        return Err(Error::Length {
            lambda: lambda.len(),
            mu: lambda.len().saturating_sub(1),
        });
    }
    let n = lambda.len() - 1;
    if n > MAX_FACE_N {
        return Err(Error::Bound { n, max: MAX_FACE_N });
    }
    // reuse the monotonicity check on λ with a μ that certainly interlaces
    validate_interlacing(lambda.to_vec(), lambda[1..].to_vec())?;
    Ok(n)
}

fn mu_for(lambda: &[Rational], slots: &[Slot], free_value: impl Fn(usize) -> Rational) -> Vec<Rational> {
    slots
        .iter()
        .enumerate()
        .map(|(i, s)| match s {
            Slot::Upper | Slot::Pinned => lambda[i].clone(),
            Slot::Lower => lambda[i + 1].clone(),
            Slot::Free => free_value(i),
        })
        .collect()
}

fn descriptor(lambda: &[Rational], slots: &[Slot]) -> FaceDescriptor {
    let mut tight_set = Vec::new();
    for (i, s) in slots.iter().enumerate() {
        let slot = i + 1;
        if matches!(s, Slot::Upper | Slot::Pinned) {
            tight_set.push(TightFlag {
                slot,
                side: Side::Upper,
            });
        }
        if matches!(s, Slot::Lower | Slot::Pinned) {
            tight_set.push(TightFlag {
                slot,
                side: Side::Lower,
            });
        }
    }
    let mu = mu_for(lambda, slots, |i| Rational::midpoint(&lambda[i], &lambda[i + 1]));
    let pair = SpectrumPair::new(lambda.to_vec(), mu).expect("face points lie in the polytope");
    FaceDescriptor {
        tight_set,
        dimension: slots.iter().filter(|s| **s == Slot::Free).count(),
        shape_signature: build_pattern(&pair).shape_signature(),
        representative_mu: pair.mu().to_vec(),
    }
}

/// All faces of `Δ_λ` with their Hasse diagram.
///
/// Equivalent to closing every subset of the `2n` flags and discarding the
/// infeasible ones, but enumerated slot by slot so that infeasible subsets
/// are never generated: `3^s` faces for `s` slots with `λ_i > λ_{i+1}`.
pub fn enumerate_faces(lambda: &[Rational]) -> Result<FaceLattice> {
    let n = check_lambda(lambda)?;
    let choices: Vec<Vec<Slot>> = (0..n)
        .map(|i| {
            if lambda[i] == lambda[i + 1] {
                vec![Slot::Pinned]
            } else {
                vec![Slot::Free, Slot::Upper, Slot::Lower]
            }
        })
        .collect();
    let mut all: Vec<Vec<Slot>> = vec![Vec::with_capacity(n)];
    for opts in &choices {
        all = all
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&s| {
                    let mut next = prefix.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
    }
    let mut faces: Vec<(Vec<Slot>, FaceDescriptor)> = all
        .into_iter()
        .map(|slots| {
            let d = descriptor(lambda, &slots);
            (slots, d)
        })
        .collect();
    faces.sort_by(|a, b| {
        a.1.dimension
            .cmp(&b.1.dimension)
            .then_with(|| a.1.tight_set.cmp(&b.1.tight_set))
    });
    let index: HashMap<&[Slot], usize> = faces.iter().enumerate().map(|(k, (s, _))| (s.as_slice(), k)).collect();
    let mut order_relation = Vec::new();
    for (k, (slots, _)) in faces.iter().enumerate() {
        for i in 0..n {
            if matches!(slots[i], Slot::Upper | Slot::Lower) {
                let mut up = slots.clone();
                up[i] = Slot::Free;
                order_relation.push((k, index[up.as_slice()]));
            }
        }
    }
    order_relation.sort();
    Ok(FaceLattice {
        lambda: lambda.to_vec(),
        faces: faces.into_iter().map(|(_, d)| d).collect(),
        order_relation,
    })
}

fn face_slots(lambda: &[Rational], face: &FaceDescriptor) -> Result<Vec<Slot>> {
    let n = lambda.len().saturating_sub(1);
    if face.tight_set.iter().any(|t| t.slot == 0 || t.slot > n) {
        return Err(Error::Input("tight set refers to a slot outside 1..=n".into()));
    }
    let closed = close_tight_set(lambda, &face.tight_set)
        .ok_or_else(|| Error::Input("tight set pins a slot to both ends of its interval".into()))?;
    if closed != face.tight_set {
        return Err(Error::Input("tight set is not closed for this lambda".into()));
    }
    Ok((1..=n).map(|slot| face.slot_state(slot)).collect())
}

/// Midpoint representative of a face: pinned slots take their forced value,
/// free slots the midpoint of `(λ_{i+1}, λ_i)`.
pub fn face_representative(lambda: &[Rational], face: &FaceDescriptor) -> Result<SpectrumPair> {
    let slots = face_slots(lambda, face)?;
    let mu = mu_for(lambda, &slots, |i| Rational::midpoint(&lambda[i], &lambda[i + 1]));
    SpectrumPair::new(lambda.to_vec(), mu)
}

/// The point of the face whose free slot `i` is `λ_{i+1} + t_i (λ_i − λ_{i+1})`;
/// `weights` has one entry per free slot, each in `(0, 1)`.
pub fn face_point(lambda: &[Rational], face: &FaceDescriptor, weights: &[Rational]) -> Result<SpectrumPair> {
    let slots = face_slots(lambda, face)?;
    let free: Vec<usize> = (0..slots.len()).filter(|&i| slots[i] == Slot::Free).collect();
    if weights.len() != free.len() {
        return Err(Error::Input(format!(
            "expected {} weights, got {}",
            free.len(),
            weights.len()
        )));
    }
    let zero = Rational::zero();
    let one = Rational::one();
    if weights.iter().any(|t| t <= &zero || t >= &one) {
        return Err(Error::Input("weights must lie strictly between 0 and 1".into()));
    }
    let mu = mu_for(lambda, &slots, |i| {
        let t = &weights[free.iter().position(|&j| j == i).expect("free slot")];
        &lambda[i + 1] + &(t * &(&lambda[i] - &lambda[i + 1]))
    });
    SpectrumPair::new(lambda.to_vec(), mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceInvariants {
    pub mgs: MgsData,
    pub dims: DimReport,
}

pub fn face_invariants(lambda: &[Rational], face: &FaceDescriptor) -> Result<FaceInvariants> {
    invariants_at(&face_representative(lambda, face)?)
}

/// Normal form data at any point of `Δ_λ`.
pub fn invariants_at(pair: &SpectrumPair) -> Result<FaceInvariants> {
    let mgs = compute_mgs(pair);
    let dims = dimension_report(&mgs, &multiset_stats(pair.lambda()))?;
    Ok(FaceInvariants { mgs, dims })
}

/// Position of a vertex in the zigzag order `λ_1, μ_1, λ_2, …, λ_{n+1}`,
/// with ids as in [`crate::pattern::InterlacingPattern`].
fn zigzag(n: usize, v: usize) -> usize {
    if v <= n {
        2 * v
    } else {
        2 * (v - n - 1) + 1
    }
}

fn vertex_name(n: usize, v: usize) -> String {
    if v <= n {
        format!("lambda_{}", v + 1)
    } else {
        format!("mu_{}", v - n)
    }
}

/// Pairs of vertices that may be joined in a pattern: adjacent tops,
/// adjacent bottoms, and each bottom with the two tops above it.
fn allowed(n: usize, a: usize, b: usize) -> bool {
    let (a, b) = (a.min(b), a.max(b));
    if b <= n || a > n {
        b == a + 1
    } else {
        let i = b - n - 1;
        a == i || a == i + 1
    }
}

/// Checks that an unlabelled graph on `λ_1..λ_{n+1}`, `μ_1..μ_n` comes from
/// some labelled interlacing pattern.
///
/// Equal labels are transitive, so the vertex classes must be runs in the
/// zigzag order and every allowed pair inside a class must be an edge.
pub fn validate_unlabelled(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    let size = 2 * n + 1;
    let mut uf = UnionFind::new(size);
    let mut present = BTreeSet::new();
    for &(a, b) in edges {
        if a >= size || b >= size || a == b || !allowed(n, a, b) {
            return Err(Error::InvalidPattern(format!(
                "edge ({a}, {b}) is not an interlacing relation"
            )));
        }
        uf.union(a, b);
        present.insert((a.min(b), a.max(b)));
    }
    let mut by_zigzag: Vec<usize> = (0..size).collect();
    by_zigzag.sort_by_key(|&v| zigzag(n, v));
    let classes: Vec<usize> = by_zigzag.iter().map(|&v| uf.find(v)).collect();
    let mut seen = BTreeSet::new();
    for (k, &c) in classes.iter().enumerate() {
        if k > 0 && classes[k - 1] != c && !seen.insert(c) {
            return Err(Error::InvalidPattern(format!(
                "{} is joined to a class it is separated from by {}",
                vertex_name(n, by_zigzag[k]),
                vertex_name(n, by_zigzag[k - 1])
            )));
        }
        if k == 0 {
            seen.insert(c);
        }
    }
    for a in 0..size {
        for b in a + 1..size {
            if allowed(n, a, b) && uf.find(a) == uf.find(b) && !present.contains(&(a, b)) {
                return Err(Error::InvalidPattern(format!(
                    "{} = {} is forced but the edge is missing",
                    vertex_name(n, a),
                    vertex_name(n, b)
                )));
            }
        }
    }
    Ok(())
}
