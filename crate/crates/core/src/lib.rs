//! Interlacing patterns, Kirwan polytope faces and local normal forms for
//! the action of `U(n)` on coadjoint orbits of `U(n+1)`.
//!
//! Given spectra `λ` (length `n+1`) and `μ` (length `n`) satisfying
//! `λ_1 ≥ μ_1 ≥ λ_2 ≥ … ≥ μ_n ≥ λ_{n+1}`, the crate computes
//!
//! * the labelled interlacing pattern and its W / M / parallelogram
//!   components ([`pattern`]),
//! * the normal form data `(M, L, W, ω)` with the constants `c`, `r_μ²`,
//!   `C_μ` and a dimension count ([`normalform`]),
//! * the canonical arrowhead point over `diag(μ)` and exact
//!   characteristic-polynomial identities certifying it ([`realization`]),
//! * numerical brute-force checks of spectra, slices and isotropy
//!   ([`oracle`]),
//! * the face lattice of the polytope of all `μ` for a fixed `λ`
//!   ([`polytope`]).
//!
//! All exact work uses arbitrary-precision rationals ([`exactmath`]).

pub mod cli;
pub mod cmatrix;
pub mod corpus;
pub mod error;
pub mod exactmath;
pub mod normalform;
pub mod oracle;
pub mod pattern;
pub mod polytope;
pub mod realization;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use exactmath::{rat_parse, PolyQ, Rational};
pub use pattern::{build_pattern, InterlacingPattern, Shape, SpectrumPair};
