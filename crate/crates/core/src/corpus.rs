//! Random valid `(λ, μ)` pairs for sweeps and property checks.
//!
//! Values are drawn from a coarse rational grid so that repeated eigenvalues
//! and boundary points (`μ_i = λ_i` or `μ_i = λ_{i+1}`) occur often; all
//! three component shapes show up in most pairs with `n ≥ 4`.

use crate::exactmath::Rational;
use crate::oracle::Prng;
use crate::pattern::SpectrumPair;

/// Non-increasing `λ` of length `n + 1`.
pub fn random_lambda(prng: &mut Prng, n: usize) -> Vec<Rational> {
    let mut lambda: Vec<Rational> = (0..=n)
        .map(|_| {
            let den = if prng.chance(0.7) { 1 } else { prng.range(2, 5) };
            Rational::new(prng.range(-6 * den, 6 * den + 1), den)
        })
        .collect();
    lambda.sort_by(|a, b| b.cmp(a));
    lambda
}

/// A `μ` interlacing the given `λ`, biased towards the interval endpoints.
pub fn random_mu(prng: &mut Prng, lambda: &[Rational]) -> Vec<Rational> {
    lambda
        .windows(2)
        .map(|w| {
            let (hi, lo) = (&w[0], &w[1]);
            if hi == lo {
                return hi.clone();
            }
            let u = prng.uniform();
            if u < 0.3 {
                hi.clone()
            } else if u < 0.6 {
                lo.clone()
            } else {
                let den = prng.range(2, 8);
                let k = prng.range(1, den);
                lo + (hi - lo) * Rational::new(k, den)
            }
        })
        .collect()
}

pub fn random_pair(prng: &mut Prng, n: usize) -> SpectrumPair {
    let lambda = random_lambda(prng, n);
    let mu = random_mu(prng, &lambda);
    SpectrumPair::new(lambda, mu).expect("generator only emits interlacing pairs")
}

/// `count` pairs with `n` uniform in `1..=max_n`.
pub fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<SpectrumPair> {
    let mut prng = Prng::new(seed);
    (0..count)
        .map(|_| {
            let n = prng.range(1, max_n as i64 + 1) as usize;
            random_pair(&mut prng, n)
        })
        .collect()
}
