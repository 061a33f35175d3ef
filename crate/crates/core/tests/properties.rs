//! Properties checked over random valid pairs.

use interlacing_nf::corpus::{corpus, random_pair};
use interlacing_nf::normalform::{all_c_coefficients, compute_mgs, compute_r_squared, dimension_report};
use interlacing_nf::oracle::{eig_hermitian, sample_KM_conjugate, spectrum_deviation, Prng};
use interlacing_nf::pattern::{multiset_stats, sum_identity_residual, Row, Shape};
use interlacing_nf::polytope::{enumerate_faces, validate_unlabelled};
use interlacing_nf::realization::{
    build_point_spec, factorization_check, membership_check, moment_projection, reduced_identity_check,
};
use interlacing_nf::{build_pattern, Rational, SpectrumPair};
use proptest::prelude::*;

fn pair_from_seed(seed: u64, max_n: usize) -> SpectrumPair {
    let mut prng = Prng::new(seed);
    let n = prng.range(1, max_n as i64 + 1) as usize;
    random_pair(&mut prng, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pattern_laws(seed in any::<u64>()) {
        let pair = pair_from_seed(seed, 10);
        let pattern = build_pattern(&pair);
        prop_assert!(sum_identity_residual(&pair).is_zero());
        let count = |s: Shape| pattern.components.iter().filter(|c| c.shape == s).count();
        prop_assert_eq!(count(Shape::W), count(Shape::M) + 1);
        // μ_i = μ_{i+1} forces both to equal λ_{i+1}
        let n = pair.n();
        for &(a, b) in &pattern.edges {
            if pattern.vertices[a].row == Row::Bottom && pattern.vertices[b].row == Row::Bottom {
                let i = a - n - 1;
                prop_assert!(pattern.edges.contains(&(i + 1, a)));
                prop_assert!(pattern.edges.contains(&(i + 1, b)));
            }
        }
        prop_assert!(validate_unlabelled(n, &pattern.edges).is_ok());
    }

    #[test]
    fn coefficient_laws(seed in any::<u64>()) {
        let pair = pair_from_seed(seed, 10);
        let pattern = build_pattern(&pair);
        for (value, shape, cc) in all_c_coefficients(&pair) {
            prop_assert_ne!(shape, Shape::M);
            prop_assert_eq!(cc.is_zero(), shape == Shape::W);
            prop_assert!(compute_r_squared(&pair, &value).unwrap().is_zero());
        }
        for value in pattern.labels_with_shape(Shape::M) {
            if pair.mu().contains(&value) {
                prop_assert!(compute_r_squared(&pair, &value).unwrap().is_positive());
            }
        }
    }

    #[test]
    fn exact_identities(seed in any::<u64>()) {
        let pair = pair_from_seed(seed, 10);
        let spec = build_point_spec(&pair);
        prop_assert!(membership_check(&pair, &spec));
        prop_assert!(reduced_identity_check(&pair));
        prop_assert!(factorization_check(&pair));
        prop_assert!(dimension_report(&compute_mgs(&pair), &multiset_stats(pair.lambda())).is_ok());
        let total: Rational = spec.blocks.iter().map(|b| b.z_norm_squared.clone()).sum();
        prop_assert!(!total.is_negative());
    }

    #[test]
    fn face_count(seed in any::<u64>()) {
        let pair = pair_from_seed(seed, 6);
        let lambda = pair.lambda();
        let strict = lambda.windows(2).filter(|w| w[0] != w[1]).count();
        let lat = enumerate_faces(lambda).unwrap();
        prop_assert_eq!(lat.faces.len(), 3usize.pow(strict as u32));
        prop_assert_eq!(lat.faces[lat.maximal()].dimension, strict);
        // the pair's own pattern appears among the faces
        let sig = build_pattern(&pair).shape_signature();
        prop_assert!(lat.faces.iter().any(|f| f.shape_signature == sig));
    }
}

#[test]
fn sampled_conjugates_stay_in_the_fibre() {
    let pairs = corpus(77, 20, 6);
    for seed in 0..100u64 {
        let pair = &pairs[seed as usize % pairs.len()];
        let spec = build_point_spec(pair);
        let mu: Vec<f64> = pair.mu().iter().map(Rational::to_f64).collect();
        let lambda: Vec<f64> = pair.lambda().iter().map(Rational::to_f64).collect();
        let q = sample_KM_conjugate(&spec, &mut Prng::new(seed));
        let m = moment_projection(&q).unwrap();
        let scale = 1.0 + mu.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for i in 0..mu.len() {
            for j in 0..mu.len() {
                let target = if i == j { mu[i] } else { 0.0 };
                let d = (m.entry(i, j) - num_complex::Complex64::new(target, 0.0)).norm();
                assert!(d <= 1e-12 * scale, "seed {seed}: entry ({i},{j}) off by {d:e}");
            }
        }
        let ev = eig_hermitian(&q, 1e-14).unwrap();
        assert!(spectrum_deviation(&ev, &lambda) <= 1e-8, "seed {seed}");
    }
}

#[test]
fn corpus_is_deterministic() {
    assert_eq!(corpus(5, 50, 8), corpus(5, 50, 8));
    assert_ne!(corpus(5, 50, 8), corpus(6, 50, 8));
}

// Locks the generator stream so that seeded reports stay comparable across
// versions of the crate and its dependencies.
#[test]
fn seed_42_stream_is_stable() {
    let mut p = Prng::new(42);
    let v: Vec<u64> = (0..3).map(|_| p.next_u64()).collect();
    assert_eq!(v, [12578764544318200737, 17529487244874322312, 7886285670807131020]);
    assert_eq!(Prng::new(42).gaussian().to_bits(), 4609165146906686528);
    let c = corpus(42, 1, 4);
    let show = |v: &[Rational]| v.iter().map(Rational::to_string).collect::<Vec<_>>().join(",");
    assert_eq!(show(c[0].lambda()), "3,0,-6");
    assert_eq!(show(c[0].mu()), "1/2,-18/5");
}
