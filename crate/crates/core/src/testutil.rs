//! Fixtures shared by unit tests.

use crate::exactmath::{rat_parse, Rational};
use crate::pattern::SpectrumPair;

pub fn q(s: &str) -> Rational {
    rat_parse(s).unwrap()
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_int(x)).collect()
}

/// λ = (6,6,5,3,3,2,1,0), μ = (6,5,4,3,3,1,1).
pub fn worked_example() -> SpectrumPair {
    SpectrumPair::new(ints(&[6, 6, 5, 3, 3, 2, 1, 0]), ints(&[6, 5, 4, 3, 3, 1, 1])).unwrap()
}

/// λ strictly decreasing of length 3 with μ = (λ2, λ2).
pub fn lagrangian_case(l1: &Rational, l2: &Rational, l3: &Rational) -> SpectrumPair {
    SpectrumPair::new(vec![l1.clone(), l2.clone(), l3.clone()], vec![l2.clone(), l2.clone()]).unwrap()
}
