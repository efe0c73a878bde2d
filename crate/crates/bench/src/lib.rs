//! Shared inputs for the benchmarks.

use puiseux_core::blocks::FiniteAbelianGroup;
use puiseux_core::{FiniteMonoid, GeometricStart, NumericalMonoid, PrimeFilter, PuiseuxSpec, Rational, ReciprocalForm};

pub fn rational(s: &str) -> Rational {
    s.parse().expect("fixture rational")
}

/// Numerical monoids of growing multiplicity.
pub fn numerical_fixtures() -> Vec<(&'static str, NumericalMonoid)> {
    [
        ("<3,5>", vec![3, 5]),
        ("<11,13,17>", vec![11, 13, 17]),
        ("<101,103,107,109>", vec![101, 103, 107, 109]),
        ("<1009,1013,1019>", vec![1009, 1013, 1019]),
    ]
    .into_iter()
    .map(|(name, gens)| (name, NumericalMonoid::new(&gens).expect("fixture monoid")))
    .collect()
}

/// `(⟨2/3, 5/4, 7/6⟩, x)` pairs for factorization counting.
pub fn factorization_fixtures() -> Vec<(FiniteMonoid, Rational)> {
    let m = FiniteMonoid::new(&[rational("2/3"), rational("5/4"), rational("7/6")]).expect("fixture");
    ["10", "25", "50"].iter().map(|x| (m.clone(), rational(x))).collect()
}

/// One spec per infinite family, with an element to test.
pub fn family_fixtures() -> Vec<(&'static str, PuiseuxSpec, Rational)> {
    vec![
        (
            "1/p",
            PuiseuxSpec::prime_reciprocal(ReciprocalForm::Reciprocal, PrimeFilter::All),
            rational("3001/2310"),
        ),
        (
            "(p^2+1)/p",
            PuiseuxSpec::prime_reciprocal(ReciprocalForm::SquarePlusOneOverPrime, PrimeFilter::Odd),
            rational("8851/105"),
        ),
        (
            "(3/2)^n",
            PuiseuxSpec::geometric(rational("3/2"), GeometricStart::From(0)).expect("fixture"),
            rational("1331/32"),
        ),
    ]
}

pub fn groups() -> Vec<FiniteAbelianGroup> {
    [vec![5], vec![2, 2, 2], vec![7], vec![3, 3]]
        .into_iter()
        .map(|orders| FiniteAbelianGroup::new(orders).expect("fixture group"))
        .collect()
}
