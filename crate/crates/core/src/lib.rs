//! Exact computations in Puiseux monoids, numerical monoids and block
//! monoids over finite abelian groups.
//!
//! All arithmetic is exact. Infinitely generated monoids are described
//! symbolically by [`PuiseuxSpec`] and never materialized; answers about them
//! come either from closed forms valid for the whole family or from finite
//! truncations whose depth is part of the answer.

pub mod arith;
pub mod blocks;
pub mod error;
pub mod factor;
pub mod homs;
mod knapsack;
pub mod numerical;
pub mod primary;
pub mod puiseux;

use std::fmt::Display;

use serde::Serializer;

pub use arith::{padic_valuation, Rational, Valuation};
pub use blocks::{FiniteAbelianGroup, GSequence, GroupElement, ZeroSumSequence};
pub use error::{Error, Result};
pub use factor::{Factorization, HalfFactorialReport, LengthSet};
pub use homs::{AutomorphismWindow, HomCheck, HomSpec, TransferCheck, TransferReport};
pub use numerical::NumericalMonoid;
pub use primary::{
    CertificateOutcome, FailureWitness, FinitaryCertificate, McyclicCertificate, RefutationOutcome, ValuationRefutation,
};
pub use puiseux::{
    Classification, Construction, FiniteMonoid, Geometric, GeometricStart, Membership, Polynomial, PrimeFilter,
    PrimeReciprocal, PuiseuxSpec, ReciprocalForm, Truth,
};

pub(crate) fn ser_display<T: Display, S: Serializer>(value: &T, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}
