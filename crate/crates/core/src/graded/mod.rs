//! Graded commutative rings with supported relation shapes, sparse polynomials over them,
//! and truncated power series in up to three formal variables.

mod json;
mod parse;
mod poly;
mod ring;
mod series;

use std::collections::BTreeMap;

use num_rational::BigRational;
use thiserror::Error;

use crate::arith::ArithError;

pub use json::{parse_domain, GeneratorSpec, RingSpec};
pub use parse::{parse_poly, valid_name};
pub use poly::{format_terms, same_ring, Poly, RingMap};
pub use ring::{Generator, GradedRing, Relation, Ring, RingBuilder};
pub use series::Series;

/// Exponent vector, one entry per ring generator.
pub type Mono = Vec<i32>;
/// Sparse map from monomials to nonzero coefficients.
pub type Terms = BTreeMap<Mono, BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("negative exponent on non-inverted generator {0}")]
    NegativeExponent(String),
    #[error("relation {0} is not homogeneous")]
    Inhomogeneous(String),
    #[error("relation {0} is outside the supported shapes")]
    UnsupportedRelation(String),
    #[error("elements live in different rings")]
    RingMismatch,
    #[error("degree mismatch for {gen}: expected {expected}, found {found}")]
    DegreeMismatch { gen: String, expected: i32, found: String },
    #[error("image of inverted generator {0} is not a unit")]
    ImageOfInvertedNotUnit(String),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("leading coefficient is not a unit")]
    LeadingCoefficientNotUnit,
    #[error("coefficient ring {0} has torsion")]
    TorsionBase(String),
    #[error("graded piece is infinite (generator {0} has non-positive degree)")]
    InfinitePiece(String),
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("series variable count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
}
