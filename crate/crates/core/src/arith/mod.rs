//! Exact scalars and linear algebra over ℤ, ℚ, ℤ_(p) and 𝔽_p.

mod linalg;
mod matrix;
mod scalar;
mod smith;

pub use linalg::{
    cokernel_invariants, domain_smith, kernel_basis, rank, solve, DomainSmith,
};
pub use matrix::{IntMatrix, Matrix, QMatrix};
pub use scalar::{
    int_valuation, is_prime, p_part, rational_valuation, Domain, Scalar, ScalarOp, Valuation,
};
pub use smith::{smith_normal_form, SmithDecomposition};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by non-unit {value} in {domain}")]
    DivisionByNonUnit { value: String, domain: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: String, right: String },
    #[error("{value} does not lie in {domain}")]
    NotInDomain { value: String, domain: String },
    #[error("F_{0} has no rationalization")]
    TorsionDomain(u64),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

pub fn rat(n: i64, d: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}
