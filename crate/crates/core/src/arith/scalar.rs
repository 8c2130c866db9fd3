use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ArithError;

/// Coefficient domain of a graded ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    Integer,
    Rational,
    /// Rationals whose denominator is prime to `p`.
    PLocal(u64),
    /// Integers modulo `p`, stored as representatives in `0..p`.
    PrimeField(u64),
}

impl Domain {
    pub fn prime(&self) -> Option<u64> {
        match *self {
            Domain::PLocal(p) | Domain::PrimeField(p) => Some(p),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Domain::PrimeField(p) => p,
            _ => 0,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Domain::Rational | Domain::PrimeField(_))
    }

    pub fn is_torsion_free(&self) -> bool {
        !matches!(self, Domain::PrimeField(_))
    }

    /// The domain obtained by inverting every nonzero integer.
    pub fn rationalized(&self) -> Result<Domain, ArithError> {
        match self {
            Domain::PrimeField(p) => Err(ArithError::TorsionDomain(*p)),
            _ => Ok(Domain::Rational),
        }
    }

    /// Reduction modulo the maximal ideal `(p)`, when that makes sense.
    pub fn residue_field(&self) -> Option<Domain> {
        match *self {
            Domain::PLocal(p) | Domain::PrimeField(p) => Some(Domain::PrimeField(p)),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Domain::Integer => "Z".into(),
            Domain::Rational => "Q".into(),
            Domain::PLocal(p) => format!("Z_({p})"),
            Domain::PrimeField(p) => format!("F_{p}"),
        }
    }

    /// Brings an arbitrary rational into canonical form in this domain.
    pub fn normalize(&self, x: BigRational) -> Result<BigRational, ArithError> {
        match *self {
            Domain::Rational => Ok(x),
            Domain::Integer => {
                if x.is_integer() {
                    Ok(x)
                } else {
                    Err(ArithError::NotInDomain { value: x.to_string(), domain: self.label() })
                }
            }
            Domain::PLocal(p) => {
                if x.denom().is_one() || !x.denom().is_multiple_of(&BigInt::from(p)) {
                    Ok(x)
                } else {
                    Err(ArithError::NotInDomain { value: x.to_string(), domain: self.label() })
                }
            }
            Domain::PrimeField(p) => {
                let pb = BigInt::from(p);
                if x.denom().is_one() {
                    return Ok(BigRational::from_integer(x.numer().mod_floor(&pb)));
                }
                let den = x.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(ArithError::NotInDomain { value: x.to_string(), domain: self.label() });
                }
                let inv = mod_inverse(&den, &pb).expect("p prime");
                Ok(BigRational::from_integer((x.numer() * inv).mod_floor(&pb)))
            }
        }
    }

    pub fn is_unit(&self, x: &BigRational) -> bool {
        if x.is_zero() {
            return false;
        }
        match *self {
            Domain::Rational | Domain::PrimeField(_) => true,
            Domain::Integer => x.abs().is_one(),
            Domain::PLocal(p) => !x.numer().is_multiple_of(&BigInt::from(p)),
        }
    }

    pub fn inverse(&self, x: &BigRational) -> Result<BigRational, ArithError> {
        if x.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if !self.is_unit(x) {
            return Err(ArithError::DivisionByNonUnit { value: x.to_string(), domain: self.label() });
        }
        self.normalize(x.recip())
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.reduce(-a)
    }

    /// Division; fails unless `b` is a unit.
    pub fn div(&self, a: &BigRational, b: &BigRational) -> Result<BigRational, ArithError> {
        let inv = self.inverse(b)?;
        Ok(self.mul(a, &inv))
    }

    /// Reduction of a value already known to lie in the domain (closure of ring operations).
    pub(crate) fn reduce(&self, x: BigRational) -> BigRational {
        match *self {
            Domain::PrimeField(p) => {
                let pb = BigInt::from(p);
                if x.denom().is_one() {
                    BigRational::from_integer(x.numer().mod_floor(&pb))
                } else {
                    self.normalize(x).expect("closed under ring operations")
                }
            }
            _ => x,
        }
    }

    /// Image of `x` (an element of `from`) in this domain under the canonical ring map.
    pub fn convert(&self, from: Domain, x: &BigRational) -> Result<BigRational, ArithError> {
        match (from, *self) {
            (Domain::PrimeField(p), Domain::PrimeField(q)) if p == q => Ok(x.clone()),
            (Domain::PrimeField(p), _) => Err(ArithError::DomainMismatch {
                left: Domain::PrimeField(p).label(),
                right: self.label(),
            }),
            _ => self.normalize(x.clone()),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// p-adic valuation; `Infinity` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("infinity"),
        }
    }
}

pub fn int_valuation(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinity;
    }
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    Valuation::Finite(v)
}

pub fn rational_valuation(x: &BigRational, p: u64) -> Valuation {
    match (int_valuation(x.numer(), p), int_valuation(x.denom(), p)) {
        (Valuation::Infinity, _) => Valuation::Infinity,
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        (Valuation::Finite(_), Valuation::Infinity) => unreachable!("denominator is nonzero"),
    }
}

/// The p-power part `p^{ν_p(n)}` of a nonzero integer.
pub fn p_part(n: &BigInt, p: u64) -> BigInt {
    match int_valuation(n, p) {
        Valuation::Finite(v) => num_traits::pow(BigInt::from(p), v as usize),
        Valuation::Infinity => BigInt::zero(),
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of one of the supported coefficient domains.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    domain: Domain,
    value: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn new(domain: Domain, value: BigRational) -> Result<Self, ArithError> {
        Ok(Scalar { value: domain.normalize(value)?, domain })
    }

    pub fn from_int(domain: Domain, n: i64) -> Self {
        Scalar::new(domain, BigRational::from_integer(n.into())).expect("integers lie in every domain")
    }

    pub fn from_ratio(domain: Domain, num: i64, den: i64) -> Result<Self, ArithError> {
        if den == 0 {
            return Err(ArithError::DivisionByZero);
        }
        Scalar::new(domain, BigRational::new(num.into(), den.into()))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.domain.is_unit(&self.value)
    }

    pub fn apply(&self, other: &Scalar, op: ScalarOp) -> Result<Scalar, ArithError> {
        if self.domain != other.domain {
            return Err(ArithError::DomainMismatch { left: self.domain.label(), right: other.domain.label() });
        }
        let d = self.domain;
        let value = match op {
            ScalarOp::Add => d.add(&self.value, &other.value),
            ScalarOp::Sub => d.sub(&self.value, &other.value),
            ScalarOp::Mul => d.mul(&self.value, &other.value),
            ScalarOp::Div => d.div(&self.value, &other.value)?,
        };
        Ok(Scalar { domain: d, value })
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.apply(other, ScalarOp::Add)
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.apply(other, ScalarOp::Sub)
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.apply(other, ScalarOp::Mul)
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.apply(other, ScalarOp::Div)
    }

    /// ν_p of the value. Not defined for prime-field elements.
    pub fn p_valuation(&self, p: u64) -> Result<Valuation, ArithError> {
        match self.domain {
            Domain::PrimeField(_) => Err(ArithError::DomainMismatch {
                left: self.domain.label(),
                right: "a torsion-free domain".into(),
            }),
            _ => Ok(rational_valuation(&self.value, p)),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.value.is_integer() {
            self.value.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(Domain::Rational, n, d).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q(1, 2).add(&q(1, 3)).unwrap(), q(5, 6));
    }

    #[test]
    fn plocal_product_and_non_unit_division() {
        let d = Domain::PLocal(3);
        let a = Scalar::from_ratio(d, 3, 5).unwrap();
        let five = Scalar::from_int(d, 5);
        assert_eq!(a.mul(&five).unwrap(), Scalar::from_int(d, 3));
        let one = Scalar::from_int(d, 1);
        let three = Scalar::from_int(d, 3);
        assert!(matches!(one.div(&three), Err(ArithError::DivisionByNonUnit { .. })));
        assert!(Scalar::from_ratio(d, 1, 3).is_err());
    }

    #[test]
    fn prime_field_canonical() {
        let d = Domain::PrimeField(7);
        let a = Scalar::from_int(d, -1);
        assert_eq!(a.value(), &BigRational::from_integer(6.into()));
        let half = Scalar::from_ratio(d, 1, 2).unwrap();
        assert_eq!(half.value(), &BigRational::from_integer(4.into()));
    }

    #[test]
    fn domain_mismatch() {
        let a = Scalar::from_int(Domain::Rational, 1);
        let b = Scalar::from_int(Domain::Integer, 1);
        assert!(matches!(a.add(&b), Err(ArithError::DomainMismatch { .. })));
    }

    #[test]
    fn valuations() {
        assert_eq!(q(18, 5).p_valuation(3).unwrap(), Valuation::Finite(2));
        assert_eq!(q(0, 1).p_valuation(5).unwrap(), Valuation::Infinity);
        assert_eq!(Scalar::from_int(Domain::Integer, 240).p_valuation(2).unwrap(), Valuation::Finite(4));
        assert_eq!(q(1, 9).p_valuation(3).unwrap(), Valuation::Finite(-2));
    }
}
