use serde::{Deserialize, Serialize};

use super::FglError;
use crate::graded::{GradedError, Poly, Ring, Series};

/// A coordinate change f(t) = u·t + O(t²) with u a unit.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    series: Series,
}

/// Position of a strict coordinate change in the filtration G^n = {f ≡ t mod t^{n+1}}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filtration {
    /// Largest n with f ≡ t mod t^{n+1}; equals the truncation when f = t.
    pub level: u32,
    /// Coefficient of t^{level+1}, the image under G^level → 𝔾_a.
    pub value: String,
}

impl Automorphism {
    pub fn new(series: Series) -> Result<Automorphism, FglError> {
        if series.nvars() != 1 {
            return Err(FglError::Input("a coordinate change is a one-variable series".into()));
        }
        if !series.constant_term().is_zero() {
            return Err(FglError::Graded(GradedError::NonzeroConstantTerm));
        }
        if !series.coefficient(&[1]).is_unit() {
            return Err(FglError::LeadingCoefficientNotUnit);
        }
        Ok(Automorphism { series })
    }

    pub fn identity(ring: &Ring, trunc: u32) -> Automorphism {
        Automorphism { series: Series::var(ring, 1, 0, trunc) }
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn trunc(&self) -> u32 {
        self.series.trunc()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism, FglError> {
        Ok(Automorphism { series: self.series.compose(&other.series)? })
    }

    pub fn invert(&self) -> Result<Automorphism, FglError> {
        Ok(Automorphism { series: self.series.reverse().map_err(FglError::from_graded)? })
    }

    /// f'(0).
    pub fn leading_coefficient(&self) -> Poly {
        self.series.coefficient(&[1])
    }

    pub fn is_strict(&self) -> bool {
        self.leading_coefficient().is_one()
    }

    /// None unless f'(0) = 1.
    pub fn filtration(&self) -> Option<Filtration> {
        if !self.is_strict() {
            return None;
        }
        let d = self.trunc();
        let level = (2..=d).find(|&k| !self.series.coefficient(&[k]).is_zero()).map_or(d, |k| k - 1);
        Some(Filtration { level, value: self.ga_value(level).to_string() })
    }

    /// Coefficient of t^{n+1}; the 𝔾_a-value when f ∈ G^n.
    pub fn ga_value(&self, n: u32) -> Poly {
        self.series.coefficient(&[n + 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Domain;
    use crate::fgl::scalars;

    fn poly(r: &Ring, c: &[i64]) -> Automorphism {
        Automorphism::new(Series::from_coefficients(r, 8, &c.iter().map(|&x| Poly::from_int(r, x)).collect::<Vec<_>>())).unwrap()
    }

    #[test]
    fn group_operations() {
        let q = scalars(Domain::Rational);
        let f = poly(&q, &[0, 1, 0, 1]);
        assert_eq!(f.compose(&f.invert().unwrap()).unwrap(), Automorphism::identity(&q, 8));
        let g = poly(&q, &[0, 1, 0, 0, 3]);
        assert_eq!(g.filtration(), Some(Filtration { level: 3, value: "3".into() }));
        assert_eq!(poly(&q, &[0, 2, 1]).leading_coefficient().to_string(), "2");
        assert_eq!(poly(&q, &[0, 2, 1]).filtration(), None);
        assert_eq!(Automorphism::identity(&q, 8).filtration().unwrap().level, 8);
        let z = scalars(Domain::Integer);
        let s = Series::from_coefficients(&z, 4, &[Poly::zero(&z), Poly::from_int(&z, 2)]);
        assert_eq!(Automorphism::new(s), Err(FglError::LeadingCoefficientNotUnit));
    }
}
