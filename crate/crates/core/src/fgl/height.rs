use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FglError, FormalGroupLaw};
use crate::graded::Series;

/// [p](t) by iterating [k](t) = F(t, [k−1](t)).
pub fn p_series(law: &FormalGroupLaw, p: u64) -> Result<Series, FglError> {
    let r = law.ring();
    let t = Series::var(r, 1, 0, law.trunc());
    let mut acc = t.clone();
    for _ in 1..p {
        acc = law.apply(&t, &acc)?;
    }
    Ok(acc)
}

/// Height verdicts that a truncated computation can certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Height {
    Finite(u32),
    /// [p](t) vanishes through degree p^B but not through the truncation.
    AtLeast(u32),
    /// [p](t) vanishes through the truncation, which is at least p^B.
    InfiniteWithinBound(u32),
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(n) => write!(f, "{n}"),
            Height::AtLeast(n) => write!(f, ">= {n}"),
            Height::InfiniteWithinBound(b) => write!(f, "infinity (within bound {b})"),
        }
    }
}

/// Height of a law at p: 0 in characteristic 0, otherwise the smallest n ≤ bound with a
/// nonzero coefficient of t^{p^n} in [p](t).
pub fn height(law: &FormalGroupLaw, p: u64, bound: u32) -> Result<Height, FglError> {
    let ch = law.ring().domain().characteristic();
    if ch == 0 {
        return Ok(Height::Finite(0));
    }
    if ch != p {
        return Err(FglError::Input(format!("base has characteristic {ch}, not {p}")));
    }
    let needed = p.checked_pow(bound).ok_or_else(|| FglError::Input("bound too large".into()))?;
    if (law.trunc() as u64) < needed {
        return Err(FglError::TruncationTooSmall { needed, have: law.trunc() });
    }
    let ps = p_series(law, p)?;
    for n in 0..=bound {
        if !ps.coefficient(&[p.pow(n) as u32]).is_zero() {
            return Ok(Height::Finite(n));
        }
    }
    let beyond = ps.terms().iter().any(|(e, _)| e[0] as u64 > needed);
    Ok(if beyond { Height::AtLeast(bound + 1) } else { Height::InfiniteWithinBound(bound) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Domain;
    use crate::fgl::scalars;

    #[test]
    fn p_series_examples() {
        let q = scalars(Domain::Rational);
        let add = FormalGroupLaw::additive(&q, 6);
        assert_eq!(p_series(&add, 5).unwrap().to_string(), "5*t");
        let mult = FormalGroupLaw::multiplicative(&q, 6);
        assert_eq!(p_series(&mult, 3).unwrap().to_string(), "3*t + 3*t^2 + t^3");
        let f3 = scalars(Domain::PrimeField(3));
        assert_eq!(p_series(&FormalGroupLaw::multiplicative(&f3, 6), 3).unwrap().to_string(), "t^3");
    }

    #[test]
    fn height_examples() {
        let f7 = scalars(Domain::PrimeField(7));
        assert_eq!(height(&FormalGroupLaw::multiplicative(&f7, 7), 7, 1).unwrap(), Height::Finite(1));
        assert_eq!(height(&FormalGroupLaw::additive(&f7, 49), 7, 2).unwrap(), Height::InfiniteWithinBound(2));
        assert!(matches!(height(&FormalGroupLaw::additive(&f7, 8), 7, 2), Err(FglError::TruncationTooSmall { needed: 49, .. })));
        let q = scalars(Domain::Rational);
        assert_eq!(height(&FormalGroupLaw::additive(&q, 4), 7, 2).unwrap(), Height::Finite(0));
    }
}
