use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use super::{scalars, Automorphism, FglError, FormalGroupLaw};
use crate::arith::Domain;
use crate::graded::{Poly, Ring, RingBuilder, RingMap, Series};

/// Which polynomial generators v_n of the p-typical Lazard ring to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    #[default]
    Hazewinkel,
    Araki,
}

impl FromStr for GeneratorKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "hazewinkel" => Ok(GeneratorKind::Hazewinkel),
            "araki" => Ok(GeneratorKind::Araki),
            _ => Err(format!("unknown generator kind {s:?}")),
        }
    }
}

fn big_pow(p: u64, e: u64) -> BigInt {
    Pow::pow(BigInt::from(p), e)
}

/// Σ_{1≤i<n} m_i · v_{n−i}^{p^i}.
fn mixed_sum(p: u64, n: usize, m: &[Poly], v: &[Poly], zero: &Poly) -> Poly {
    let mut acc = zero.clone();
    for i in 1..n {
        let vi = v.get(n - i - 1).cloned().unwrap_or_else(|| zero.clone());
        if vi.is_zero() || m[i - 1].is_zero() {
            continue;
        }
        acc = &acc + &(&m[i - 1] * &vi.pow(p.pow(i as u32) as u32));
    }
    acc
}

/// The generators v_1 … v_{n_max} inside ℚ[m_1, …, m_{n_max}] (deg m_i = p^i − 1).
pub fn v_in_terms_of_m(p: u64, n_max: usize, kind: GeneratorKind) -> (Ring, Vec<Poly>) {
    let ring = RingBuilder::new(Domain::Rational)
        .generators((1..=n_max).map(|i| (format!("m{i}"), (p.pow(i as u32) - 1) as i32)))
        .build()
        .expect("polynomial ring");
    let m: Vec<Poly> = (0..n_max).map(|i| Poly::gen(&ring, i)).collect();
    let zero = Poly::zero(&ring);
    let mut v: Vec<Poly> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let lead = match kind {
            GeneratorKind::Hazewinkel => BigRational::from_integer(p.into()),
            GeneratorKind::Araki => BigRational::from_integer(BigInt::from(p) - big_pow(p, p.pow(n as u32))),
        };
        let vn = &m[n - 1].scale(&lead) - &mixed_sum(p, n, &m, &v, &zero);
        v.push(vn);
    }
    (ring, v)
}

/// The log coefficients m_1 … m_{n_max} of the p-typical law classified by the given values of
/// v_1, v_2, … (missing values are 0), in the ℚ-algebra those values live in.
pub fn m_in_terms_of_v(p: u64, n_max: usize, kind: GeneratorKind, v: &[Poly], ring: &Ring) -> Vec<Poly> {
    let zero = Poly::zero(ring);
    let mut m: Vec<Poly> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let vn = v.get(n - 1).cloned().unwrap_or_else(|| zero.clone());
        let rest = mixed_sum(p, n, &m, v, &zero);
        let denom = match kind {
            GeneratorKind::Hazewinkel => BigRational::from_integer(p.into()),
            GeneratorKind::Araki => BigRational::from_integer(BigInt::from(p) - big_pow(p, p.pow(n as u32))),
        };
        m.push((&vn + &rest).scale(&denom.recip()));
    }
    m
}

/// log(t) = Σ m_n t^{p^n} for p^n ≤ trunc.
pub fn p_typical_log(p: u64, kind: GeneratorKind, v: &[Poly], ring: &Ring, trunc: u32) -> Series {
    let mut n_max = 0;
    while p.pow(n_max as u32 + 1) <= trunc as u64 {
        n_max += 1;
    }
    let m = m_in_terms_of_v(p, n_max, kind, v, ring);
    let mut log = Series::var(ring, 1, 0, trunc);
    for (i, mi) in m.iter().enumerate() {
        log.set(&[p.pow(i as u32 + 1) as u32], mi);
    }
    log
}

/// The height-n Honda law over 𝔽_p: the p-typical law with v_n = 1 and all other v_i = 0.
pub fn honda(p: u64, n: u32, trunc: u32, kind: GeneratorKind) -> Result<FormalGroupLaw, FglError> {
    if n == 0 {
        return Err(FglError::Input("Honda laws have height ≥ 1".into()));
    }
    let q = scalars(Domain::Rational);
    let mut v = vec![Poly::zero(&q); n as usize];
    v[n as usize - 1] = Poly::one(&q);
    let log = p_typical_log(p, kind, &v, &q, trunc);
    FormalGroupLaw::from_logarithm(&log)?.cast(&scalars(Domain::PrimeField(p)))
}

/// F = exp(log x + log y) over ℚ[m_1, …, m_{D−1}] with log t = t + Σ m_i t^{i+1}, deg m_i = i,
/// with all three axioms checked.
pub fn universal(trunc: u32) -> Result<FormalGroupLaw, FglError> {
    if trunc < 2 {
        return Err(FglError::Input("truncation must be at least 2".into()));
    }
    let ring = RingBuilder::new(Domain::Rational).generators((1..trunc).map(|i| (format!("m{i}"), i as i32))).build()?;
    let mut log = Series::var(&ring, 1, 0, trunc);
    for i in 1..trunc {
        log.set(&[i + 1], &Poly::gen(&ring, i as usize - 1));
    }
    let law = FormalGroupLaw::from_logarithm(&log)?;
    FormalGroupLaw::new(law.series().clone())
}

/// Specializes the universal law along m_i ↦ values[i−1] into ℚ.
pub fn universal_specialization(law: &FormalGroupLaw, values: &[BigRational]) -> Result<FormalGroupLaw, FglError> {
    let q = scalars(Domain::Rational);
    let src = law.ring();
    if values.len() != src.ngens() {
        return Err(FglError::Input(format!("{} values for {} generators", values.len(), src.ngens())));
    }
    let images = values.iter().map(|c| Poly::constant(&q, c.clone())).collect::<Result<Vec<_>, _>>()?;
    let f = RingMap::new(src, &q, images, false)?;
    law.map(&f)
}

/// m_i ↦ (−1)^i/(i+1), the coefficients of log(1 + t); yields x + y + xy.
pub fn multiplicative_specialization(law: &FormalGroupLaw) -> Result<FormalGroupLaw, FglError> {
    let n = law.ring().ngens() as i64;
    let values: Vec<BigRational> = (1..=n).map(|i| BigRational::new(if i % 2 == 0 { 1 } else { -1 }.into(), (i + 1).into())).collect();
    universal_specialization(law, &values)
}

/// A p-typical law together with a strict isomorphism onto it.
#[derive(Clone, Debug)]
pub struct PTypification {
    pub typical: FormalGroupLaw,
    /// f with f(F(x, y)) = F_typ(f(x), f(y)).
    pub iso: Automorphism,
    /// Logarithm of the p-typical law, over the rationalized ring.
    pub log: Series,
}

/// Cartier p-typification: keep the logarithm's coefficients at t^{p^i}.
pub fn p_typify(law: &FormalGroupLaw, p: u64) -> Result<PTypification, FglError> {
    match law.ring().domain() {
        Domain::Rational => {}
        Domain::PLocal(q) if q == p => {}
        Domain::PrimeField(_) => return Err(FglError::TorsionBase(law.ring().domain().label())),
        d => return Err(FglError::Input(format!("base {} is not a Z_({p})-algebra", d.label()))),
    }
    let log = law.log_series()?;
    let q = log.ring().clone();
    let mut typ = Series::zero(&q, 1, log.trunc());
    let mut k = 1u64;
    while k <= log.trunc() as u64 {
        typ.set(&[k as u32], &log.coefficient(&[k as u32]));
        k *= p;
    }
    let exp_typ = typ.reverse().map_err(FglError::from_graded)?;
    let f = exp_typ.compose(&log)?;
    let typical = FormalGroupLaw::from_logarithm(&typ)?.cast(law.ring())?;
    let iso = Automorphism::new(f.cast(law.ring())?)?;
    Ok(PTypification { typical, iso, log: typ })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rational_valuation, Valuation};
    use crate::fgl::{height, validate, Height};

    #[test]
    fn generator_recursions() {
        let (r, v) = v_in_terms_of_m(3, 2, GeneratorKind::Hazewinkel);
        assert_eq!(v[0], Poly::parse(&r, "3*m1").unwrap());
        assert_eq!(v[1], Poly::parse(&r, "3*m2 - m1*(3*m1)^3").unwrap());
        let (_, a) = v_in_terms_of_m(3, 1, GeneratorKind::Araki);
        assert_eq!(a[0], Poly::parse(a[0].ring(), "-24*m1").unwrap());
        assert!(v_in_terms_of_m(3, 0, GeneratorKind::Araki).1.is_empty());
        // inverse recursions agree with the forward ones
        for kind in [GeneratorKind::Hazewinkel, GeneratorKind::Araki] {
            let (r, v) = v_in_terms_of_m(2, 3, kind);
            let m = m_in_terms_of_v(2, 3, kind, &v, &r);
            for (i, mi) in m.iter().enumerate() {
                assert_eq!(mi, &Poly::gen(&r, i));
            }
        }
    }

    #[test]
    fn hazewinkel_integral_and_congruent_to_araki() {
        for p in [2u64, 3, 5] {
            let (_, h) = v_in_terms_of_m(p, 3, GeneratorKind::Hazewinkel);
            let (_, a) = v_in_terms_of_m(p, 3, GeneratorKind::Araki);
            for (x, y) in h.iter().zip(&a) {
                for c in x.terms().values() {
                    assert!(rational_valuation(c, p) >= Valuation::Finite(0));
                }
                let diff = x - y;
                for c in diff.terms().values() {
                    assert!(rational_valuation(c, p) >= Valuation::Finite(1), "p={p}");
                }
            }
        }
    }

    #[test]
    fn universal_examples() {
        let law = universal(5).unwrap();
        assert!(law.report().is_valid());
        assert_eq!(law.coefficient(1, 1), Poly::parse(law.ring(), "-2*m1").unwrap());
        let mult = multiplicative_specialization(&law).unwrap();
        assert_eq!(mult.series(), FormalGroupLaw::multiplicative(mult.ring(), 5).series());
        let zero = universal_specialization(&law, &vec![rat(0, 1); 4]).unwrap();
        assert_eq!(zero.series(), FormalGroupLaw::additive(zero.ring(), 5).series());
    }

    #[test]
    fn honda_heights() {
        for (p, n) in [(2u64, 1u32), (2, 2), (3, 2)] {
            let d = p.pow(n) as u32;
            let law = honda(p, n, d, GeneratorKind::Hazewinkel).unwrap();
            assert_eq!(height(&law, p, n).unwrap(), Height::Finite(n));
            let law = honda(p, n, d, GeneratorKind::Araki).unwrap();
            assert_eq!(height(&law, p, n).unwrap(), Height::Finite(n));
        }
        assert!(validate(honda(2, 2, 6, GeneratorKind::Hazewinkel).unwrap().series()).is_valid());
    }

    #[test]
    fn cartier() {
        let z3 = scalars(Domain::PLocal(3));
        let mult = FormalGroupLaw::multiplicative(&z3, 10);
        let out = p_typify(&mult, 3).unwrap();
        let c = out.log.scalar_coefficients();
        for (i, x) in c.iter().enumerate() {
            let expected = match i {
                1 => rat(1, 1),
                3 => rat(1, 3),
                9 => rat(1, 9),
                _ => rat(0, 1),
            };
            assert_eq!(x, &expected, "t^{i}");
        }
        let add = FormalGroupLaw::additive(&z3, 10);
        let out = p_typify(&add, 3).unwrap();
        assert_eq!(out.typical.series(), add.series());
        assert_eq!(out.iso, Automorphism::identity(&z3, 10));
        let again = p_typify(&p_typify(&mult, 3).unwrap().typical, 3).unwrap();
        assert_eq!(again.iso, Automorphism::identity(&z3, 10));
    }
}
