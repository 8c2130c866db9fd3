//! Formal group laws as truncated two-variable series: axiom checks, logarithms,
//! p-series and heights, p-typical constructions and the group of coordinate changes.

mod aut;
mod height;
mod typical;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Domain;
use crate::graded::{GradedError, Poly, Ring, RingSpec, Series};

pub use aut::{Automorphism, Filtration};
pub use height::{height, p_series, Height};
pub use typical::{
    honda, m_in_terms_of_v, multiplicative_specialization, p_typical_log, p_typify, universal, universal_specialization, v_in_terms_of_m, GeneratorKind,
    PTypification,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FglError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("coefficient ring {0} has torsion")]
    TorsionBase(String),
    #[error("truncation {have} is below p^B = {needed}")]
    TruncationTooSmall { needed: u64, have: u32 },
    #[error("not a formal group law: {0}")]
    InvalidLaw(String),
    #[error("leading coefficient is not a unit")]
    LeadingCoefficientNotUnit,
    #[error("{0}")]
    Input(String),
}

impl FglError {
    fn from_graded(e: GradedError) -> FglError {
        match e {
            GradedError::TorsionBase(s) => FglError::TorsionBase(s),
            GradedError::LeadingCoefficientNotUnit => FglError::LeadingCoefficientNotUnit,
            e => FglError::Graded(e),
        }
    }
}

/// First coefficient at which two sides of an axiom disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Check {
    Pass,
    Fail { at: Violation },
    /// Holds because the law was built from a logarithm or transported along a coordinate change.
    ByConstruction,
}

impl Check {
    pub fn holds(&self) -> bool {
        !matches!(self, Check::Fail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub truncation: u32,
    pub unit: Check,
    pub commutativity: Check,
    pub associativity: Check,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.unit.holds() && self.commutativity.holds() && self.associativity.holds()
    }
}

fn mono_name(nvars: usize, e: &[u32]) -> String {
    const NAMES: [&str; 3] = ["x", "y", "z"];
    let names: &[&str] = if nvars == 1 { &["t"] } else { &NAMES[..nvars] };
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(&k, _)| k > 0)
        .map(|(&k, n)| if k == 1 { n.to_string() } else { format!("{n}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Compares two series and reports the first (lowest total degree) differing coefficient.
fn compare(lhs: &Series, rhs: &Series) -> Check {
    let diff = lhs.checked_sub(rhs).expect("same shape");
    let mut terms = diff.terms();
    terms.sort_by(|a, b| {
        let da: u32 = a.0.iter().sum();
        let db: u32 = b.0.iter().sum();
        da.cmp(&db).then(b.0.cmp(&a.0))
    });
    match terms.first() {
        None => Check::Pass,
        Some((e, _)) => Check::Fail {
            at: Violation { monomial: mono_name(lhs.nvars(), e), lhs: lhs.coefficient(e).to_string(), rhs: rhs.coefficient(e).to_string() },
        },
    }
}

fn check_unit(f: &Series) -> Check {
    let r = f.ring();
    let d = f.trunc();
    let t = Series::var(r, 1, 0, d);
    let z = Series::zero(r, 1, d);
    let c0 = f.constant_term();
    if !c0.is_zero() {
        return Check::Fail { at: Violation { monomial: "1".into(), lhs: c0.to_string(), rhs: "0".into() } };
    }
    match compare(&f.substitute(&[t.clone(), z.clone()]).expect("valid arguments"), &t) {
        Check::Pass => compare(&f.substitute(&[z, t.clone()]).expect("valid arguments"), &t),
        fail => fail,
    }
}

fn check_commutativity(f: &Series) -> Check {
    compare(f, &f.permute(&[1, 0]))
}

fn check_associativity(f: &Series) -> Check {
    let r = f.ring();
    let d = f.trunc();
    let x = Series::var(r, 3, 0, d);
    let y = Series::var(r, 3, 1, d);
    let z = Series::var(r, 3, 2, d);
    let fxy = f.widen(3);
    let fyz = f.substitute(&[y, z.clone()]).expect("valid arguments");
    let lhs = f.substitute(&[fxy, z]).expect("valid arguments");
    let rhs = f.substitute(&[x, fyz]).expect("valid arguments");
    compare(&lhs, &rhs)
}

/// Checks all three axioms; failures are reported as data.
pub fn validate(f: &Series) -> AxiomReport {
    assert_eq!(f.nvars(), 2, "a formal group law has two variables");
    AxiomReport { truncation: f.trunc(), unit: check_unit(f), commutativity: check_commutativity(f), associativity: check_associativity(f) }
}

/// A series F(x, y) satisfying the formal group law axioms up to its truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalGroupLaw {
    series: Series,
    report: AxiomReport,
}

impl FormalGroupLaw {
    pub fn new(series: Series) -> Result<FormalGroupLaw, FglError> {
        let report = validate(&series);
        if !report.is_valid() {
            return Err(FglError::InvalidLaw(serde_json::to_string(&report).expect("serializable")));
        }
        Ok(FormalGroupLaw { series, report })
    }

    /// For laws whose associativity is inherited (from a logarithm or an isomorphism); unit
    /// and commutativity are still checked since they are cheap.
    pub(crate) fn by_construction(series: Series) -> Result<FormalGroupLaw, FglError> {
        let report = AxiomReport {
            truncation: series.trunc(),
            unit: check_unit(&series),
            commutativity: check_commutativity(&series),
            associativity: Check::ByConstruction,
        };
        if !report.is_valid() {
            return Err(FglError::InvalidLaw(serde_json::to_string(&report).expect("serializable")));
        }
        Ok(FormalGroupLaw { series, report })
    }

    pub fn additive(ring: &Ring, trunc: u32) -> FormalGroupLaw {
        let x = Series::var(ring, 2, 0, trunc);
        let y = Series::var(ring, 2, 1, trunc);
        FormalGroupLaw::new(x.checked_add(&y).expect("same ring")).expect("additive law")
    }

    /// x + y + xy.
    pub fn multiplicative(ring: &Ring, trunc: u32) -> FormalGroupLaw {
        let x = Series::var(ring, 2, 0, trunc);
        let y = Series::var(ring, 2, 1, trunc);
        let s = x.checked_add(&y).and_then(|s| s.checked_add(&x.checked_mul(&y)?)).expect("same ring");
        FormalGroupLaw::new(s).expect("multiplicative law")
    }

    /// F(x, y) = exp(ℓ(x) + ℓ(y)) for a logarithm ℓ(t) = t + O(t²).
    pub fn from_logarithm(log: &Series) -> Result<FormalGroupLaw, FglError> {
        if !log.coefficient(&[1]).is_one() || !log.constant_term().is_zero() {
            return Err(FglError::Input("a logarithm must be t + O(t^2)".into()));
        }
        let exp = log.reverse().map_err(FglError::from_graded)?;
        let r = log.ring();
        let x = Series::var(r, 2, 0, log.trunc());
        let y = Series::var(r, 2, 1, log.trunc());
        let sum = log.substitute(&[x])?.checked_add(&log.substitute(&[y])?)?;
        FormalGroupLaw::by_construction(exp.compose(&sum)?)
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn ring(&self) -> &Ring {
        self.series.ring()
    }

    pub fn trunc(&self) -> u32 {
        self.series.trunc()
    }

    pub fn report(&self) -> &AxiomReport {
        &self.report
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Poly {
        self.series.coefficient(&[i, j])
    }

    /// F(a, b) for series a, b without constant term.
    pub fn apply(&self, a: &Series, b: &Series) -> Result<Series, FglError> {
        Ok(self.series.substitute(&[a.clone(), b.clone()])?)
    }

    /// The same law with coefficients moved along a ring map.
    pub fn map(&self, f: &crate::graded::RingMap) -> Result<FormalGroupLaw, FglError> {
        let s = self.series.map_coefficients(f)?;
        let mut report = self.report.clone();
        if report.associativity == Check::Pass {
            report.associativity = Check::ByConstruction;
        }
        report.unit = check_unit(&s);
        report.commutativity = check_commutativity(&s);
        Ok(FormalGroupLaw { series: s, report })
    }

    /// Reinterprets the coefficients in a ring with the same generators, e.g. ℚ → 𝔽_p when
    /// every coefficient is p-integral.
    pub fn cast(&self, ring: &Ring) -> Result<FormalGroupLaw, FglError> {
        let s = self.series.cast(ring)?;
        FormalGroupLaw::by_construction(s)
    }

    /// ℓ with ℓ(F(x,y)) = ℓ(x) + ℓ(y), from ℓ'(t) = 1/F_y(t, 0), over the rationalized ring.
    pub fn log_series(&self) -> Result<Series, FglError> {
        let d = self.ring().domain();
        if d.characteristic() != 0 {
            return Err(FglError::TorsionBase(d.label()));
        }
        let q = self.ring().rationalized()?;
        let f = self.series.cast(&q)?;
        let t = Series::var(&q, 1, 0, f.trunc());
        let z = Series::zero(&q, 1, f.trunc());
        let fy = f.derivative(1).substitute(&[t, z])?;
        let dl = fy.inverse().map_err(FglError::from_graded)?;
        Ok(dl.integrate()?)
    }

    /// F^f(x, y) = f(F(f⁻¹x, f⁻¹y)).
    pub fn transport(&self, f: &Automorphism) -> Result<FormalGroupLaw, FglError> {
        if !crate::graded::same_ring(f.series().ring(), self.ring()) {
            return Err(FglError::Graded(GradedError::RingMismatch));
        }
        let d = self.trunc().min(f.trunc());
        let inv = f.invert()?;
        let x = Series::var(self.ring(), 2, 0, d);
        let y = Series::var(self.ring(), 2, 1, d);
        let fx = inv.series().substitute(&[x])?;
        let fy = inv.series().substitute(&[y])?;
        let inner = self.series.truncated(d).substitute(&[fx, fy])?;
        FormalGroupLaw::by_construction(f.series().substitute(&[inner])?)
    }

    pub fn to_spec(&self) -> FglSpec {
        FglSpec {
            ring: RingSpec::from_ring(self.ring()),
            truncation: self.trunc(),
            coefficients: self
                .series
                .terms()
                .into_iter()
                .map(|(e, c)| CoefficientSpec { i: e[0], j: e[1], value: c.to_string() })
                .collect(),
        }
    }
}

/// Strict (or general) isomorphism action on formal group laws.
pub fn strict_iso_apply(f: &Automorphism, law: &FormalGroupLaw) -> Result<FormalGroupLaw, FglError> {
    law.transport(f)
}

/// The `fgl.json` document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglSpec {
    pub ring: RingSpec,
    pub truncation: u32,
    pub coefficients: Vec<CoefficientSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSpec {
    pub i: u32,
    pub j: u32,
    pub value: String,
}

impl FglSpec {
    /// The series described by the document, without checking the axioms.
    pub fn series(&self) -> Result<Series, FglError> {
        let ring = self.ring.build()?;
        let mut s = Series::zero(&ring, 2, self.truncation);
        for c in &self.coefficients {
            let v = Poly::parse(&ring, &c.value)?;
            let old = s.coefficient(&[c.i, c.j]);
            s.set(&[c.i, c.j], &old.checked_add(&v)?);
        }
        Ok(s)
    }
}

/// The ring with no generators over a domain.
pub fn scalars(domain: Domain) -> Ring {
    crate::graded::RingBuilder::new(domain).build().expect("no relations")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn validation_examples() {
        let q = scalars(Domain::Rational);
        assert!(FormalGroupLaw::additive(&q, 6).report().is_valid());
        assert!(FormalGroupLaw::multiplicative(&q, 6).report().is_valid());
        let x = Series::var(&q, 2, 0, 6);
        let y = Series::var(&q, 2, 1, 6);
        let bad = x.checked_add(&y).unwrap().checked_add(&x.pow(2)).unwrap();
        let report = validate(&bad);
        match &report.commutativity {
            Check::Fail { at } => assert_eq!(at.monomial, "x^2"),
            c => panic!("expected failure, got {c:?}"),
        }
        assert!(matches!(report.unit, Check::Fail { .. }));
        assert!(FormalGroupLaw::new(bad).is_err());
    }

    #[test]
    fn logarithms() {
        let q = scalars(Domain::Rational);
        let l = FormalGroupLaw::additive(&q, 6).log_series().unwrap();
        assert_eq!(l, Series::var(&q, 1, 0, 6));
        let l = FormalGroupLaw::multiplicative(&q, 4).log_series().unwrap();
        let c: Vec<_> = l.scalar_coefficients();
        assert_eq!(c[1..5], [rat(1, 1), rat(-1, 2), rat(1, 3), rat(-1, 4)]);
        let f3 = scalars(Domain::PrimeField(3));
        assert!(matches!(FormalGroupLaw::multiplicative(&f3, 4).log_series(), Err(FglError::TorsionBase(_))));
        // the logarithm linearizes the law
        let law = FormalGroupLaw::multiplicative(&q, 8);
        let l = law.log_series().unwrap();
        let x = Series::var(&q, 2, 0, 8);
        let y = Series::var(&q, 2, 1, 8);
        let lhs = l.substitute(&[law.series().clone()]).unwrap();
        let rhs = l.substitute(&[x]).unwrap().checked_add(&l.substitute(&[y]).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(FormalGroupLaw::from_logarithm(&l).unwrap().series(), law.series());
    }

    #[test]
    fn transport_examples() {
        let q = scalars(Domain::Rational);
        let add = FormalGroupLaw::additive(&q, 6);
        let id = Automorphism::identity(&q, 6);
        assert_eq!(strict_iso_apply(&id, &add).unwrap().series(), add.series());
        let f = Automorphism::new(Series::from_coefficients(&q, 6, &[Poly::zero(&q), Poly::one(&q), Poly::one(&q)])).unwrap();
        let g = strict_iso_apply(&f, &add).unwrap();
        assert_eq!(g.coefficient(1, 1).constant_term(), rat(2, 1));
        let back = strict_iso_apply(&f.invert().unwrap(), &g).unwrap();
        assert_eq!(back.series(), add.series());
        assert!(validate(g.series()).is_valid());
    }

    #[test]
    fn json_round_trip() {
        let q = scalars(Domain::Rational);
        let law = FormalGroupLaw::multiplicative(&q, 5);
        let text = serde_json::to_string(&law.to_spec()).unwrap();
        let spec: FglSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(&spec.series().unwrap(), law.series());
    }
}
