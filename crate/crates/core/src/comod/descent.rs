use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{ComodError, GradedComodule};
use crate::arith::{domain_smith, QMatrix};
use crate::graded::{Generator, Mono, Poly, RingMap};
use crate::hopf::HopfAlgebroid;

/// A module with an isomorphism α: M ⊗_A Γ → Γ ⊗_A M between its two base changes, given by
/// α(g ⊗ 1) on generators and extended Γ-linearly.
#[derive(Debug, Clone)]
pub struct DescentDatum {
    pub hopf: Arc<HopfAlgebroid>,
    pub generators: Vec<Generator>,
    pub relations: Vec<String>,
    /// α(g_k ⊗ 1) as a tensor expression `Σ (γ)⊗(m)`.
    pub alpha: Vec<String>,
    pub window: (i32, i32),
}

/// Presentation data compared by the round trip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<(String, i32)>,
    pub relations: Vec<String>,
    pub structure: Vec<String>,
    pub window: [i32; 2],
}

impl GradedComodule {
    pub fn presentation(&self) -> Presentation {
        Presentation {
            generators: self.generators().iter().map(|g| (g.name.clone(), g.degree)).collect(),
            relations: self.relations().to_vec(),
            structure: (0..self.generators().len()).map(|k| self.coaction_text(k)).collect(),
            window: [self.window().0, self.window().1],
        }
    }

    /// Whether the Γ-linear extension of the coaction, M ⊗_A Γ → Γ ⊗_A M, is bijective in
    /// degree t; returns the first failing degree in the window, if any.
    pub fn alpha_failure(&self) -> Result<Option<i32>, ComodError> {
        let n = self.generators().len();
        for t in self.window().0..=self.window().1 {
            let mut cells: Vec<(usize, Mono)> = Vec::new();
            for (k, g) in self.generators().iter().enumerate() {
                let gamma = self.part(k).gamma();
                if gamma.has_inverted() {
                    return Err(ComodError::NonConnectiveBase(gamma.describe()));
                }
                for m in gamma.monomial_basis(t - g.degree, 0)? {
                    cells.push((k, m));
                }
            }
            if cells.is_empty() {
                continue;
            }
            let index: std::collections::BTreeMap<&(usize, Mono), usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
            let mut mat = QMatrix::zeros(cells.len(), cells.len());
            for (col, (k, mono)) in cells.iter().enumerate() {
                let x = Poly::monomial(self.part(*k).gamma(), mono.clone(), BigRational::one());
                for l in 0..n {
                    let g = self.coaction_coefficient(*k, l);
                    if g.is_zero() {
                        continue;
                    }
                    let xl = RingMap::by_name(self.part(*k).gamma(), self.part(l).gamma(), false)?.apply(&x)?;
                    for (m2, c) in (&xl * g).terms() {
                        let row = index
                            .get(&(l, m2.clone()))
                            .ok_or_else(|| ComodError::InvalidCocycle(format!("alpha is not homogeneous in degree {t}")))?;
                        mat[(*row, col)] = c.clone();
                    }
                }
            }
            let s = domain_smith(self.domain(), &mat, false)?;
            if s.rank() < cells.len() || !s.non_unit_divisors().is_empty() {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }
}

impl DescentDatum {
    /// The descent datum of a valid comodule: α(g ⊗ 1) = ψ(g).
    pub fn from_comodule(m: &GradedComodule) -> Result<DescentDatum, ComodError> {
        let report = m.validate()?;
        if let Some(f) = report.checks.iter().find(|c| !c.passed) {
            return Err(ComodError::InvalidCoaction(format!("{} fails at {}", f.axiom, f.generator.clone().unwrap_or_default())));
        }
        Ok(DescentDatum {
            hopf: m.hopf().clone(),
            generators: m.generators().to_vec(),
            relations: m.relations().to_vec(),
            alpha: (0..m.generators().len()).map(|k| m.coaction_text(k)).collect(),
            window: m.window(),
        })
    }

    /// The comodule with ψ(g) = α(g ⊗ 1), after checking the cocycle condition and that α is
    /// invertible in every degree of the window.
    pub fn to_comodule(&self) -> Result<GradedComodule, ComodError> {
        let m = GradedComodule::new(self.hopf.clone(), &self.generators, &self.relations, &self.alpha, self.window)?;
        let report = m.validate()?;
        for c in &report.checks {
            if !c.passed && c.axiom != "(epsilon⊗id)∘psi = id" {
                return Err(ComodError::InvalidCocycle(format!("{} fails at {}", c.axiom, c.generator.clone().unwrap_or_default())));
            }
        }
        if let Some(t) = m.alpha_failure()? {
            return Err(ComodError::InvalidCocycle(format!("alpha is not invertible in degree {t}")));
        }
        if !report.all_pass() {
            return Err(ComodError::InvalidCocycle("alpha does not restrict to the identity along the diagonal".into()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::GeneratorKind;
    use crate::hopf::bp;

    #[test]
    fn descent_round_trip() {
        let h = Arc::new(bp(3, 10, GeneratorKind::Hazewinkel).unwrap());
        let trivial = GradedComodule::trivial(h.clone(), (0, 10)).unwrap();
        let d = DescentDatum::from_comodule(&trivial).unwrap();
        assert_eq!(d.alpha, vec!["(1)⊗(u)".to_string()]);
        assert_eq!(d.to_comodule().unwrap().presentation(), trivial.presentation());

        let m = GradedComodule::cyclic(h.clone(), &h.chromatic_ideal(1).unwrap(), 0, (0, 10)).unwrap();
        let back = DescentDatum::from_comodule(&m).unwrap().to_comodule().unwrap();
        assert_eq!(back.presentation(), m.presentation());
        assert_eq!(m.alpha_failure().unwrap(), None);

        let mut bad = DescentDatum::from_comodule(&m).unwrap();
        bad.alpha = vec!["(1)⊗(u) + (t1^2)⊗(u)".into()];
        assert!(matches!(bad.to_comodule(), Err(ComodError::InvalidCocycle(_))));
        let broken = m.with_coaction("u", "(t1)⊗(u)").unwrap();
        assert!(matches!(DescentDatum::from_comodule(&broken), Err(ComodError::InvalidCoaction(_))));
    }
}
