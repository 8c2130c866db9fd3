use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{HopfAlgebroid, HopfError};
use crate::arith::{domain_smith, QMatrix};
use crate::graded::{same_ring, Poly, Ring, RingMap, Terms};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub invariant: bool,
    /// η_R(g) − g for each generator g of the ideal.
    pub witnesses: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_generator: Option<String>,
    /// Normal form of η_R(g) − g modulo IΓ for the failing generator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
}

/// A map of Hopf algebroids (f0: A → A', f1: Γ → Γ').
#[derive(Debug)]
pub struct Morphism {
    pub f0: RingMap,
    pub f1: RingMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismReport {
    pub is_morphism: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Whether β: A' ⊗_A Γ ⊗_A A' → Γ' is bijective in every degree ≤ truncation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_iso: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failing_degree: Option<i32>,
}

fn nonzero_terms(ideal: &[Poly]) -> Vec<Terms> {
    ideal.iter().filter(|g| !g.is_zero()).map(|g| g.terms().clone()).collect()
}

impl HopfAlgebroid {
    /// Tests η_R(g) − η_L(g) ∈ IΓ for each generator g of I by reducing modulo IΓ.
    pub fn invariant_ideal_check(&self, ideal: &[Poly]) -> Result<InvariantCheck, HopfError> {
        for g in ideal {
            if !same_ring(g.ring(), self.base()) {
                return Err(HopfError::Graded(crate::graded::GradedError::RingMismatch));
            }
        }
        let lifted: Vec<Terms> = ideal.iter().filter(|g| !g.is_zero()).map(|g| self.eta_l(g).into_terms()).collect();
        let reduced = self.gamma().quotient(&lifted)?;
        let reduce = RingMap::by_name(self.gamma(), &reduced, false)?;
        let eta_r = self.eta_r_map();
        let mut witnesses = Vec::new();
        for g in ideal {
            let w = &eta_r.apply(g)? - &self.eta_l(g);
            witnesses.push((g.to_string(), w.to_string()));
            let r = reduce.apply(&w)?;
            if !r.is_zero() {
                return Ok(InvariantCheck { invariant: false, witnesses, failing_generator: Some(g.to_string()), residue: Some(r.to_string()) });
            }
        }
        Ok(InvariantCheck { invariant: true, witnesses, failing_generator: None, residue: None })
    }

    /// (A/I, Γ/IΓ) for an invariant ideal I.
    pub fn quotient(&self, ideal: &[Poly]) -> Result<HopfAlgebroid, HopfError> {
        let check = self.invariant_ideal_check(ideal)?;
        if !check.invariant {
            return Err(HopfError::NotInvariant {
                gen: check.failing_generator.unwrap_or_default(),
                residue: check.residue.unwrap_or_default(),
            });
        }
        let gens = nonzero_terms(ideal);
        if gens.is_empty() {
            return Ok(self.clone());
        }
        let a2 = self.base().quotient(&gens)?;
        let g2 = a2.extend(self.t_generators())?;
        let t2 = HopfAlgebroid::build_tensor(&a2, self.t_generators(), 2)?;
        let to_g = RingMap::by_name(self.gamma(), &g2, false)?;
        let to_a = RingMap::by_name(self.base(), &a2, false)?;
        let to_t2 = RingMap::by_name(&self.tensor_ring(2), &t2, false)?;
        let eta_r = (0..self.base().ngens()).map(|i| to_g.apply(self.eta_r(i))).collect::<Result<Vec<_>, _>>()?;
        let eps = (0..self.nt()).map(|j| to_a.apply(self.epsilon(j))).collect::<Result<Vec<_>, _>>()?;
        let delta = (0..self.nt()).map(|j| to_t2.apply(self.delta(j))).collect::<Result<Vec<_>, _>>()?;
        let anti = (0..self.nt()).map(|j| to_g.apply(self.antipode(j))).collect::<Result<Vec<_>, _>>()?;
        let label = ideal.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ");
        HopfAlgebroid::new(&format!("{} / ({label})", self.name()), &a2, self.t_generators(), self.trunc(), eta_r, eps, delta, anti)
    }

    /// The algebroid induced along f0: A → B, with the canonical morphism into it.
    ///
    /// Supported: f0 the identity, or B = A/J a quotient by generator names with J invariant,
    /// where B ⊗_A Γ ⊗_A B = Γ/JΓ. Localized targets are reported with their presentation.
    pub fn induced(&self, f0: &RingMap) -> Result<(HopfAlgebroid, Morphism), HopfError> {
        if !same_ring(f0.source(), self.base()) {
            return Err(HopfError::Graded(crate::graded::GradedError::RingMismatch));
        }
        let b = f0.target();
        if b.has_inverted() {
            return Err(HopfError::UnsupportedPresentation(self.localized_presentation(f0)));
        }
        let same_names = b.ngens() == self.base().ngens()
            && b.generators().iter().zip(self.base().generators()).all(|(x, y)| x.name == y.name && x.degree == y.degree);
        if !same_names {
            return Err(HopfError::UnsupportedPresentation(format!("{} is not a quotient of {} by generator names", b.describe(), self.base().describe())));
        }
        let by_name = RingMap::by_name(self.base(), b, false)?;
        for i in 0..self.base().ngens() {
            if by_name.image_of(i) != f0.image_of(i) {
                return Err(HopfError::UnsupportedPresentation(format!(
                    "f0 sends {} to {}, not to its namesake",
                    self.base().generators()[i].name,
                    f0.image_of(i)
                )));
            }
        }
        let known: Vec<&String> = self.base().relation_text().iter().collect();
        let kernel = b
            .relation_text()
            .iter()
            .filter(|r| !known.contains(r))
            .map(|r| Poly::parse(self.base(), r))
            .collect::<Result<Vec<_>, _>>()?;
        let h = self.quotient(&kernel)?;
        if !same_ring(h.base(), b) {
            return Err(HopfError::UnsupportedPresentation(format!("A/J = {} differs from the target {}", h.base().describe(), b.describe())));
        }
        let f1 = RingMap::by_name(self.gamma(), h.gamma(), false)?;
        let f0 = RingMap::by_name(self.base(), h.base(), false)?;
        Ok((h, Morphism { f0, f1 }))
    }

    fn localized_presentation(&self, f0: &RingMap) -> String {
        let b = f0.target();
        let ts = self.t_generators().iter().map(|g| g.name.clone()).collect::<Vec<_>>().join(", ");
        let mut inverted = Vec::new();
        let mut killed = Vec::new();
        let mut identified = Vec::new();
        for (i, g) in self.base().generators().iter().enumerate() {
            let img = f0.image_of(i);
            if img.is_zero() {
                killed.push(format!("eta_R({})", g.name));
            } else if img.is_unit() {
                inverted.push(format!("eta_R({})^(-1)", g.name));
                identified.push(format!("eta_R({}) unit", g.name));
            } else {
                identified.push(format!("eta_R({}) = {}'", g.name, img));
            }
        }
        let mut s = format!("{}[{ts}]", b.describe());
        if !inverted.is_empty() {
            s.push_str(&format!("[{}]", inverted.join(", ")));
        }
        if !killed.is_empty() {
            s.push_str(&format!("/({})", killed.join(", ")));
        }
        s
    }

    /// Checks that (f0, f1): self → target commutes with all structure maps, then whether β is
    /// an isomorphism degreewise.
    pub fn morphism_diagnostics(&self, target: &HopfAlgebroid, m: &Morphism) -> Result<MorphismReport, HopfError> {
        if !same_ring(m.f0.source(), self.base()) || !same_ring(m.f1.source(), self.gamma()) || !same_ring(m.f1.target(), target.gamma()) {
            return Err(HopfError::Graded(crate::graded::GradedError::RingMismatch));
        }
        let fail = |msg: String| Ok(MorphismReport { is_morphism: false, failure: Some(msg), beta_iso: None, first_failing_degree: None });
        let a = self.base();
        let eta_r2 = target.eta_r_map();
        for (i, g) in a.generators().iter().enumerate() {
            let x = Poly::gen(a, i);
            let f0x = m.f0.apply(&x)?;
            if m.f1.apply(&self.eta_l(&x))? != target.eta_l(&f0x) {
                return fail(format!("f1∘eta_L != eta_L∘f0 on {}", g.name));
            }
            if m.f1.apply(self.eta_r(i))? != eta_r2.apply(&f0x)? {
                return fail(format!("f1∘eta_R != eta_R∘f0 on {}", g.name));
            }
        }
        let eps2 = target.eps_map();
        let delta2 = target.delta_map();
        let anti2 = target.antipode_map();
        let anti = self.antipode_map();
        let t2 = target.tensor_ring(2);
        let f0_into_t2 = m.f0.then(&target.push(0, 2))?;
        let (e1, e2) = (target.embed(1, 2), target.embed(2, 2));
        let na = a.ngens();
        let f1t = |j: usize| m.f1.image_of(na + j);
        let tensor_f1 = self.tensor_map(2, &t2, &f0_into_t2, |k, j| {
            let e = if k == 1 { &e1 } else { &e2 };
            e.apply(&f1t(j)).expect("element of Gamma'")
        })?;
        for (j, g) in self.t_generators().iter().enumerate() {
            if eps2.apply(&f1t(j))? != m.f0.apply(self.epsilon(j))? {
                return fail(format!("epsilon∘f1 != f0∘epsilon on {}", g.name));
            }
            if delta2.apply(&f1t(j))? != tensor_f1.apply(self.delta(j))? {
                return fail(format!("Delta∘f1 != (f1⊗f1)∘Delta on {}", g.name));
            }
            if anti2.apply(&f1t(j))? != m.f1.apply(&anti.apply(&Poly::gen(self.gamma(), na + j))?)? {
                return fail(format!("c∘f1 != f1∘c on {}", g.name));
            }
        }
        // β on the induced presentation, degree by degree
        let (induced, _) = self.induced(&m.f0)?;
        if induced.gamma().has_inverted() || target.gamma().has_inverted() {
            return Err(HopfError::UnsupportedPresentation("degreewise comparison needs connective rings".into()));
        }
        let mut images: Vec<Poly> = (0..induced.base().ngens()).map(|i| target.eta_l(&Poly::gen(target.base(), i))).collect();
        if induced.base().ngens() != target.base().ngens() {
            return Err(HopfError::UnsupportedPresentation("induced base differs from the target base".into()));
        }
        images.extend((0..self.nt()).map(f1t));
        let beta = RingMap::new(induced.gamma(), target.gamma(), images, false)?;
        let domain = target.gamma().domain();
        let d_max = self.trunc().min(target.trunc());
        for d in 0..=d_max {
            let src = induced.gamma().monomial_basis(d, 0)?;
            let tgt = target.gamma().monomial_basis(d, 0)?;
            let iso = src.len() == tgt.len() && {
                let cols: Vec<Vec<BigRational>> = src
                    .iter()
                    .map(|mono| {
                        let img = beta.apply_terms(&Terms::from([(mono.clone(), BigRational::from_integer(1.into()))]))?;
                        Ok(tgt.iter().map(|t| img.get(t).cloned().unwrap_or_default()).collect())
                    })
                    .collect::<Result<_, HopfError>>()?;
                let mat = QMatrix::from_columns(tgt.len(), &cols);
                let s = domain_smith(domain, &mat, false).map_err(crate::graded::GradedError::from)?;
                s.rank() == tgt.len() && s.non_unit_divisors().is_empty()
            };
            if !iso {
                return Ok(MorphismReport { is_morphism: true, failure: None, beta_iso: Some(false), first_failing_degree: Some(d) });
            }
        }
        Ok(MorphismReport { is_morphism: true, failure: None, beta_iso: Some(true), first_failing_degree: None })
    }

    /// The identity morphism.
    pub fn identity_morphism(&self) -> Morphism {
        Morphism {
            f0: RingMap::by_name(self.base(), self.base(), false).expect("identity"),
            f1: RingMap::by_name(self.gamma(), self.gamma(), false).expect("identity"),
        }
    }

    /// The standard ideal I_n = (p, v_1, …, v_{n−1}) in a BP-like base with generators v1, v2, ….
    pub fn chromatic_ideal(&self, n: usize) -> Result<Vec<Poly>, HopfError> {
        let a = self.base();
        let p = a.domain().prime().ok_or_else(|| HopfError::Input("base has no distinguished prime".into()))?;
        let mut gens = Vec::new();
        if n >= 1 {
            gens.push(Poly::from_int(a, p as i64));
        }
        for k in 1..n {
            match a.generator_index(&format!("v{k}")) {
                Some(i) => gens.push(Poly::gen(a, i)),
                None => break,
            }
        }
        Ok(gens)
    }
}

/// Convenience for a ring map given by images of generators named in `assignment`.
pub fn ring_map(source: &Ring, target: &Ring, assignment: &[(&str, Poly)]) -> Result<RingMap, HopfError> {
    Ok(RingMap::from_assignment(source, target, assignment, true)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Domain;
    use crate::fgl::GeneratorKind;
    use crate::graded::RingBuilder;
    use crate::hopf::bp;

    #[test]
    fn invariant_ideals() {
        let h = bp(3, 16, GeneratorKind::Hazewinkel).unwrap();
        for n in 1..=3 {
            let i = h.chromatic_ideal(n).unwrap();
            assert!(h.invariant_ideal_check(&i).unwrap().invariant, "I_{n}");
        }
        let v1 = Poly::generator(h.base(), "v1").unwrap();
        let check = h.invariant_ideal_check(std::slice::from_ref(&v1)).unwrap();
        assert!(!check.invariant);
        assert_eq!(check.residue.as_deref(), Some("3*t1"));
        assert!(matches!(h.quotient(&[v1]), Err(HopfError::NotInvariant { .. })));
    }

    #[test]
    fn quotients_and_induced() {
        let h = bp(3, 16, GeneratorKind::Hazewinkel).unwrap();
        let i1 = h.chromatic_ideal(1).unwrap();
        let q = h.quotient(&i1).unwrap();
        assert_eq!(q.eta_r(0).to_string(), "v1");
        assert!(q.check_axioms().all_pass());
        let zero = h.quotient(&[Poly::zero(h.base())]).unwrap();
        assert_eq!(zero.base(), h.base());

        let i2 = h.chromatic_ideal(2).unwrap();
        let b = h.base().quotient(&i2.iter().map(|g| g.terms().clone()).collect::<Vec<_>>()).unwrap();
        let f0 = RingMap::by_name(h.base(), &b, false).unwrap();
        let (ind, morph) = h.induced(&f0).unwrap();
        let q2 = h.quotient(&i2).unwrap();
        assert_eq!(ind.gamma(), q2.gamma());
        for i in 0..ind.base().ngens() {
            assert_eq!(ind.eta_r(i), q2.eta_r(i));
        }
        let report = h.morphism_diagnostics(&ind, &morph).unwrap();
        assert_eq!(report.beta_iso, Some(true));
        let id = h.identity_morphism();
        assert_eq!(h.morphism_diagnostics(&h, &id).unwrap().beta_iso, Some(true));

        let loc = RingBuilder::new(Domain::PLocal(3)).generator("v1", 2).generator("v2", 8).invert("v1").relation("v2").build().unwrap();
        let f0 = RingMap::by_name(h.base(), &loc, false).unwrap();
        match h.induced(&f0) {
            Err(HopfError::UnsupportedPresentation(s)) => assert!(s.contains("eta_R(v1)^(-1)") && s.contains("eta_R(v2)"), "{s}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn collapsing_t1_is_not_a_morphism() {
        let h = bp(3, 16, GeneratorKind::Hazewinkel).unwrap();
        let g = h.gamma();
        let f1 = RingMap::from_assignment(g, g, &[("t1", Poly::zero(g))], false).unwrap();
        let f0 = RingMap::by_name(h.base(), h.base(), false).unwrap();
        let report = h.morphism_diagnostics(&h, &Morphism { f0, f1 }).unwrap();
        assert!(!report.is_morphism);
    }
}
