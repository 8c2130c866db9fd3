//! Graded comodules over a Hopf algebroid (A, Γ), their primitives and subcomodules, descent
//! data, locality, and Ext through the reduced cobar complex.
//!
//! A comodule is presented as M = ⊕_k (A/J_k)·g_k with each J_k an invariant ideal, so that
//! Γ ⊗_A M = ⊕_l (Γ/J_lΓ)·g_l. Coactions are stored in left form: ψ(g_k) = Σ_l γ_kl ⊗ g_l with
//! γ_kl ∈ Γ/J_lΓ, and ψ(a·g_k) = η_L(a)·ψ(g_k).

mod cobar;
mod corpus;
mod descent;
mod locality;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{kernel_basis, solve, ArithError, Domain, QMatrix};
use crate::fgl::GeneratorKind;
use crate::graded::{Generator, GeneratorSpec, GradedError, Mono, Poly, Ring, RingMap};
use crate::hopf::json::split_tensor;
use crate::hopf::{bp, mu_rational, AxiomOutcome, HopfAlgebroid, HopfError, HopfSpec};

pub use cobar::{cobar_complex, ext_groups, CobarComplex, ExtEntry, ExtTable};
pub use corpus::{corpus, CorpusEntry};
pub use descent::DescentDatum;
pub use locality::{locality_check, LocalityReport, SummandVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComodError {
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("invalid coaction: {0}")]
    InvalidCoaction(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("degree {degree} lies outside the window [{lo}, {hi}]")]
    WindowExceeded { degree: i32, lo: i32, hi: i32 },
    #[error("cobar complex needs a connective base: {0}")]
    NonConnectiveBase(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Input(String),
}

impl From<ArithError> for ComodError {
    fn from(e: ArithError) -> Self {
        ComodError::Graded(GradedError::Arith(e))
    }
}

/// An element of M: one coefficient in A/J_k per generator g_k.
pub type Element = Vec<Poly>;

/// A comodule presentation, checked for shape but not for the comodule axioms.
#[derive(Debug)]
pub struct GradedComodule {
    hopf: Arc<HopfAlgebroid>,
    gens: Vec<Generator>,
    relations: Vec<String>,
    ideals: Vec<Vec<Poly>>,
    parts: Vec<Arc<HopfAlgebroid>>,
    coaction: Vec<Vec<Poly>>,
    window: (i32, i32),
    parse_ring: Ring,
}

/// Built-in or inline Hopf algebroid reference in `comodule.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HopfRef {
    Builtin {
        builtin: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
        truncation: i32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<String>,
    },
    Inline(Box<HopfSpec>),
}

impl HopfRef {
    pub fn build(&self) -> Result<HopfAlgebroid, ComodError> {
        match self {
            HopfRef::Builtin { builtin, p, truncation, generators } => {
                let kind: GeneratorKind = match generators {
                    Some(g) => g.parse().map_err(|e: String| ComodError::Input(e))?,
                    None => GeneratorKind::Hazewinkel,
                };
                match builtin.as_str() {
                    "bp" => {
                        let p = p.ok_or_else(|| ComodError::Input("builtin \"bp\" needs \"p\"".into()))?;
                        Ok(bp(p, *truncation, kind)?)
                    }
                    "mu-rational" => Ok(mu_rational(*truncation)?),
                    other => Err(ComodError::Input(format!("unknown builtin Hopf algebroid {other:?}"))),
                }
            }
            HopfRef::Inline(spec) => Ok(spec.build()?),
        }
    }
}

/// The `comodule.json` document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComoduleSpec {
    pub hopf: HopfRef,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub coaction: BTreeMap<String, String>,
    pub window: [i32; 2],
}

impl ComoduleSpec {
    pub fn build(&self) -> Result<GradedComodule, ComodError> {
        let hopf = Arc::new(self.hopf.build()?);
        let gens: Vec<Generator> = self.generators.iter().map(|g| Generator { name: g.name.clone(), degree: g.degree }).collect();
        let coaction = gens
            .iter()
            .map(|g| self.coaction.get(&g.name).cloned().ok_or_else(|| ComodError::Input(format!("coaction missing for {}", g.name))))
            .collect::<Result<Vec<_>, _>>()?;
        GradedComodule::new(hopf, &gens, &self.relations, &coaction, (self.window[0], self.window[1]))
    }

    pub fn from_comodule(m: &GradedComodule, hopf: HopfRef) -> ComoduleSpec {
        ComoduleSpec {
            hopf,
            generators: m.gens.iter().map(|g| GeneratorSpec { name: g.name.clone(), degree: g.degree }).collect(),
            relations: m.relations.clone(),
            coaction: m.gens.iter().enumerate().map(|(k, g)| (g.name.clone(), m.coaction_text(k))).collect(),
            window: [m.window.0, m.window.1],
        }
    }
}

/// Output of `validate_comodule`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComoduleReport {
    pub window: [i32; 2],
    pub checks: Vec<AxiomOutcome>,
}

impl ComoduleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveDegree {
    pub t: i32,
    pub rank: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSubcomodule {
    /// A-module generators of the subcomodule, as elements of M.
    pub generators: Vec<String>,
    /// (t, rank of the degree-t piece) over the window.
    pub ranks: Vec<(i32, usize)>,
    pub contains_input: bool,
    pub closed_under_coaction: bool,
}

fn ideal_key(ideal: &[Poly]) -> Vec<String> {
    let mut k: Vec<String> = ideal.iter().filter(|g| !g.is_zero()).map(|g| g.to_string()).collect();
    k.sort();
    k
}

fn failure(axiom: &str, gen: &Generator, lhs: String, rhs: String) -> AxiomOutcome {
    AxiomOutcome { axiom: axiom.into(), passed: false, generator: Some(gen.name.clone()), degree: Some(gen.degree), lhs: Some(lhs), rhs: Some(rhs) }
}

fn success(axiom: &str) -> AxiomOutcome {
    AxiomOutcome { axiom: axiom.into(), passed: true, generator: None, degree: None, lhs: None, rhs: None }
}

impl GradedComodule {
    /// Parses relations (each a multiple a·g of a single generator) and coaction texts
    /// `Σ (γ)⊗(m)` with γ ∈ Γ and m ∈ M.
    pub fn new(hopf: Arc<HopfAlgebroid>, gens: &[Generator], relations: &[String], coaction: &[String], window: (i32, i32)) -> Result<GradedComodule, ComodError> {
        if window.0 > window.1 {
            return Err(ComodError::Input(format!("empty window [{}, {}]", window.0, window.1)));
        }
        if coaction.len() != gens.len() {
            return Err(ComodError::Input("one coaction per generator is required".into()));
        }
        for g in gens {
            if g.degree < window.0 || g.degree > window.1 {
                return Err(ComodError::WindowExceeded { degree: g.degree, lo: window.0, hi: window.1 });
            }
        }
        let a = hopf.base().clone();
        let parse_ring = a.extend(gens).map_err(|e| ComodError::Input(format!("generator names: {e}")))?;
        let na = a.ngens();
        let g_idx: Vec<usize> = (na..na + gens.len()).collect();
        let to_a = RingMap::by_name(&parse_ring, &a, true)?;
        let mut ideals: Vec<Vec<Poly>> = vec![Vec::new(); gens.len()];
        for r in relations {
            let p = Poly::parse(&parse_ring, r)?;
            let split = p.split(&g_idx);
            let mut target = None;
            for key in split.keys() {
                let k = match key.iter().position(|&e| e == 1) {
                    Some(k) if key.iter().sum::<i32>() == 1 => k,
                    _ => return Err(ComodError::Input(format!("relation {r:?} is not a multiple of one generator"))),
                };
                if target.is_some_and(|t| t != k) {
                    return Err(ComodError::Input(format!("relation {r:?} mixes generators")));
                }
                target = Some(k);
            }
            if let Some(k) = target {
                let (_, cof) = split.into_iter().next().expect("one key");
                ideals[k].push(to_a.apply(&cof)?);
            }
        }
        let mut cache: BTreeMap<Vec<String>, Arc<HopfAlgebroid>> = BTreeMap::new();
        let mut parts = Vec::with_capacity(gens.len());
        for ideal in &ideals {
            let key = ideal_key(ideal);
            let part = match cache.get(&key) {
                Some(h) => h.clone(),
                None => {
                    let h = if key.is_empty() { hopf.clone() } else { Arc::new(hopf.quotient(ideal)?) };
                    cache.insert(key, h.clone());
                    h
                }
            };
            parts.push(part);
        }
        if let Some(first) = parts.first() {
            let d = first.base().domain();
            if parts.iter().any(|h| h.base().domain() != d) {
                return Err(ComodError::Unsupported("summands with different coefficient domains".into()));
            }
        }
        let mut m = GradedComodule { hopf, gens: gens.to_vec(), relations: relations.to_vec(), ideals, parts, coaction: Vec::new(), window, parse_ring };
        let coaction = coaction.iter().map(|text| m.parse_coaction(text)).collect::<Result<Vec<_>, _>>()?;
        m.coaction = coaction;
        Ok(m)
    }

    /// The comodule (A/J)·u concentrated on one generator of degree `shift`, with ψ(u) = 1⊗u.
    pub fn cyclic(hopf: Arc<HopfAlgebroid>, ideal: &[Poly], shift: i32, window: (i32, i32)) -> Result<GradedComodule, ComodError> {
        let rel: Vec<String> = ideal.iter().filter(|g| !g.is_zero()).map(|g| format!("({g})*u")).collect();
        GradedComodule::new(hopf, &[Generator { name: "u".into(), degree: shift }], &rel, &["(1)⊗(u)".into()], window)
    }

    /// A itself, with ψ = η_L (left form of 1⊗a = η_R(a)).
    pub fn trivial(hopf: Arc<HopfAlgebroid>, window: (i32, i32)) -> Result<GradedComodule, ComodError> {
        GradedComodule::cyclic(hopf, &[], 0, window)
    }

    /// Same presentation with the coaction of one generator replaced.
    pub fn with_coaction(&self, gen: &str, text: &str) -> Result<GradedComodule, ComodError> {
        let k = self.generator_index(gen)?;
        let mut texts: Vec<String> = (0..self.gens.len()).map(|i| self.coaction_text(i)).collect();
        texts[k] = text.to_string();
        GradedComodule::new(self.hopf.clone(), &self.gens, &self.relations, &texts, self.window)
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebroid> {
        &self.hopf
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn relations(&self) -> &[String] {
        &self.relations
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn domain(&self) -> Domain {
        self.parts.first().map(|h| h.base().domain()).unwrap_or(self.hopf.base().domain())
    }

    /// The Hopf algebroid (A/J_k, Γ/J_kΓ) carrying generator k.
    pub fn part(&self, k: usize) -> &Arc<HopfAlgebroid> {
        &self.parts[k]
    }

    /// γ_kl ∈ Γ/J_lΓ.
    pub fn coaction_coefficient(&self, k: usize, l: usize) -> &Poly {
        &self.coaction[k][l]
    }

    pub fn ideal(&self, k: usize) -> &[Poly] {
        &self.ideals[k]
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|h| h.base().is_zero_ring())
    }

    fn generator_index(&self, name: &str) -> Result<usize, ComodError> {
        self.gens.iter().position(|g| g.name == name).ok_or_else(|| ComodError::Input(format!("unknown comodule generator {name}")))
    }

    pub fn coaction_text(&self, k: usize) -> String {
        let parts: Vec<String> = self.coaction[k]
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_zero())
            .map(|(l, g)| format!("({g})⊗({})", self.gens[l].name))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Parses `Σ c_k·g_k` with c_k ∈ A into coefficients in A/J_k.
    pub fn parse_element(&self, text: &str) -> Result<Element, ComodError> {
        let p = Poly::parse(&self.parse_ring, text)?;
        let na = self.hopf.base().ngens();
        let g_idx: Vec<usize> = (na..na + self.gens.len()).collect();
        let mut out: Element = self.parts.iter().map(|h| Poly::zero(h.base())).collect();
        for (key, cof) in p.split(&g_idx) {
            let k = match key.iter().position(|&e| e == 1) {
                Some(k) if key.iter().sum::<i32>() == 1 => k,
                _ => return Err(ComodError::Input(format!("{text:?} is not A-linear in the comodule generators"))),
            };
            let to_part = RingMap::by_name(&self.parse_ring, self.parts[k].base(), true)?;
            out[k] = &out[k] + &to_part.apply(&cof)?;
        }
        Ok(out)
    }

    pub fn format_element(&self, x: &[Poly]) -> String {
        let parts: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| if c.is_one() { self.gens[k].name.clone() } else { format!("({c})*{}", self.gens[k].name) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    fn parse_coaction(&self, text: &str) -> Result<Vec<Poly>, ComodError> {
        let mut out: Vec<Poly> = self.parts.iter().map(|h| Poly::zero(h.gamma())).collect();
        for (c, x, y) in split_tensor(text).map_err(ComodError::Input)? {
            let x = Poly::parse(self.hopf.gamma(), &x)?;
            let y = self.parse_element(&y)?;
            for (l, a) in y.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let h = &self.parts[l];
                let xl = RingMap::by_name(self.hopf.gamma(), h.gamma(), false)?.apply(&x)?;
                let term = (&xl * &h.eta_r_map().apply(a)?).scale(&c);
                out[l] = &out[l] + &term;
            }
        }
        Ok(out)
    }

    /// Map A/J_k → Γ/J_lΓ sending generators to their namesakes (left unit).
    fn base_to_gamma(&self, k: usize, l: usize) -> Result<RingMap, ComodError> {
        Ok(RingMap::by_name(self.parts[k].base(), self.parts[l].gamma(), false)?)
    }

    /// ψ(x) in left form, one component per generator.
    pub fn psi(&self, x: &[Poly]) -> Result<Vec<Poly>, ComodError> {
        let mut out: Vec<Poly> = self.parts.iter().map(|h| Poly::zero(h.gamma())).collect();
        for (k, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for l in 0..self.gens.len() {
                let gamma = &self.coaction[k][l];
                if gamma.is_zero() {
                    continue;
                }
                let al = self.base_to_gamma(k, l)?.apply(a)?;
                out[l] = &out[l] + &(&al * gamma);
            }
        }
        Ok(out)
    }

    /// 1⊗x in left form: η_R applied to each coefficient.
    pub fn unit_tensor(&self, x: &[Poly]) -> Result<Vec<Poly>, ComodError> {
        x.iter().enumerate().map(|(k, a)| Ok(self.parts[k].eta_r_map().apply(a)?)).collect()
    }

    /// Basis of M_t: pairs (generator, monomial of A/J_k in degree t − deg g_k).
    pub fn basis(&self, t: i32) -> Result<Vec<(usize, Mono)>, ComodError> {
        let mut out = Vec::new();
        for (k, g) in self.gens.iter().enumerate() {
            let a = self.parts[k].base();
            if a.has_inverted() {
                return Err(ComodError::NonConnectiveBase(a.describe()));
            }
            for m in a.monomial_basis(t - g.degree, 0)? {
                out.push((k, m));
            }
        }
        Ok(out)
    }

    pub fn basis_element(&self, k: usize, m: &Mono) -> Element {
        let mut x: Element = self.parts.iter().map(|h| Poly::zero(h.base())).collect();
        x[k] = Poly::monomial(self.parts[k].base(), m.clone(), BigRational::one());
        x
    }

    /// Checks the counit and coassociativity laws and compatibility with the module relations.
    pub fn validate(&self) -> Result<ComoduleReport, ComodError> {
        let n = self.gens.len();
        let mut counit = success("(epsilon⊗id)∘psi = id");
        'outer: for k in 0..n {
            for l in 0..n {
                let h = &self.parts[l];
                let lhs = h.eps_map().apply(&self.coaction[k][l])?;
                let rhs = if k == l { Poly::one(h.base()) } else { Poly::zero(h.base()) };
                if lhs != rhs {
                    counit = failure("(epsilon⊗id)∘psi = id", &self.gens[k], format!("{lhs} on {}", self.gens[l].name), format!("{rhs} on {}", self.gens[l].name));
                    break 'outer;
                }
            }
        }
        let mut coassoc = success("(Delta⊗id)∘psi = (id⊗psi)∘psi");
        'outer2: for k in 0..n {
            let mut rhs: Vec<Poly> = self.parts.iter().map(|h| Poly::zero(&h.tensor_ring(2))).collect();
            for l in 0..n {
                let gkl = &self.coaction[k][l];
                if gkl.is_zero() {
                    continue;
                }
                for m in 0..n {
                    let glm = &self.coaction[l][m];
                    if glm.is_zero() {
                        continue;
                    }
                    let hm = &self.parts[m];
                    let first = hm.embed(1, 2).apply(&RingMap::by_name(self.parts[l].gamma(), hm.gamma(), false)?.apply(gkl)?)?;
                    let second = hm.embed(2, 2).apply(glm)?;
                    rhs[m] = &rhs[m] + &(&first * &second);
                }
            }
            for m in 0..n {
                let hm = &self.parts[m];
                let lhs = hm.delta_map().apply(&self.coaction[k][m])?;
                if lhs != rhs[m] {
                    coassoc = failure(
                        "(Delta⊗id)∘psi = (id⊗psi)∘psi",
                        &self.gens[k],
                        format!("{} on {}", crate::hopf::format_tensor(hm, &lhs), self.gens[m].name),
                        format!("{} on {}", crate::hopf::format_tensor(hm, &rhs[m]), self.gens[m].name),
                    );
                    break 'outer2;
                }
            }
        }
        let mut rel = success("psi respects module relations");
        'outer3: for k in 0..n {
            for a in &self.ideals[k] {
                for l in 0..n {
                    let al = RingMap::by_name(self.hopf.base(), self.parts[l].gamma(), false)?.apply(a)?;
                    let prod = &al * &self.coaction[k][l];
                    if !prod.is_zero() {
                        rel = failure("psi respects module relations", &self.gens[k], format!("psi(({a})*{}) has {prod} on {}", self.gens[k].name, self.gens[l].name), "0".into());
                        break 'outer3;
                    }
                }
            }
        }
        Ok(ComoduleReport { window: [self.window.0, self.window.1], checks: vec![counit, coassoc, rel] })
    }

    /// Basis of {m ∈ M_t : ψ(m) = 1⊗m} for each t in the range, by an exact kernel of ψ − (1⊗−).
    pub fn primitives(&self, range: (i32, i32)) -> Result<Vec<PrimitiveDegree>, ComodError> {
        if range.0 < self.window.0 || range.1 > self.window.1 {
            let bad = if range.0 < self.window.0 { range.0 } else { range.1 };
            return Err(ComodError::WindowExceeded { degree: bad, lo: self.window.0, hi: self.window.1 });
        }
        let domain = self.domain();
        let mut out = Vec::new();
        for t in range.0..=range.1 {
            let basis = self.basis(t)?;
            let mut rows: BTreeMap<(usize, Mono), usize> = BTreeMap::new();
            let mut columns: Vec<Vec<((usize, Mono), BigRational)>> = Vec::new();
            for (k, m) in &basis {
                let x = self.basis_element(*k, m);
                let psi = self.psi(&x)?;
                let unit = self.unit_tensor(&x)?;
                let mut col = Vec::new();
                for l in 0..self.gens.len() {
                    let diff = &psi[l] - &unit[l];
                    for (mono, c) in diff.terms() {
                        let key = (l, mono.clone());
                        let n = rows.len();
                        rows.entry(key.clone()).or_insert(n);
                        col.push((key, c.clone()));
                    }
                }
                columns.push(col);
            }
            let mut mat = QMatrix::zeros(rows.len(), basis.len());
            for (j, col) in columns.into_iter().enumerate() {
                for (key, c) in col {
                    mat[(rows[&key], j)] = c;
                }
            }
            let kernel = kernel_basis(domain, &mat)?;
            let basis_text = kernel
                .iter()
                .map(|v| {
                    let mut x: Element = self.parts.iter().map(|h| Poly::zero(h.base())).collect();
                    for (c, (k, m)) in v.iter().zip(&basis) {
                        if !c.is_zero() {
                            x[*k] = &x[*k] + &Poly::monomial(self.parts[*k].base(), m.clone(), c.clone());
                        }
                    }
                    self.format_element(&x)
                })
                .collect();
            out.push(PrimitiveDegree { t, rank: kernel.len(), basis: basis_text });
        }
        Ok(out)
    }

    fn element_degree(&self, x: &[Poly]) -> Result<Option<i32>, ComodError> {
        let mut deg = None;
        for (k, a) in x.iter().enumerate() {
            for d in a.degrees() {
                let d = d + self.gens[k].degree;
                if deg.is_some_and(|e| e != d) {
                    return Err(ComodError::Input(format!("{} is not homogeneous", self.format_element(x))));
                }
                deg = Some(d);
            }
        }
        Ok(deg)
    }

    /// Coordinates m_e in ψ(x) = Σ_e t^e ⊗ m_e with respect to the right A-basis of Γ given
    /// by the t-monomials.
    fn right_coordinates(&self, x: &[Poly], d: i32) -> Result<Vec<Element>, ComodError> {
        let domain = self.domain();
        let psi = self.psi(x)?;
        let t_ring = crate::graded::RingBuilder::new(domain).generators(self.hopf.t_generators().iter().map(|g| (g.name.clone(), g.degree))).build()?;
        // right basis: t^e ⊗ b with b a basis element of M in degree d − |e|
        let mut cells: Vec<(Mono, usize, Mono)> = Vec::new();
        for j in 0..=(d - self.window.0.min(0)).max(0) {
            let mb = self.basis(d - j)?;
            if mb.is_empty() {
                continue;
            }
            for e in t_ring.monomial_basis(j, 0)? {
                for (k, m) in &mb {
                    cells.push((e.clone(), *k, m.clone()));
                }
            }
        }
        let mut rows: BTreeMap<(usize, Mono), usize> = BTreeMap::new();
        let mut columns = Vec::new();
        for (e, k, m) in &cells {
            let h = &self.parts[*k];
            let na = h.base().ngens();
            let mut te = vec![0; na];
            te.extend(e.iter().copied());
            let left = &Poly::monomial(h.gamma(), te, BigRational::one()) * &h.eta_r_map().apply(&Poly::monomial(h.base(), m.clone(), BigRational::one()))?;
            let mut col = Vec::new();
            for (mono, c) in left.terms() {
                let key = (*k, mono.clone());
                let n = rows.len();
                rows.entry(key.clone()).or_insert(n);
                col.push((key, c.clone()));
            }
            columns.push(col);
        }
        let mut target = Vec::new();
        for (l, p) in psi.iter().enumerate() {
            for (mono, c) in p.terms() {
                let key = (l, mono.clone());
                let n = rows.len();
                rows.entry(key.clone()).or_insert(n);
                target.push((key, c.clone()));
            }
        }
        let mut mat = QMatrix::zeros(rows.len(), cells.len());
        for (j, col) in columns.into_iter().enumerate() {
            for (key, c) in col {
                mat[(rows[&key], j)] = c;
            }
        }
        let mut b = vec![BigRational::zero(); rows.len()];
        for (key, c) in target {
            b[rows[&key]] = c;
        }
        let sol = solve(domain, &mat, &b)?.ok_or_else(|| ComodError::InvalidCoaction("coaction has no right-form expansion".into()))?;
        let mut coords: BTreeMap<Mono, Element> = BTreeMap::new();
        for (c, (e, k, m)) in sol.iter().zip(&cells) {
            if c.is_zero() {
                continue;
            }
            let entry = coords.entry(e.clone()).or_insert_with(|| self.parts.iter().map(|h| Poly::zero(h.base())).collect());
            entry[*k] = &entry[*k] + &Poly::monomial(self.parts[*k].base(), m.clone(), c.clone());
        }
        Ok(coords.into_values().filter(|x| x.iter().any(|p| !p.is_zero())).collect())
    }

    /// Degree-t span of A·gens inside M_t, as coordinate vectors over the basis of M_t.
    fn span_in_degree(&self, gens: &[(Element, i32)], t: i32) -> Result<(Vec<(usize, Mono)>, Vec<Vec<BigRational>>), ComodError> {
        let basis = self.basis(t)?;
        let index: BTreeMap<(usize, Mono), usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let a = self.hopf.base();
        let to_parts = self.parts.iter().map(|h| RingMap::by_name(a, h.base(), false)).collect::<Result<Vec<_>, _>>()?;
        let mut vecs = Vec::new();
        for (x, d) in gens {
            if *d > t {
                continue;
            }
            for mono in a.monomial_basis(t - d, 0)? {
                let mu = Poly::monomial(a, mono, BigRational::one());
                let mut v = vec![BigRational::zero(); basis.len()];
                let mut any = false;
                for (k, xk) in x.iter().enumerate() {
                    if xk.is_zero() {
                        continue;
                    }
                    for (m, coef) in (&to_parts[k].apply(&mu)? * xk).terms() {
                        v[index[&(k, m.clone())]] = coef.clone();
                        any = true;
                    }
                }
                if any {
                    vecs.push(v);
                }
            }
        }
        Ok((basis, vecs))
    }

    fn in_span(&self, gens: &[(Element, i32)], x: &[Poly], t: i32) -> Result<bool, ComodError> {
        let (basis, vecs) = self.span_in_degree(gens, t)?;
        let index: BTreeMap<(usize, Mono), usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let mut b = vec![BigRational::zero(); basis.len()];
        for (k, a) in x.iter().enumerate() {
            for (m, c) in a.terms() {
                b[index[&(k, m.clone())]] = c.clone();
            }
        }
        if b.iter().all(|c| c.is_zero()) {
            return Ok(true);
        }
        if vecs.is_empty() {
            return Ok(false);
        }
        let mat = QMatrix::from_columns(basis.len(), &vecs);
        Ok(solve(self.domain(), &mat, &b)?.is_some())
    }

    /// The subcomodule generated by finitely many homogeneous elements: the A-span of the
    /// coordinates of ψ(s) in the right basis of Γ, with closure under ψ re-checked.
    pub fn finite_subcomodule(&self, elements: &[String]) -> Result<FiniteSubcomodule, ComodError> {
        let mut gens: Vec<(Element, i32)> = Vec::new();
        let mut inputs = Vec::new();
        for text in elements {
            let x = self.parse_element(text)?;
            let Some(d) = self.element_degree(&x)? else { continue };
            if d < self.window.0 || d > self.window.1 {
                return Err(ComodError::WindowExceeded { degree: d, lo: self.window.0, hi: self.window.1 });
            }
            for c in self.right_coordinates(&x, d)? {
                let cd = self.element_degree(&c)?.expect("nonzero coordinate");
                if !self.in_span(&gens, &c, cd)? {
                    gens.push((c, cd));
                }
            }
            inputs.push((x, d));
        }
        let mut closed = true;
        let mut i = 0;
        while i < gens.len() {
            let (x, d) = gens[i].clone();
            for c in self.right_coordinates(&x, d)? {
                let cd = self.element_degree(&c)?.expect("nonzero coordinate");
                if !self.in_span(&gens, &c, cd)? {
                    closed = false;
                    gens.push((c, cd));
                }
            }
            i += 1;
        }
        let mut contains = true;
        for (x, d) in &inputs {
            contains &= self.in_span(&gens, x, *d)?;
        }
        let mut ranks = Vec::new();
        for t in self.window.0..=self.window.1 {
            let (basis, vecs) = self.span_in_degree(&gens, t)?;
            let r = if vecs.is_empty() { 0 } else { crate::arith::rank(self.domain(), &QMatrix::from_columns(basis.len(), &vecs)) };
            ranks.push((t, r));
        }
        Ok(FiniteSubcomodule {
            generators: gens.iter().map(|(x, _)| self.format_element(x)).collect(),
            ranks,
            contains_input: contains,
            closed_under_coaction: closed || gens.is_empty(),
        })
    }

    /// Left-form coaction components as printable text, for reports.
    pub fn describe(&self) -> String {
        let mut s = format!("comodule over {} in window [{}, {}]\n", self.hopf.name(), self.window.0, self.window.1);
        for (k, g) in self.gens.iter().enumerate() {
            let rel = if self.ideals[k].is_empty() { String::new() } else { format!(" with ({})·{} = 0", self.ideals[k].iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "), g.name) };
            s.push_str(&format!("{} in degree {}{rel}: psi = {}\n", g.name, g.degree, self.coaction_text(k)));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp3(trunc: i32) -> Arc<HopfAlgebroid> {
        Arc::new(bp(3, trunc, GeneratorKind::Hazewinkel).unwrap())
    }

    #[test]
    fn validation_and_fault_injection() {
        let h = bp3(12);
        let a = GradedComodule::trivial(h.clone(), (0, 12)).unwrap();
        assert!(a.validate().unwrap().all_pass());
        let i1 = h.chromatic_ideal(1).unwrap();
        let m = GradedComodule::cyclic(h.clone(), &i1, 0, (0, 12)).unwrap();
        assert!(m.validate().unwrap().all_pass());
        let broken = m.with_coaction("u", "(t1)⊗(u)").unwrap();
        let report = broken.validate().unwrap();
        let counit = &report.checks[0];
        assert!(!counit.passed);
        assert_eq!(counit.generator.as_deref(), Some("u"));

        let two_cell = GradedComodule::new(
            h.clone(),
            &[Generator { name: "g".into(), degree: 0 }, Generator { name: "h".into(), degree: 2 }],
            &["3*g".into(), "3*h".into()],
            &["(1)⊗(g)".into(), "(1)⊗(h) + (t1)⊗(g)".into()],
            (0, 12),
        )
        .unwrap();
        assert!(two_cell.validate().unwrap().all_pass());
        let bad = two_cell.with_coaction("h", "(1)⊗(h) + (t1^2)⊗(g)").unwrap();
        assert!(!bad.validate().unwrap().checks[1].passed);
    }

    #[test]
    fn primitive_examples() {
        let h = bp3(12);
        let a = GradedComodule::trivial(h.clone(), (0, 12)).unwrap();
        let p = a.primitives((0, 4)).unwrap();
        assert_eq!(p[0].rank, 1);
        assert_eq!(p[0].basis, vec!["u".to_string()]);
        assert_eq!(p[2].rank, 0, "v1 is not primitive in BP_*");
        let i1 = h.chromatic_ideal(1).unwrap();
        let m = GradedComodule::cyclic(h.clone(), &i1, 0, (0, 12)).unwrap();
        let p = m.primitives((2, 2)).unwrap();
        assert_eq!(p[0].basis, vec!["(v1)*u".to_string()]);
    }

    #[test]
    fn subcomodules() {
        let h = bp3(12);
        let a = GradedComodule::trivial(h.clone(), (0, 12)).unwrap();
        let s = a.finite_subcomodule(&["v1*u".into()]).unwrap();
        assert!(s.contains_input && s.closed_under_coaction);
        // ψ(v1) = t^0 ⊗ v1 − t1 ⊗ 3 in the right basis: the span is the ideal (3, v1)
        assert_eq!(s.generators.len(), 2);
        assert!(s.generators.contains(&"3*u".to_string()) || s.generators.contains(&"(-3)*u".to_string()), "{:?}", s.generators);
        assert_eq!(s.ranks[0], (0, 1));
        let unit = a.finite_subcomodule(&["u".into()]).unwrap();
        assert_eq!(unit.generators, vec!["u".to_string()]);
        let empty = a.finite_subcomodule(&[]).unwrap();
        assert!(empty.generators.is_empty() && empty.ranks.iter().all(|(_, r)| *r == 0));
        assert!(matches!(a.finite_subcomodule(&["v2^2*u".into()]), Err(ComodError::WindowExceeded { .. })));
    }

    #[test]
    fn json_round_trip() {
        let spec_text = r#"{"hopf": {"builtin": "bp", "p": 3, "truncation": 10},
            "generators": [{"name": "u", "degree": 0}], "relations": ["3*u"],
            "coaction": {"u": "(1)⊗(u)"}, "window": [0, 10]}"#;
        let spec: ComoduleSpec = serde_json::from_str(spec_text).unwrap();
        let m = spec.build().unwrap();
        let back = ComoduleSpec::from_comodule(&m, spec.hopf.clone());
        assert_eq!(back, spec);
        assert!(m.validate().unwrap().all_pass());
    }
}
