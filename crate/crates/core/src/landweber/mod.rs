//! Landweber exactness, heights, geometric fibres and stratum labels for algebras over BP_*/I_n.

mod compare;
mod family;

pub use compare::{change_of_rings_compare, CompareReport, Ext0Check, NecessaryCheck, SideReport};
pub use family::{builtin, builtin_names, comparison_pairs, specialization_corpus};

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{kernel_basis, Domain, QMatrix};
use crate::fgl::{self, FormalGroupLaw, GeneratorKind, Height};
use crate::graded::{GradedError, Mono, Poly, Ring, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LandweberError {
    #[error("undecidable: {0}")]
    Undecidable(String),
    #[error("not Landweber exact: fails at v{k} ({witness})")]
    NotLandweberExact { k: u32, witness: String },
    #[error("unclassified algebra: {0}")]
    UnclassifiedAlgebra(String),
    #[error("{0}")]
    Input(String),
}

fn input(e: GradedError) -> LandweberError {
    LandweberError::Input(e.to_string())
}

/// Images of v_k beyond the listed ones: zero, or left open (as for φ = id on BP_*).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    #[default]
    Zero,
    Open,
}

/// The `algebra.json` document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: u64,
    pub n: u32,
    pub ring: RingSpec,
    #[serde(default)]
    pub v_images: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "is_zero_tail")]
    pub tail: Tail,
}

fn is_zero_tail(t: &Tail) -> bool {
    *t == Tail::Zero
}

/// A graded ring R with a structure map φ: BP_*/I_n → R.
#[derive(Clone, Debug)]
pub struct AlgebraOverBase {
    name: String,
    spec: AlgebraSpec,
    p: u64,
    n: u32,
    ring: Ring,
    images: BTreeMap<u32, Poly>,
    last: u32,
    tail: Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraHeight {
    /// −1 for the zero ring.
    Finite(i32),
    /// All later images vanish and the last quotient is visibly nonzero.
    Infinite,
    /// R/I_B R ≠ 0 for the largest B that could be checked.
    InfiniteWithinBound(u32),
}

impl AlgebraHeight {
    pub fn finite(&self) -> Option<i32> {
        match self {
            AlgebraHeight::Finite(h) => Some(*h),
            _ => None,
        }
    }
}

impl fmt::Display for AlgebraHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraHeight::Finite(h) => write!(f, "{h}"),
            AlgebraHeight::Infinite => f.write_str("infinity"),
            AlgebraHeight::InfiniteWithinBound(b) => write!(f, "infinity within bound {b}"),
        }
    }
}

impl Serialize for AlgebraHeight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            AlgebraHeight::Finite(h) => s.serialize_i32(*h),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityStep {
    pub k: u32,
    pub image: String,
    pub quotient: String,
    pub regular: bool,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessFailure {
    pub k: u32,
    pub witness: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessVerdict {
    pub exact: bool,
    /// Set when some step was only certified degreewise, or the image sequence is open-ended.
    pub within_bound: bool,
    pub degree_bound: i32,
    pub steps: Vec<RegularityStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<ExactnessFailure>,
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberHeights {
    pub heights: Vec<u32>,
    pub certificates: Vec<String>,
    /// Every height in {n, …, min(ht, B)} was certified.
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StratumTop {
    Finite(u32),
    Infinite,
    InfiniteWithinBound(u32),
}

impl Serialize for StratumTop {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            StratumTop::Finite(n) => s.serialize_u32(*n),
            StratumTop::Infinite => s.serialize_str("infinity"),
            StratumTop::InfiniteWithinBound(b) => s.serialize_str(&format!("infinity within bound {b}")),
        }
    }
}

/// The open substack Z^n ∩ U^{N+1} (or Z^n when N = ∞) an algebra's stack is identified with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumLabel {
    pub n: u32,
    #[serde(rename = "N")]
    pub top: StratumTop,
    pub label: String,
    /// Smallest N' with the classifying map factoring through Z^n ∩ U^{N'}, i.e. ht + 1.
    pub min_factorization_index: Option<u32>,
}

impl StratumLabel {
    pub fn new(n: u32, top: StratumTop) -> StratumLabel {
        let (label, min) = match top {
            StratumTop::Finite(big_n) => (format!("Z^{n} ∩ U^{}", big_n + 1), Some(big_n + 1)),
            _ => (format!("Z^{n}"), None),
        };
        StratumLabel { n, top, label, min_factorization_index: min }
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// A geometric point of R: values for the generators, landing in ℚ or 𝔽_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Point {
    pub values: BTreeMap<String, i64>,
    pub characteristic: u64,
}

impl Point {
    pub fn new(values: &[(&str, i64)], characteristic: u64) -> Point {
        Point { values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(), characteristic }
    }
}

fn in_ring(q: &Ring, f: &Poly) -> Result<Poly, LandweberError> {
    Poly::from_terms(q, f.terms().clone()).map_err(input)
}

fn quotient_one(q: &Ring, f: &Poly) -> Result<Ring, LandweberError> {
    let f = in_ring(q, f)?;
    if f.is_zero() || q.is_zero_ring() {
        return Ok(q.clone());
    }
    q.quotient(&[f.terms().clone()]).map_err(|e| match e {
        GradedError::UnsupportedRelation(r) | GradedError::Inhomogeneous(r) => {
            LandweberError::Undecidable(format!("quotient of {} by {r} is outside the supported presentations", q.describe()))
        }
        e => input(e),
    })
}

fn is_nilpotent_gen(q: &Ring, i: usize) -> bool {
    q.nilpotence(i).is_some() && !q.is_eliminated(i)
}

/// The part of f not involving nilpotent generators.
fn reduced_part(f: &Poly) -> Poly {
    let q = f.ring();
    let terms = f.terms().iter().filter(|(m, _)| m.iter().enumerate().all(|(i, &e)| e == 0 || !is_nilpotent_gen(q, i))).map(|(m, c)| (m.clone(), c.clone())).collect();
    Poly::from_terms(q, terms).expect("subset of a normal form")
}

struct Regularity {
    regular: bool,
    method: String,
    witness: Option<String>,
    bounded: bool,
}

fn poly_from_vector(q: &Ring, v: &[BigRational], basis: &[Mono]) -> Poly {
    let mut w = Poly::zero(q);
    for (c, m) in v.iter().zip(basis) {
        if !c.is_zero() {
            w = &w + &Poly::monomial(q, m.clone(), c.clone());
        }
    }
    w
}

/// First nonzero kernel vector of multiplication by f on the listed source degrees.
fn kernel_witness(f: &Poly, degrees: impl Iterator<Item = i32>, exp_bound: i32) -> Result<Option<Poly>, LandweberError> {
    let q = f.ring();
    let d = f.degree().ok_or_else(|| LandweberError::Input(format!("{f} is not homogeneous")))?;
    let domain = match q.domain() {
        Domain::Integer | Domain::PLocal(_) => Domain::Rational,
        dom => dom,
    };
    for t in degrees {
        let src = q.monomial_basis(t, exp_bound).map_err(|e| LandweberError::Undecidable(e.to_string()))?;
        if src.is_empty() {
            continue;
        }
        let dst = q.monomial_basis(t + d, exp_bound).map_err(|e| LandweberError::Undecidable(e.to_string()))?;
        let index: BTreeMap<&Mono, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = QMatrix::zeros(dst.len(), src.len());
        for (j, m) in src.iter().enumerate() {
            let prod = &Poly::monomial(q, m.clone(), BigRational::one()) * f;
            for (m2, c) in prod.terms() {
                let i = *index.get(m2).ok_or_else(|| LandweberError::Undecidable(format!("exponent window too small in degree {}", t + d)))?;
                mat[(i, j)] = c.clone();
            }
        }
        let kernel = kernel_basis(domain, &mat).map_err(|e| LandweberError::Input(e.to_string()))?;
        if let Some(v) = kernel.into_iter().next() {
            return Ok(Some(poly_from_vector(q, &v, &src)));
        }
    }
    Ok(None)
}

/// Whether f is a non-zero-divisor on its (nonzero) ring.
fn regularity(f: &Poly, degree_bound: i32) -> Result<Regularity, LandweberError> {
    let q = f.ring();
    if f.is_zero() {
        return Ok(Regularity { regular: false, method: "acts as 0 on a nonzero ring".into(), witness: Some("1".into()), bounded: false });
    }
    if f.is_unit() {
        return Ok(Regularity { regular: true, method: "unit".into(), witness: None, bounded: false });
    }
    let live: Vec<usize> = (0..q.ngens()).filter(|&i| !q.is_eliminated(i) && q.nilpotence(i).is_none()).collect();
    let inverted: Vec<usize> = live.iter().copied().filter(|&i| q.is_inverted(i)).collect();
    if inverted.is_empty() {
        let w = kernel_witness(f, 0..=degree_bound, 0)?;
        return Ok(match w {
            Some(w) => Regularity { regular: false, method: "multiplication has a kernel".into(), witness: Some(w.to_string()), bounded: false },
            None => Regularity { regular: true, method: format!("injective on graded pieces of degree 0..={degree_bound}"), witness: None, bounded: true },
        });
    }
    if inverted.len() == 1 && live.len() == 1 {
        // periodic: multiplication by the unit commutes with f, so one window of degrees suffices
        let period = q.degree_of(inverted[0]).abs();
        if period == 0 {
            return Err(LandweberError::Undecidable(format!("inverted generator of degree 0 in {}", q.describe())));
        }
        let nil: i32 = (0..q.ngens()).filter(|&i| is_nilpotent_gen(q, i)).map(|i| (q.nilpotence(i).unwrap_or(1) - 1) * q.degree_of(i).abs()).sum();
        let exp_bound = (2 * period + f.degree().unwrap_or(0).abs() + nil) / period + 1;
        let w = kernel_witness(f, 0..period, exp_bound)?;
        return Ok(match w {
            Some(w) => Regularity { regular: false, method: "multiplication has a kernel".into(), witness: Some(w.to_string()), bounded: false },
            None => Regularity { regular: true, method: format!("injective on the fundamental window of degrees 0..{period}"), witness: None, bounded: false },
        });
    }
    // a Laurent/polynomial ring over a domain tensored with truncated polynomial algebras:
    // f is regular exactly when its reduction mod the nilpotent generators is nonzero
    if !reduced_part(f).is_zero() {
        return Ok(Regularity { regular: true, method: "nonzero modulo the nilpotent generators over a domain".into(), witness: None, bounded: false });
    }
    let mut prev = Poly::one(q);
    let mut power = f.clone();
    while !power.is_zero() {
        prev = power.clone();
        power = &power * f;
    }
    Ok(Regularity { regular: false, method: "nilpotent".into(), witness: Some(prev.to_string()), bounded: false })
}

impl AlgebraOverBase {
    pub fn from_spec(spec: &AlgebraSpec) -> Result<AlgebraOverBase, LandweberError> {
        let p = spec.p;
        if !crate::arith::is_prime(p) {
            return Err(LandweberError::Input(format!("{p} is not prime")));
        }
        let mut rs = spec.ring.clone();
        if rs.p.is_none() && rs.scalars.contains('p') {
            rs.p = Some(p);
        }
        let ring = rs.build().map_err(|e| match e {
            GradedError::UnsupportedRelation(r) => LandweberError::Undecidable(format!("relation {r} is outside the supported presentations")),
            e => input(e),
        })?;
        if let Some(q) = ring.domain().prime() {
            if q != p {
                return Err(LandweberError::Input(format!("ring is {}-local but the base prime is {p}", q)));
            }
        }
        let mut images = BTreeMap::new();
        for (key, text) in &spec.v_images {
            let k: u32 = key.strip_prefix('v').and_then(|s| s.parse().ok()).ok_or_else(|| LandweberError::Input(format!("bad key {key:?} in v_images")))?;
            if k == 0 || k < spec.n {
                return Err(LandweberError::Input(format!("v{k} is not among v_n, v_(n+1), … for n = {}", spec.n)));
            }
            let f = Poly::parse(&ring, text).map_err(input)?;
            let expected = p.checked_pow(k).map(|x| x as i64 - 1).ok_or_else(|| LandweberError::Input(format!("v{k} degree overflows")))?;
            if !f.is_zero() && (!f.is_homogeneous() || f.degree().map(|d| d as i64) != Some(expected)) {
                return Err(LandweberError::Input(format!("image of v{k} = {f} must be homogeneous of degree {expected}")));
            }
            images.insert(k, f);
        }
        if spec.n >= 1 && !Poly::from_int(&ring, p as i64).is_zero() {
            return Err(LandweberError::Input(format!("{p} is nonzero in {}, so it is not an algebra over BP_*/I_{}", ring.describe(), spec.n)));
        }
        let last = images.iter().filter(|(_, f)| !f.is_zero()).map(|(k, _)| *k).max().unwrap_or(0).max(spec.n.saturating_sub(1));
        let last = if spec.tail == Tail::Open { images.keys().copied().max().unwrap_or(0).max(spec.n.saturating_sub(1)) } else { last };
        let name = spec.name.clone().unwrap_or_else(|| ring.describe());
        Ok(AlgebraOverBase { name, spec: spec.clone(), p, n: spec.n, ring, images, last, tail: spec.tail })
    }

    pub fn from_json(text: &str) -> Result<AlgebraOverBase, LandweberError> {
        let spec: AlgebraSpec = serde_json::from_str(text).map_err(|e| LandweberError::Input(format!("algebra.json: {e}")))?;
        AlgebraOverBase::from_spec(&spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn base_index(&self) -> u32 {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// φ(v_k), with v_0 = p; `None` past the listed images of an open tail.
    pub fn image(&self, k: u32) -> Option<Poly> {
        if k == 0 {
            return Some(Poly::from_int(&self.ring, self.p as i64));
        }
        if let Some(f) = self.images.get(&k) {
            return Some(f.clone());
        }
        if k < self.n || k <= self.last || self.tail == Tail::Zero {
            return Some(Poly::zero(&self.ring));
        }
        None
    }

    /// R/I_N R, or `None` if some image below N is unknown.
    pub fn reduction(&self, big_n: u32) -> Result<Option<Ring>, LandweberError> {
        let mut q = self.ring.clone();
        for k in 0..big_n {
            let Some(f) = self.image(k) else { return Ok(None) };
            q = quotient_one(&q, &f)?;
        }
        Ok(Some(q))
    }

    /// ht(φ) = max{N | R/I_N R ≠ 0}, searched through N ≤ bound.
    pub fn algebra_height(&self, bound: u32) -> Result<AlgebraHeight, LandweberError> {
        if self.ring.is_zero_ring() {
            return Ok(AlgebraHeight::Finite(-1));
        }
        let mut q = self.ring.clone();
        for big_n in 1..=bound {
            let Some(f) = self.image(big_n - 1) else {
                return Ok(AlgebraHeight::InfiniteWithinBound(big_n - 1));
            };
            q = quotient_one(&q, &f)?;
            if q.is_zero_ring() {
                return Ok(AlgebraHeight::Finite(big_n as i32 - 1));
            }
            if self.tail == Tail::Zero && big_n > self.last {
                return Ok(AlgebraHeight::Infinite);
            }
        }
        Ok(AlgebraHeight::InfiniteWithinBound(bound))
    }

    /// Checks that φ(v_n), φ(v_{n+1}), … is a regular sequence on R.
    pub fn is_landweber_exact(&self, degree_bound: i32) -> Result<ExactnessVerdict, LandweberError> {
        let mut q = self.ring.clone();
        let mut steps = Vec::new();
        let mut within_bound = false;
        let mut k = self.n;
        let verdict = |steps, within_bound, failure: Option<ExactnessFailure>, conclusion: String| ExactnessVerdict {
            exact: failure.is_none(),
            within_bound,
            degree_bound,
            steps,
            failure,
            conclusion,
        };
        loop {
            if q.is_zero_ring() {
                let c = if k == self.n { "R = 0".to_string() } else { format!("R/(φ(v{}), …, φ(v{})) = 0", self.n, k - 1) };
                return Ok(verdict(steps, within_bound, None, c));
            }
            let Some(f) = self.image(k) else {
                return Ok(verdict(steps, true, None, format!("regular through v{}; images past v{} are open", k - 1, self.last)));
            };
            let fq = in_ring(&q, &f)?;
            let reg = regularity(&fq, degree_bound)?;
            within_bound |= reg.bounded;
            let image = if k == 0 { self.p.to_string() } else { f.to_string() };
            steps.push(RegularityStep { k, image: image.clone(), quotient: q.describe(), regular: reg.regular, method: reg.method.clone() });
            if !reg.regular {
                let witness = reg.witness.unwrap_or_default();
                let reason = if fq.is_zero() && k == 0 {
                    format!("{}·1 = 0 on a nonzero ring", self.p)
                } else if fq.is_zero() {
                    format!("φ(v{k}) = 0 on the nonzero ring {}", q.describe())
                } else {
                    format!("φ(v{k}) = {image} annihilates {witness} in {}", q.describe())
                };
                return Ok(verdict(steps, within_bound, Some(ExactnessFailure { k, witness, reason: reason.clone() }), reason));
            }
            q = quotient_one(&q, &fq)?;
            k += 1;
        }
    }

    /// Heights j ∈ {n, …, min(ht, bound)} with R/I_j R ≠ 0 and φ(v_j) non-nilpotent on it.
    pub fn geometric_fiber_heights(&self, bound: u32, degree_bound: i32) -> Result<FiberHeights, LandweberError> {
        let ex = self.is_landweber_exact(degree_bound)?;
        if let Some(f) = ex.failure {
            return Err(LandweberError::NotLandweberExact { k: f.k, witness: f.reason });
        }
        let top = match self.algebra_height(bound)? {
            AlgebraHeight::Finite(h) if h < 0 => return Ok(FiberHeights { heights: Vec::new(), certificates: Vec::new(), complete: true }),
            AlgebraHeight::Finite(h) => h as u32,
            AlgebraHeight::Infinite => bound,
            AlgebraHeight::InfiniteWithinBound(b) => b.min(bound),
        };
        let mut q = self.ring.clone();
        for k in 0..self.n {
            q = quotient_one(&q, &self.image(k).expect("below n"))?;
        }
        let (mut heights, mut certificates) = (Vec::new(), Vec::new());
        let mut complete = true;
        for j in self.n..=top {
            let Some(f) = self.image(j) else { break };
            let fq = in_ring(&q, &f)?;
            let red = reduced_part(&fq);
            if q.is_zero_ring() || red.is_zero() {
                complete = false;
            } else {
                heights.push(j);
                let what = if j == 0 { self.p.to_string() } else { fq.to_string() };
                certificates.push(if fq.is_unit() {
                    format!("j = {j}: φ(v{j}) = {what} is a unit on {}", q.describe())
                } else {
                    format!("j = {j}: φ(v{j}) = {what} has nonzero reduced part {red} on {}", q.describe())
                });
            }
            q = quotient_one(&q, &fq)?;
        }
        Ok(FiberHeights { heights, certificates, complete })
    }

    /// The stratum label (n, ht); requires Landweber exactness.
    pub fn classify_stratum(&self, bound: u32, degree_bound: i32) -> Result<StratumLabel, LandweberError> {
        let ex = self.is_landweber_exact(degree_bound)?;
        if let Some(f) = ex.failure {
            return Err(LandweberError::NotLandweberExact { k: f.k, witness: f.reason });
        }
        let top = match self.algebra_height(bound)? {
            AlgebraHeight::Finite(h) if h < 0 => return Err(LandweberError::UnclassifiedAlgebra("the zero ring has height -1 and an empty stack".into())),
            AlgebraHeight::Finite(h) => StratumTop::Finite(h as u32),
            AlgebraHeight::Infinite => StratumTop::Infinite,
            AlgebraHeight::InfiniteWithinBound(b) => StratumTop::InfiniteWithinBound(b),
        };
        Ok(StratumLabel::new(self.n, top))
    }

    /// The same algebra with φ(v_k) inverted; φ(v_k) must be a monomial in the generators.
    pub fn localized(&self, k: u32) -> Result<AlgebraOverBase, LandweberError> {
        let f = self.image(k).ok_or_else(|| LandweberError::Input(format!("image of v{k} is open")))?;
        if f.len() != 1 {
            return Err(LandweberError::Undecidable(format!("inverting the non-monomial {f}")));
        }
        let mut spec = self.spec.clone();
        let m = f.terms().keys().next().expect("one term");
        for (i, &e) in m.iter().enumerate() {
            let g = &self.ring.generators()[i].name;
            if e > 0 && !spec.ring.inverted.contains(g) {
                spec.ring.inverted.push(g.clone());
            }
        }
        spec.name = Some(format!("{}[φ(v{k})^-1]", self.name));
        AlgebraOverBase::from_spec(&spec)
    }

    /// The height of the p-typical law classified by v_k ↦ φ(v_k)(point).
    pub fn fgl_height_at(&self, point: &Point, bound: u32) -> Result<Height, LandweberError> {
        let r = &self.ring;
        let ch = point.characteristic;
        if ch != 0 && ch != self.p {
            return Err(LandweberError::Input(format!("points live in characteristic 0 or {}", self.p)));
        }
        if ch == 0 && r.domain().characteristic() != 0 {
            return Err(LandweberError::Input(format!("{} has no characteristic-0 points", r.describe())));
        }
        if r.is_zero_ring() {
            return Err(LandweberError::Input("the zero ring has no points".into()));
        }
        let mut vals = Vec::with_capacity(r.ngens());
        for (i, g) in r.generators().iter().enumerate() {
            let v = *point.values.get(&g.name).unwrap_or(&0);
            let zero_mod = |x: i64| if ch == 0 { x == 0 } else { x.rem_euclid(ch as i64) == 0 };
            if r.is_inverted(i) && zero_mod(v) {
                return Err(LandweberError::Input(format!("inverted generator {} must be nonzero at the point", g.name)));
            }
            if r.nilpotence(i).is_some() && !r.is_eliminated(i) && !zero_mod(v) {
                return Err(LandweberError::Input(format!("nilpotent generator {} must vanish at the point", g.name)));
            }
            vals.push(BigRational::from_integer(v.into()));
        }
        let eval = |f: &Poly| -> BigRational {
            f.terms().iter().fold(BigRational::zero(), |acc, (m, c)| {
                let mut term = c.clone();
                for (x, &e) in vals.iter().zip(m) {
                    if e >= 0 {
                        term *= num_traits::pow(x.clone(), e as usize);
                    } else {
                        term /= num_traits::pow(x.clone(), (-e) as usize);
                    }
                }
                acc + term
            })
        };
        let q = fgl::scalars(Domain::Rational);
        let mut v = Vec::new();
        for k in 1..=bound {
            let f = self.image(k).ok_or_else(|| LandweberError::Input(format!("image of v{k} is open")))?;
            v.push(Poly::constant(&q, eval(&f)).map_err(input)?);
        }
        let trunc = self.p.pow(bound.max(1)) as u32;
        let log = fgl::p_typical_log(self.p, GeneratorKind::Hazewinkel, &v, &q, trunc);
        let fail = |e: fgl::FglError| LandweberError::Input(e.to_string());
        let mut law = FormalGroupLaw::from_logarithm(&log).map_err(fail)?;
        if ch != 0 {
            law = law.cast(&fgl::scalars(Domain::PrimeField(ch))).map_err(fail)?;
        }
        fgl::height(&law, self.p, bound).map_err(fail)
    }
}

#[cfg(test)]
mod tests;
