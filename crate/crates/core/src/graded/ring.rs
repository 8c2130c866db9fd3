use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{GradedError, Mono, Terms};
use crate::arith::Domain;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
}

/// A relation after classification into one of the supported shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `gen = value`, with `value` a normal-form polynomial in earlier generators.
    Eliminate { gen: usize, value: Terms },
    /// `gen^exponent = 0`.
    Power { gen: usize, exponent: i32 },
}

/// A finitely presented graded commutative ring over an exact coefficient domain.
///
/// Supported relations: a generator equal to a polynomial in earlier generators (or zero),
/// nilpotence `g^k = 0`, and a prime `p = 0` which switches the coefficients to 𝔽_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    domain: Domain,
    gens: Vec<Generator>,
    inverted: Vec<bool>,
    eliminated: Vec<Option<Terms>>,
    nilpotent: Vec<Option<i32>>,
    zero: bool,
    relation_text: Vec<String>,
}

pub type Ring = Arc<GradedRing>;

/// Collects generators and relations before classification.
#[derive(Clone, Debug)]
pub struct RingBuilder {
    domain: Domain,
    gens: Vec<Generator>,
    inverted: Vec<String>,
    relations: Vec<String>,
}

impl RingBuilder {
    pub fn new(domain: Domain) -> Self {
        RingBuilder { domain, gens: Vec::new(), inverted: Vec::new(), relations: Vec::new() }
    }

    pub fn generator(mut self, name: impl Into<String>, degree: i32) -> Self {
        self.gens.push(Generator { name: name.into(), degree });
        self
    }

    pub fn generators<S: Into<String>>(mut self, gens: impl IntoIterator<Item = (S, i32)>) -> Self {
        for (n, d) in gens {
            self.gens.push(Generator { name: n.into(), degree: d });
        }
        self
    }

    pub fn invert(mut self, name: impl Into<String>) -> Self {
        self.inverted.push(name.into());
        self
    }

    pub fn relation(mut self, text: impl Into<String>) -> Self {
        self.relations.push(text.into());
        self
    }

    pub fn build(self) -> Result<Ring, GradedError> {
        let mut seen = std::collections::HashSet::new();
        for g in &self.gens {
            if !super::parse::valid_name(&g.name) {
                return Err(GradedError::Parse(format!("invalid generator name {:?}", g.name)));
            }
            if !seen.insert(g.name.clone()) {
                return Err(GradedError::Parse(format!("duplicate generator {}", g.name)));
            }
        }
        let n = self.gens.len();
        let mut inverted = vec![false; n];
        for name in &self.inverted {
            let i = self
                .gens
                .iter()
                .position(|g| &g.name == name)
                .ok_or_else(|| GradedError::UnknownGenerator(name.clone()))?;
            inverted[i] = true;
        }
        let mut ring = GradedRing {
            domain: self.domain,
            gens: self.gens,
            inverted,
            eliminated: vec![None; n],
            nilpotent: vec![None; n],
            zero: false,
            relation_text: Vec::new(),
        };
        for text in &self.relations {
            let parsed = super::parse::parse_terms(&ring, text)?;
            ring = ring.with_relation(parsed, text)?;
        }
        Ok(Arc::new(ring))
    }
}

impl GradedRing {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn degree_of(&self, gen: usize) -> i32 {
        self.gens[gen].degree
    }

    pub fn is_inverted(&self, gen: usize) -> bool {
        self.inverted[gen]
    }

    pub fn inverted_names(&self) -> Vec<String> {
        (0..self.ngens()).filter(|&i| self.inverted[i]).map(|i| self.gens[i].name.clone()).collect()
    }

    pub fn has_inverted(&self) -> bool {
        self.inverted.iter().any(|&b| b)
    }

    pub fn is_eliminated(&self, gen: usize) -> bool {
        self.eliminated[gen].is_some()
    }

    pub fn nilpotence(&self, gen: usize) -> Option<i32> {
        self.nilpotent[gen]
    }

    /// True when `1 = 0` in this ring.
    pub fn is_zero_ring(&self) -> bool {
        self.zero
    }

    pub fn relation_text(&self) -> &[String] {
        &self.relation_text
    }

    /// Relations in classified form, for inspection.
    pub fn relations(&self) -> Vec<Relation> {
        let mut out = Vec::new();
        for i in 0..self.ngens() {
            if let Some(v) = &self.eliminated[i] {
                out.push(Relation::Eliminate { gen: i, value: v.clone() });
            }
            if let Some(k) = self.nilpotent[i] {
                out.push(Relation::Power { gen: i, exponent: k });
            }
        }
        out
    }

    pub fn one_mono(&self) -> Mono {
        vec![0; self.ngens()]
    }

    pub fn mono_degree(&self, m: &Mono) -> i32 {
        m.iter().zip(&self.gens).map(|(&e, g)| e * g.degree).sum()
    }

    pub fn has_relations(&self) -> bool {
        self.zero || self.eliminated.iter().any(Option::is_some) || self.nilpotent.iter().any(Option::is_some)
    }

    /// Whether all non-inverted generators have positive degree and nothing is inverted.
    pub fn is_connective(&self) -> bool {
        !self.has_inverted() && self.gens.iter().enumerate().all(|(i, g)| g.degree > 0 || self.eliminated[i].is_some())
    }

    /// Normal form of an arbitrary term map.
    pub fn normalize(&self, terms: Terms) -> Result<Terms, GradedError> {
        if self.zero {
            return Ok(Terms::new());
        }
        let mut out = Terms::new();
        for (m, c) in terms {
            if m.len() != self.ngens() {
                return Err(GradedError::Parse(format!("exponent vector of length {}", m.len())));
            }
            for (i, &e) in m.iter().enumerate() {
                if e < 0 && !self.inverted[i] {
                    return Err(GradedError::NegativeExponent(self.gens[i].name.clone()));
                }
            }
            let c = self.domain.normalize(c)?;
            if c.is_zero() {
                continue;
            }
            if m.iter().enumerate().any(|(i, &e)| e > 0 && self.eliminated[i].is_some()) {
                let expanded = self.expand_eliminated(&m, &c);
                add_terms(self.domain, &mut out, &expanded);
            } else if !self.killed_by_power(&m) {
                add_term(self.domain, &mut out, m, c);
            }
        }
        Ok(out)
    }

    fn expand_eliminated(&self, m: &Mono, c: &BigRational) -> Terms {
        let mut base = m.clone();
        let mut acc = Terms::new();
        let mut factors = Vec::new();
        for i in 0..self.ngens() {
            if let Some(v) = &self.eliminated[i] {
                if base[i] > 0 {
                    factors.push((v, base[i]));
                    base[i] = 0;
                }
            }
        }
        acc.insert(base, c.clone());
        for (v, e) in factors {
            for _ in 0..e {
                acc = self.mul_terms(&acc, v);
            }
        }
        acc
    }

    fn killed_by_power(&self, m: &Mono) -> bool {
        m.iter().zip(&self.nilpotent).any(|(&e, k)| k.is_some_and(|k| e >= k))
    }

    /// Product of two normal-form term maps.
    pub fn mul_terms(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        if self.zero {
            return out;
        }
        let d = self.domain;
        let has_power = self.nilpotent.iter().any(Option::is_some);
        for (ma, ca) in a {
            for (mb, cb) in b {
                let m: Mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                if has_power && self.killed_by_power(&m) {
                    continue;
                }
                let c = d.mul(ca, cb);
                add_term(d, &mut out, m, c);
            }
        }
        out
    }

    pub fn scale_terms(&self, a: &Terms, c: &BigRational) -> Terms {
        let d = self.domain;
        let c = d.reduce(c.clone());
        if c.is_zero() {
            return Terms::new();
        }
        a.iter()
            .filter_map(|(m, x)| {
                let y = d.mul(x, &c);
                (!y.is_zero()).then(|| (m.clone(), y))
            })
            .collect()
    }

    /// Whether a normal-form element is a unit: a single monomial in inverted generators
    /// with a unit coefficient.
    pub fn is_unit_terms(&self, a: &Terms) -> bool {
        if self.zero {
            return true;
        }
        if a.len() != 1 {
            return false;
        }
        let (m, c) = a.iter().next().expect("one term");
        self.domain.is_unit(c) && m.iter().enumerate().all(|(i, &e)| e == 0 || self.inverted[i])
    }

    pub fn inverse_terms(&self, a: &Terms) -> Option<Terms> {
        if !self.is_unit_terms(a) || self.zero {
            return None;
        }
        let (m, c) = a.iter().next().expect("one term");
        let inv = self.domain.inverse(c).ok()?;
        let mut out = Terms::new();
        out.insert(m.iter().map(|e| -e).collect(), inv);
        Some(out)
    }

    /// Adds a relation, classifying it into a supported shape.
    fn with_relation(mut self, r: Terms, text: &str) -> Result<GradedRing, GradedError> {
        let r = self.normalize(r)?;
        self.relation_text.push(text.to_string());
        if r.is_empty() || self.zero {
            return Ok(self);
        }
        let degs: std::collections::BTreeSet<i32> = r.keys().map(|m| self.mono_degree(m)).collect();
        if degs.len() > 1 {
            return Err(GradedError::Inhomogeneous(text.to_string()));
        }
        // constant relation
        if r.len() == 1 && r.keys().next().expect("one").iter().all(|&e| e == 0) {
            let c = r.values().next().expect("one").clone();
            return self.with_constant_relation(&c, text);
        }
        // unit monomial relation kills the ring
        if self.is_unit_terms(&r) {
            self.zero = true;
            return Ok(self);
        }
        let last = (0..self.ngens()).rev().find(|&i| r.keys().any(|m| m[i] != 0)).expect("nonconstant");
        if self.inverted[last] {
            // a single monomial unit·g^k with g inverted is a unit, handled above
            return Err(GradedError::UnsupportedRelation(text.to_string()));
        }
        let linear: Vec<_> = r.iter().filter(|(m, _)| m[last] != 0).collect();
        if linear.len() == 1 {
            let (m, c) = linear[0];
            let pure = m.iter().enumerate().all(|(i, &e)| if i == last { true } else { e == 0 });
            if pure && m[last] == 1 && self.domain.is_unit(c) {
                let inv = self.domain.inverse(c)?;
                let mut value = Terms::new();
                for (m2, c2) in r.iter().filter(|(m2, _)| m2[last] == 0) {
                    value.insert(m2.clone(), self.domain.neg(&self.domain.mul(c2, &inv)));
                }
                self.eliminated[last] = Some(value);
                return self.renormalize_relations();
            }
            if pure && m[last] > 1 && r.len() == 1 && self.domain.is_unit(c) {
                let k = m[last];
                self.nilpotent[last] = Some(self.nilpotent[last].map_or(k, |old| old.min(k)));
                return Ok(self);
            }
            // unit times an inverted monomial times g
            let other_inverted = m.iter().enumerate().all(|(i, &e)| i == last || e == 0 || self.inverted[i]);
            if other_inverted && m[last] == 1 && r.len() == 1 && self.domain.is_unit(c) {
                self.eliminated[last] = Some(Terms::new());
                return self.renormalize_relations();
            }
        }
        Err(GradedError::UnsupportedRelation(text.to_string()))
    }

    fn with_constant_relation(mut self, c: &BigRational, text: &str) -> Result<GradedRing, GradedError> {
        if self.domain.is_unit(c) {
            self.zero = true;
            return Ok(self);
        }
        let p = match self.domain {
            Domain::PLocal(p) => Some(p),
            Domain::Integer => {
                let n = c.numer().abs();
                num_traits::ToPrimitive::to_u64(&n).filter(|&n| crate::arith::is_prime(n))
            }
            _ => None,
        };
        let ok = match (self.domain, p) {
            (Domain::PLocal(_), Some(p)) => crate::arith::rational_valuation(c, p) == crate::arith::Valuation::Finite(1),
            (Domain::Integer, Some(_)) => true,
            _ => false,
        };
        match p {
            Some(p) if ok => {
                self.domain = Domain::PrimeField(p);
                self.renormalize_relations()
            }
            _ => Err(GradedError::UnsupportedRelation(text.to_string())),
        }
    }

    fn renormalize_relations(mut self) -> Result<GradedRing, GradedError> {
        // substitute later eliminations into earlier values until stable
        for _ in 0..self.ngens() + 1 {
            let mut changed = false;
            for i in 0..self.ngens() {
                if let Some(v) = self.eliminated[i].clone() {
                    let nv = self.normalize(v.clone())?;
                    if nv != v {
                        self.eliminated[i] = Some(nv);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(self)
    }

    /// Adds relations given as normal-form elements of this ring.
    pub fn quotient(self: &Ring, elements: &[Terms]) -> Result<Ring, GradedError> {
        let mut r = (**self).clone();
        for e in elements {
            let text = super::poly::format_terms(self, e);
            r = r.with_relation(e.clone(), &text)?;
        }
        Ok(Arc::new(r))
    }

    /// The same presentation over a different coefficient domain.
    pub fn with_domain(&self, domain: Domain) -> Result<Ring, GradedError> {
        let mut b = RingBuilder::new(domain);
        for g in &self.gens {
            b = b.generator(g.name.clone(), g.degree);
        }
        for i in self.inverted_names() {
            b = b.invert(i);
        }
        for r in &self.relation_text {
            b = b.relation(r.clone());
        }
        b.build()
    }

    /// Base change to ℚ; fails for rings of positive characteristic.
    pub fn rationalized(&self) -> Result<Ring, GradedError> {
        if self.domain.characteristic() != 0 {
            return Err(GradedError::TorsionBase(self.domain.label()));
        }
        self.with_domain(Domain::Rational)
    }

    /// A polynomial extension by fresh generators (appended after the existing ones).
    pub fn extend(&self, extra: &[Generator]) -> Result<Ring, GradedError> {
        let mut r = self.clone();
        for g in extra {
            if r.generator_index(&g.name).is_some() || !super::parse::valid_name(&g.name) {
                return Err(GradedError::Parse(format!("bad or duplicate generator {}", g.name)));
            }
            r.gens.push(g.clone());
            r.inverted.push(false);
            r.eliminated.push(None);
            r.nilpotent.push(None);
        }
        for v in r.eliminated.iter_mut().flatten() {
            *v = v.iter().map(|(m, c)| (pad(m, extra.len()), c.clone())).collect();
        }
        Ok(Arc::new(r))
    }

    /// Normal-form monomials of a given degree. Exponents of inverted generators range over
    /// `[-bound, bound]`; generators of degree ≤ 0 that are not inverted must be eliminated
    /// or nilpotent, otherwise the piece is infinite and an error is returned.
    pub fn monomial_basis(&self, degree: i32, bound: i32) -> Result<Vec<Mono>, GradedError> {
        if self.zero {
            return Ok(Vec::new());
        }
        let n = self.ngens();
        let mut ranges = Vec::with_capacity(n);
        for i in 0..n {
            if self.eliminated[i].is_some() {
                ranges.push((0, 0));
            } else if self.inverted[i] {
                ranges.push((-bound, bound));
            } else if let Some(k) = self.nilpotent[i] {
                ranges.push((0, k - 1));
            } else if self.gens[i].degree > 0 {
                ranges.push((0, i32::MAX));
            } else {
                return Err(GradedError::InfinitePiece(self.gens[i].name.clone()));
            }
        }
        // the remaining degree must be reachable by non-inverted gens, which are all positive
        let mut out = Vec::new();
        let mut cur = vec![0; n];
        // lower bound on the degree contributed by generators i.. (only inverted ones can be negative)
        let mut min_rest = vec![0i64; n + 1];
        let mut max_rest = vec![0i64; n + 1];
        for i in (0..n).rev() {
            let d = self.gens[i].degree as i64;
            let (lo, hi) = ranges[i];
            let (a, b) = if hi == i32::MAX { (0, i64::MAX / 4) } else { (d * lo as i64, d * hi as i64) };
            let (mn, mx) = (a.min(b), a.max(b));
            min_rest[i] = min_rest[i + 1] + mn;
            max_rest[i] = if mx >= i64::MAX / 4 || max_rest[i + 1] >= i64::MAX / 4 { i64::MAX / 4 } else { max_rest[i + 1] + mx };
        }
        fn rec(
            r: &GradedRing,
            i: usize,
            remaining: i64,
            ranges: &[(i32, i32)],
            min_rest: &[i64],
            max_rest: &[i64],
            cur: &mut Mono,
            out: &mut Vec<Mono>,
        ) {
            let n = r.ngens();
            if i == n {
                if remaining == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            if remaining < min_rest[i] || remaining > max_rest[i] {
                return;
            }
            let d = r.gens[i].degree as i64;
            let (lo, hi) = ranges[i];
            let hi = if hi == i32::MAX { (remaining - min_rest[i + 1]).max(0) / d.max(1) } else { hi as i64 };
            for e in lo as i64..=hi {
                cur[i] = e as i32;
                rec(r, i + 1, remaining - e * d, ranges, min_rest, max_rest, cur, out);
            }
            cur[i] = 0;
        }
        rec(self, 0, degree as i64, &ranges, &min_rest, &max_rest, &mut cur, &mut out);
        out.sort();
        Ok(out)
    }

    pub fn describe(&self) -> String {
        let mut s = self.domain.label();
        s.push('[');
        let names: Vec<String> = self
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| if self.inverted[i] { format!("{}^±1", g.name) } else { g.name.clone() })
            .collect();
        s.push_str(&names.join(", "));
        s.push(']');
        if !self.relation_text.is_empty() {
            s.push_str(&format!("/({})", self.relation_text.join(", ")));
        }
        s
    }
}

impl fmt::Display for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

pub(crate) fn pad(m: &Mono, extra: usize) -> Mono {
    let mut v = m.clone();
    v.extend(std::iter::repeat_n(0, extra));
    v
}

pub(crate) fn add_term(d: Domain, out: &mut Terms, m: Mono, c: BigRational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match out.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = d.add(o.get(), &c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

pub(crate) fn add_terms(d: Domain, out: &mut Terms, a: &Terms) {
    for (m, c) in a {
        add_term(d, out, m.clone(), c.clone());
    }
}
