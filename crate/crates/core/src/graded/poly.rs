use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::{add_term, add_terms};
use super::{GradedError, Mono, Ring, Terms};

/// An element of a graded ring, kept in normal form.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Ring,
    terms: Terms,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Poly {
    pub fn zero(ring: &Ring) -> Poly {
        Poly { ring: ring.clone(), terms: Terms::new() }
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, BigRational::one()).expect("1 lies in every domain")
    }

    pub fn constant(ring: &Ring, c: BigRational) -> Result<Poly, GradedError> {
        let mut t = Terms::new();
        t.insert(ring.one_mono(), c);
        Poly::from_terms(ring, t)
    }

    pub fn from_int(ring: &Ring, n: i64) -> Poly {
        Poly::constant(ring, BigRational::from_integer(n.into())).expect("integers lie in every domain")
    }

    pub fn generator(ring: &Ring, name: &str) -> Result<Poly, GradedError> {
        let i = ring.generator_index(name).ok_or_else(|| GradedError::UnknownGenerator(name.to_string()))?;
        Ok(Poly::gen(ring, i))
    }

    pub fn gen(ring: &Ring, i: usize) -> Poly {
        let mut m = ring.one_mono();
        m[i] = 1;
        Poly::monomial(ring, m, BigRational::one())
    }

    pub fn monomial(ring: &Ring, m: Mono, c: BigRational) -> Poly {
        let mut t = Terms::new();
        t.insert(m, c);
        Poly::from_terms(ring, t).expect("valid monomial")
    }

    /// Normalizes an arbitrary term map.
    pub fn from_terms(ring: &Ring, terms: Terms) -> Result<Poly, GradedError> {
        Ok(Poly { terms: ring.normalize(terms)?, ring: ring.clone() })
    }

    /// Wraps a term map already known to be in normal form.
    pub(crate) fn from_normal(ring: &Ring, terms: Terms) -> Poly {
        Poly { ring: ring.clone(), terms }
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<Poly, GradedError> {
        super::parse_poly(ring, text)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&self.ring.one_mono()).is_some_and(One::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Mono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&self.ring.one_mono())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    /// Set of degrees of the terms.
    pub fn degrees(&self) -> BTreeSet<i32> {
        self.terms.keys().map(|m| self.ring.mono_degree(m)).collect()
    }

    /// The degree if the element is nonzero and homogeneous.
    pub fn degree(&self) -> Option<i32> {
        let d = self.degrees();
        (d.len() == 1).then(|| *d.iter().next().expect("one"))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn homogeneous_part(&self, degree: i32) -> Poly {
        let terms = self.terms.iter().filter(|(m, _)| self.ring.mono_degree(m) == degree).map(|(m, c)| (m.clone(), c.clone())).collect();
        Poly::from_normal(&self.ring, terms)
    }

    fn check(&self, other: &Poly) -> Result<(), GradedError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(GradedError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, GradedError> {
        self.check(other)?;
        let mut t = self.terms.clone();
        add_terms(self.ring.domain(), &mut t, &other.terms);
        Ok(Poly::from_normal(&self.ring, t))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, GradedError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, GradedError> {
        self.check(other)?;
        Ok(Poly::from_normal(&self.ring, self.ring.mul_terms(&self.terms, &other.terms)))
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::from_normal(&self.ring, self.ring.scale_terms(&self.terms, c))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow_i(&self, e: i32) -> Result<Poly, GradedError> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            let inv = self.inverse().ok_or(GradedError::LeadingCoefficientNotUnit)?;
            Ok(inv.pow(e.unsigned_abs()))
        }
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit_terms(&self.terms)
    }

    pub fn inverse(&self) -> Option<Poly> {
        self.ring.inverse_terms(&self.terms).map(|t| Poly::from_normal(&self.ring, t))
    }

    /// Largest exponent of a generator across the terms.
    pub fn max_exponent(&self, gen: usize) -> i32 {
        self.terms.keys().map(|m| m[gen]).max().unwrap_or(0)
    }

    pub fn involves(&self, gen: usize) -> bool {
        self.terms.keys().any(|m| m[gen] != 0)
    }

    /// Coefficients with respect to the selected generators: the map sends each exponent
    /// pattern on `gens` to the cofactor polynomial in the remaining generators.
    pub fn split(&self, gens: &[usize]) -> std::collections::BTreeMap<Vec<i32>, Poly> {
        let mut out: std::collections::BTreeMap<Vec<i32>, Terms> = std::collections::BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<i32> = gens.iter().map(|&g| m[g]).collect();
            let mut rest = m.clone();
            for &g in gens {
                rest[g] = 0;
            }
            add_term(self.ring.domain(), out.entry(key).or_default(), rest, c.clone());
        }
        out.into_iter().map(|(k, t)| (k, Poly::from_normal(&self.ring, t))).collect()
    }

    /// Reinterprets the coefficients in another ring with the same generator list.
    pub fn cast(&self, ring: &Ring) -> Result<Poly, GradedError> {
        if ring.ngens() != self.ring.ngens() {
            return Err(GradedError::RingMismatch);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), ring.domain().convert(self.ring.domain(), c)?)))
            .collect::<Result<Terms, GradedError>>()?;
        Poly::from_terms(ring, terms)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, other: &Poly) -> Poly {
        self.checked_add(other).expect("same ring")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, other: &Poly) -> Poly {
        self.checked_sub(other).expect("same ring")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, other: &Poly) -> Poly {
        self.checked_mul(other).expect("same ring")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let d = self.ring.domain();
        Poly::from_normal(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), d.neg(c))).collect())
    }
}

impl std::ops::Add for Poly {
    type Output = Poly;
    fn add(self, other: Poly) -> Poly {
        &self + &other
    }
}

impl std::ops::Sub for Poly {
    type Output = Poly;
    fn sub(self, other: Poly) -> Poly {
        &self - &other
    }
}

impl std::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, other: Poly) -> Poly {
        &self * &other
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn format_coefficient(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Renders terms in the `coef*gen^exp` grammar, highest degree first.
pub fn format_terms(ring: &super::GradedRing, terms: &Terms) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut items: Vec<(&Mono, &BigRational)> = terms.iter().collect();
    items.sort_by(|a, b| ring.mono_degree(b.0).cmp(&ring.mono_degree(a.0)).then_with(|| b.0.cmp(a.0)));
    let mut s = String::new();
    for (k, (m, c)) in items.into_iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = &ring.generators()[i].name;
            factors.push(if e == 1 { name.clone() } else if e < 0 { format!("{name}^({e})") } else { format!("{name}^{e}") });
        }
        if factors.is_empty() {
            s.push_str(&format_coefficient(&abs));
        } else if abs.is_one() {
            s.push_str(&factors.join("*"));
        } else {
            s.push_str(&format_coefficient(&abs));
            s.push('*');
            s.push_str(&factors.join("*"));
        }
    }
    s
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(&self.ring, &self.terms))
    }
}

/// A ring homomorphism given by the images of the source generators.
pub struct RingMap {
    source: Ring,
    target: Ring,
    images: Vec<Terms>,
    inverses: Vec<Option<Terms>>,
    cache: Mutex<HashMap<(usize, i32), Arc<Terms>>>,
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingMap").field("source", &self.source.describe()).field("target", &self.target.describe()).finish()
    }
}

impl Clone for RingMap {
    fn clone(&self) -> Self {
        RingMap {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.clone(),
            inverses: self.inverses.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl RingMap {
    /// Builds the map from one image per source generator. With `check_degrees`, every
    /// nonzero image must be homogeneous of the generator's degree.
    pub fn new(source: &Ring, target: &Ring, images: Vec<Poly>, check_degrees: bool) -> Result<RingMap, GradedError> {
        if images.len() != source.ngens() {
            return Err(GradedError::Parse(format!("{} images for {} generators", images.len(), source.ngens())));
        }
        let mut inverses = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            if !same_ring(img.ring(), target) {
                return Err(GradedError::RingMismatch);
            }
            let g = &source.generators()[i];
            if check_degrees && !img.is_zero() && img.degree() != Some(g.degree) {
                let found = img.degrees().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
                return Err(GradedError::DegreeMismatch { gen: g.name.clone(), expected: g.degree, found });
            }
            if source.is_inverted(i) {
                let inv = img.inverse().ok_or_else(|| GradedError::ImageOfInvertedNotUnit(g.name.clone()))?;
                inverses.push(Some(inv.into_terms()));
            } else {
                inverses.push(None);
            }
        }
        Ok(RingMap {
            source: source.clone(),
            target: target.clone(),
            images: images.into_iter().map(Poly::into_terms).collect(),
            inverses,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Builds the map from a partial assignment; unassigned generators go to the
    /// target generator of the same name.
    pub fn from_assignment(source: &Ring, target: &Ring, assignment: &[(&str, Poly)], check_degrees: bool) -> Result<RingMap, GradedError> {
        let mut images = Vec::with_capacity(source.ngens());
        for g in source.generators() {
            match assignment.iter().find(|(n, _)| *n == g.name) {
                Some((_, p)) => images.push(p.clone()),
                None => images.push(Poly::generator(target, &g.name)?),
            }
        }
        for (n, _) in assignment {
            if source.generator_index(n).is_none() {
                return Err(GradedError::UnknownGenerator(n.to_string()));
            }
        }
        RingMap::new(source, target, images, check_degrees)
    }

    /// The map sending each generator to the same-named generator (or to zero when the
    /// target lacks it and `drop_missing` is set).
    pub fn by_name(source: &Ring, target: &Ring, drop_missing: bool) -> Result<RingMap, GradedError> {
        let mut images = Vec::with_capacity(source.ngens());
        for g in source.generators() {
            match Poly::generator(target, &g.name) {
                Ok(p) => images.push(p),
                Err(e) => {
                    if drop_missing {
                        images.push(Poly::zero(target));
                    } else {
                        return Err(e);
                    }
                }
            }
        }
        RingMap::new(source, target, images, false)
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn image_of(&self, gen: usize) -> Poly {
        Poly::from_normal(&self.target, self.images[gen].clone())
    }

    fn power(&self, gen: usize, e: i32) -> Arc<Terms> {
        if let Some(t) = self.cache.lock().expect("cache lock").get(&(gen, e)) {
            return t.clone();
        }
        let base = if e > 0 { &self.images[gen] } else { self.inverses[gen].as_ref().expect("inverted generator") };
        let t = if e.abs() == 1 {
            base.clone()
        } else {
            let half = self.power(gen, e - e.signum());
            self.target.mul_terms(&half, base)
        };
        let t = Arc::new(t);
        self.cache.lock().expect("cache lock").insert((gen, e), t.clone());
        t
    }

    pub fn apply_terms(&self, terms: &Terms) -> Result<Terms, GradedError> {
        let td = self.target.domain();
        let sd = self.source.domain();
        let mut out = Terms::new();
        for (m, c) in terms {
            let c = td.convert(sd, c)?;
            if c.is_zero() {
                continue;
            }
            let mut acc: Option<Terms> = None;
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = self.power(i, e);
                acc = Some(match acc {
                    None => (*p).clone(),
                    Some(a) => self.target.mul_terms(&a, &p),
                });
                if acc.as_ref().is_some_and(|a| a.is_empty()) {
                    break;
                }
            }
            let acc = match acc {
                Some(a) => a,
                None => {
                    let mut one = Terms::new();
                    if !self.target.is_zero_ring() {
                        one.insert(self.target.one_mono(), BigRational::one());
                    }
                    one
                }
            };
            add_terms(td, &mut out, &self.target.scale_terms(&acc, &c));
        }
        Ok(out)
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly, GradedError> {
        if !same_ring(p.ring(), &self.source) {
            return Err(GradedError::RingMismatch);
        }
        Ok(Poly::from_normal(&self.target, self.apply_terms(p.terms())?))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &RingMap) -> Result<RingMap, GradedError> {
        let images = (0..self.source.ngens()).map(|i| next.apply(&self.image_of(i))).collect::<Result<Vec<_>, _>>()?;
        RingMap::new(&self.source, &next.target, images, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Domain;
    use crate::graded::RingBuilder;

    #[test]
    fn arithmetic_and_normal_forms() {
        let r = RingBuilder::new(Domain::Rational).generator("x", 1).generator("y", 1).build().unwrap();
        let x = Poly::generator(&r, "x").unwrap();
        let y = Poly::generator(&r, "y").unwrap();
        let s = &x + &y;
        assert_eq!((&s * &s).to_string(), "x^2 + 2*x*y + y^2");

        let l = RingBuilder::new(Domain::PLocal(3)).generator("v1", 2).invert("v1").build().unwrap();
        let v1 = Poly::generator(&l, "v1").unwrap();
        assert!((&v1 * &v1.inverse().unwrap()).is_one());

        let q = RingBuilder::new(Domain::PLocal(3)).generator("v1", 2).relation("3").build().unwrap();
        assert_eq!(q.domain(), Domain::PrimeField(3));
        let v1 = Poly::generator(&q, "v1").unwrap();
        assert!((&Poly::from_int(&q, 3) * &v1).is_zero());
    }

    #[test]
    fn maps() {
        let bp = RingBuilder::new(Domain::PLocal(3)).generator("v1", 2).generator("v2", 8).build().unwrap();
        let k = RingBuilder::new(Domain::PLocal(3)).generator("u", 1).invert("u").build().unwrap();
        let u = Poly::generator(&k, "u").unwrap();
        let f = RingMap::new(&bp, &k, vec![u.pow(2), Poly::zero(&k)], true).unwrap();
        let v1 = Poly::generator(&bp, "v1").unwrap();
        assert_eq!(f.apply(&v1.pow(2)).unwrap(), u.pow(4));
        let id = RingMap::by_name(&bp, &bp, false).unwrap();
        assert_eq!(id.apply(&v1).unwrap(), v1);
        let e1 = RingBuilder::new(Domain::PLocal(3)).generator("v1", 2).invert("v1").build().unwrap();
        let g = RingMap::by_name(&bp, &e1, true).unwrap();
        let v2 = Poly::generator(&bp, "v2").unwrap();
        assert!(g.apply(&v2.scale(&BigRational::from_integer(3.into()))).unwrap().is_zero());
        assert!(matches!(RingMap::new(&bp, &k, vec![u.clone(), Poly::zero(&k)], true), Err(GradedError::DegreeMismatch { .. })));
        let ku = RingBuilder::new(Domain::PLocal(3)).generator("u", 2).build().unwrap();
        assert!(matches!(
            RingMap::new(&e1, &ku, vec![Poly::generator(&ku, "u").unwrap()], true),
            Err(GradedError::ImageOfInvertedNotUnit(_))
        ));
    }
}
