use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use super::poly::same_ring;
use super::ring::add_terms;
use super::{GradedError, Poly, Ring, RingMap, Terms};

/// Exponents of the formal variables (unused slots stay zero).
pub type SMono = [u16; 3];

const VAR_NAMES: [[&str; 3]; 3] = [["t", "", ""], ["x", "y", ""], ["x", "y", "z"]];

/// A power series in 1 to 3 formal variables of degree −1 with coefficients in a graded
/// ring, truncated in total variable degree: terms of degree > `trunc` are not stored and
/// every operation is exact in degrees ≤ `trunc`.
#[derive(Clone, Debug)]
pub struct Series {
    ring: Ring,
    nvars: usize,
    trunc: u32,
    coeffs: BTreeMap<SMono, Terms>,
}

fn total(m: &SMono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

fn mono(exps: &[u32]) -> SMono {
    let mut m = [0u16; 3];
    for (i, &e) in exps.iter().enumerate() {
        m[i] = e as u16;
    }
    m
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && same_ring(&self.ring, &other.ring) && {
            let d = self.trunc.min(other.trunc);
            self.truncated(d).coeffs == other.truncated(d).coeffs
        }
    }
}

impl Series {
    pub fn zero(ring: &Ring, nvars: usize, trunc: u32) -> Series {
        assert!((1..=3).contains(&nvars), "1 to 3 formal variables");
        Series { ring: ring.clone(), nvars, trunc, coeffs: BTreeMap::new() }
    }

    pub fn var(ring: &Ring, nvars: usize, i: usize, trunc: u32) -> Series {
        let mut s = Series::zero(ring, nvars, trunc);
        let mut e = [0u32; 3];
        e[i] = 1;
        s.set(&e[..nvars], &Poly::one(ring));
        s
    }

    pub fn constant(ring: &Ring, nvars: usize, trunc: u32, c: &Poly) -> Series {
        let mut s = Series::zero(ring, nvars, trunc);
        s.set(&[0; 3][..nvars], c);
        s
    }

    /// A one-variable series from its coefficient list, starting at `t^0`.
    pub fn from_coefficients(ring: &Ring, trunc: u32, coeffs: &[Poly]) -> Series {
        let mut s = Series::zero(ring, 1, trunc);
        for (i, c) in coeffs.iter().enumerate() {
            s.set(&[i as u32], c);
        }
        s
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Sets a coefficient; terms beyond the truncation are dropped.
    pub fn set(&mut self, exps: &[u32], c: &Poly) {
        assert_eq!(exps.len(), self.nvars, "exponent arity");
        assert!(same_ring(c.ring(), &self.ring), "coefficient ring");
        let m = mono(exps);
        if total(&m) > self.trunc {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, c.terms().clone());
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> Poly {
        let m = mono(exps);
        Poly::from_normal(&self.ring, self.coeffs.get(&m).cloned().unwrap_or_default())
    }

    /// Nonzero terms as (exponents, coefficient).
    pub fn terms(&self) -> Vec<(Vec<u32>, Poly)> {
        self.coeffs
            .iter()
            .map(|(m, t)| (m[..self.nvars].iter().map(|&e| e as u32).collect(), Poly::from_normal(&self.ring, t.clone())))
            .collect()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> Poly {
        self.coefficient(&[0; 3][..self.nvars])
    }

    /// Smallest total degree of a nonzero term.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().map(total).min()
    }

    pub fn truncated(&self, d: u32) -> Series {
        let d = d.min(self.trunc);
        Series {
            ring: self.ring.clone(),
            nvars: self.nvars,
            trunc: d,
            coeffs: self.coeffs.iter().filter(|(m, _)| total(m) <= d).map(|(m, t)| (*m, t.clone())).collect(),
        }
    }

    fn compatible(&self, other: &Series) -> Result<(), GradedError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(GradedError::RingMismatch);
        }
        if self.nvars != other.nvars {
            return Err(GradedError::ArityMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series, GradedError> {
        self.compatible(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.truncated(trunc);
        let d = self.ring.domain();
        for (m, t) in &other.coeffs {
            if total(m) > trunc {
                continue;
            }
            let e = out.coeffs.entry(*m).or_default();
            add_terms(d, e, t);
            if e.is_empty() {
                out.coeffs.remove(m);
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series, GradedError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let d = self.ring.domain();
        let mut out = self.clone();
        for t in out.coeffs.values_mut() {
            for c in t.values_mut() {
                *c = d.neg(c);
            }
        }
        out
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series, GradedError> {
        self.compatible(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut b: Vec<(&SMono, &Terms, u32)> = other.coeffs.iter().map(|(m, t)| (m, t, total(m))).collect();
        b.sort_by_key(|x| x.2);
        let d = self.ring.domain();
        let mut out: BTreeMap<SMono, Terms> = BTreeMap::new();
        for (ma, ta) in &self.coeffs {
            let da = total(ma);
            if da > trunc {
                continue;
            }
            for &(mb, tb, db) in &b {
                if da + db > trunc {
                    break;
                }
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
                let prod = self.ring.mul_terms(ta, tb);
                if prod.is_empty() {
                    continue;
                }
                add_terms(d, out.entry(m).or_default(), &prod);
            }
        }
        out.retain(|_, t| !t.is_empty());
        Ok(Series { ring: self.ring.clone(), nvars: self.nvars, trunc, coeffs: out })
    }

    pub fn scale(&self, c: &Poly) -> Series {
        assert!(same_ring(c.ring(), &self.ring), "coefficient ring");
        let mut out = Series::zero(&self.ring, self.nvars, self.trunc);
        for (m, t) in &self.coeffs {
            let p = self.ring.mul_terms(t, c.terms());
            if !p.is_empty() {
                out.coeffs.insert(*m, p);
            }
        }
        out
    }

    pub fn scale_rational(&self, c: &BigRational) -> Series {
        let mut out = Series::zero(&self.ring, self.nvars, self.trunc);
        for (m, t) in &self.coeffs {
            let p = self.ring.scale_terms(t, c);
            if !p.is_empty() {
                out.coeffs.insert(*m, p);
            }
        }
        out
    }

    /// Multiplies by a monomial in the formal variables.
    pub fn shift(&self, exps: &[u32]) -> Series {
        let s = mono(exps);
        let mut out = Series::zero(&self.ring, self.nvars, self.trunc);
        for (m, t) in &self.coeffs {
            let n = [m[0] + s[0], m[1] + s[1], m[2] + s[2]];
            if total(&n) <= self.trunc {
                out.coeffs.insert(n, t.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut acc = Series::constant(&self.ring, self.nvars, self.trunc, &Poly::one(&self.ring));
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same ring");
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Substitutes series `args[i]` (all in the same variables) for the variables of `self`.
    pub fn substitute(&self, args: &[Series]) -> Result<Series, GradedError> {
        if args.len() != self.nvars {
            return Err(GradedError::ArityMismatch(self.nvars, args.len()));
        }
        let first = &args[0];
        for a in args {
            if !same_ring(&a.ring, &self.ring) || !same_ring(&a.ring, &first.ring) {
                return Err(GradedError::RingMismatch);
            }
            if a.nvars != first.nvars {
                return Err(GradedError::ArityMismatch(a.nvars, first.nvars));
            }
            if !a.constant_term().is_zero() {
                return Err(GradedError::NonzeroConstantTerm);
            }
        }
        let trunc = args.iter().map(|a| a.trunc).min().expect("nonempty").min(self.trunc);
        let args: Vec<Series> = args.iter().map(|a| a.truncated(trunc)).collect();
        // powers of each argument, only as far as the exponents present in self need
        let mut powers: Vec<Vec<Series>> = Vec::new();
        for (k, a) in args.iter().enumerate() {
            let maxe = self.coeffs.keys().map(|m| m[k] as u32).max().unwrap_or(0).min(trunc);
            let mut pw = vec![Series::constant(&self.ring, a.nvars, trunc, &Poly::one(&self.ring))];
            for e in 1..=maxe {
                let next = if pw[e as usize - 1].is_zero() { pw[e as usize - 1].clone() } else { pw[e as usize - 1].checked_mul(a)? };
                pw.push(next);
            }
            powers.push(pw);
        }
        let entries: Vec<(SMono, &Terms)> = self.coeffs.iter().map(|(m, t)| (*m, t)).collect();
        Ok(self.substitute_rec(&entries, 0, &powers, first.nvars, trunc))
    }

    fn substitute_rec(&self, entries: &[(SMono, &Terms)], var: usize, powers: &[Vec<Series>], nv: usize, trunc: u32) -> Series {
        let mut groups: BTreeMap<u16, Vec<(SMono, &Terms)>> = BTreeMap::new();
        for &(m, t) in entries {
            groups.entry(m[var]).or_default().push((m, t));
        }
        let mut acc = Series::zero(&self.ring, nv, trunc);
        for (e, group) in groups {
            let pw = &powers[var][e as usize];
            if pw.is_zero() {
                continue;
            }
            let inner = if var + 1 == self.nvars {
                debug_assert_eq!(group.len(), 1);
                let c = Poly::from_normal(&self.ring, group[0].1.clone());
                Series::constant(&self.ring, nv, trunc, &c)
            } else {
                self.substitute_rec(&group, var + 1, powers, nv, trunc)
            };
            let term = if inner.coeffs.len() == 1 && inner.coeffs.contains_key(&[0, 0, 0]) {
                pw.scale(&inner.constant_term())
            } else {
                pw.checked_mul(&inner).expect("same ring")
            };
            acc = acc.checked_add(&term).expect("same ring");
        }
        acc
    }

    /// `self(g)` for a one-variable `self`.
    pub fn compose(&self, g: &Series) -> Result<Series, GradedError> {
        if self.nvars != 1 {
            return Err(GradedError::ArityMismatch(1, self.nvars));
        }
        self.substitute(std::slice::from_ref(g))
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Series, GradedError> {
        let c0 = self.constant_term();
        let inv0 = c0.inverse().ok_or(GradedError::LeadingCoefficientNotUnit)?;
        let one = Series::constant(&self.ring, self.nvars, self.trunc, &Poly::one(&self.ring));
        // self = c0 (1 + r) with r of positive order
        let r = self.scale(&inv0).checked_sub(&one)?;
        let neg_r = r.neg();
        let mut acc = one.clone();
        let mut pw = one;
        for _ in 0..self.trunc {
            pw = pw.checked_mul(&neg_r)?;
            if pw.is_zero() {
                break;
            }
            acc = acc.checked_add(&pw)?;
        }
        Ok(acc.scale(&inv0))
    }

    /// Partial derivative; exact in degrees ≤ trunc − 1.
    pub fn derivative(&self, var: usize) -> Series {
        let mut out = self.derivative_keep(var);
        out.trunc = self.trunc.saturating_sub(1);
        out
    }

    // derivative of the stored polynomial, keeping the truncation bound
    fn derivative_keep(&self, var: usize) -> Series {
        let mut out = Series::zero(&self.ring, self.nvars, self.trunc);
        for (m, t) in &self.coeffs {
            if m[var] == 0 {
                continue;
            }
            let mut n = *m;
            n[var] -= 1;
            let p = self.ring.scale_terms(t, &BigRational::from_integer(m[var].into()));
            if !p.is_empty() {
                out.coeffs.insert(n, p);
            }
        }
        out
    }

    /// Termwise integral of a one-variable series with zero constant of integration.
    /// Needs division by integers, so the coefficient domain must be ℚ.
    pub fn integrate(&self) -> Result<Series, GradedError> {
        if self.nvars != 1 {
            return Err(GradedError::ArityMismatch(1, self.nvars));
        }
        if self.ring.domain() != crate::arith::Domain::Rational {
            return Err(GradedError::TorsionBase(self.ring.domain().label()));
        }
        let mut out = Series::zero(&self.ring, 1, self.trunc + 1);
        for (m, t) in &self.coeffs {
            let k = m[0] as i64 + 1;
            out.coeffs.insert([k as u16, 0, 0], self.ring.scale_terms(t, &BigRational::new(1.into(), k.into())));
        }
        Ok(out)
    }

    /// Compositional inverse of a one-variable series with `f(0) = 0` and unit `f'(0)`.
    pub fn reverse(&self) -> Result<Series, GradedError> {
        if self.nvars != 1 {
            return Err(GradedError::ArityMismatch(1, self.nvars));
        }
        if !self.constant_term().is_zero() {
            return Err(GradedError::NonzeroConstantTerm);
        }
        let a1 = self.coefficient(&[1]);
        let inv1 = a1.inverse().ok_or(GradedError::LeadingCoefficientNotUnit)?;
        let t = Series::var(&self.ring, 1, 0, self.trunc);
        let fprime = self.derivative_keep(0);
        let mut g = t.scale(&inv1);
        let mut precision = 1u32;
        while precision < self.trunc {
            let err = self.compose(&g)?.checked_sub(&t)?;
            if err.is_zero() {
                break;
            }
            let d = fprime.compose(&g)?.inverse()?;
            g = g.checked_sub(&err.checked_mul(&d)?)?;
            precision = precision * 2 + 1;
        }
        Ok(g)
    }

    /// Permutes the formal variables: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Series {
        let mut out = Series::zero(&self.ring, self.nvars, self.trunc);
        for (m, t) in &self.coeffs {
            let mut n = [0u16; 3];
            for i in 0..self.nvars {
                n[perm[i]] = m[i];
            }
            out.coeffs.insert(n, t.clone());
        }
        out
    }

    /// Views a series as one in more variables (existing variables keep their positions).
    pub fn widen(&self, nvars: usize) -> Series {
        assert!(nvars >= self.nvars && nvars <= 3);
        Series { ring: self.ring.clone(), nvars, trunc: self.trunc, coeffs: self.coeffs.clone() }
    }

    /// Applies a ring map to every coefficient.
    pub fn map_coefficients(&self, f: &RingMap) -> Result<Series, GradedError> {
        if !same_ring(f.source(), &self.ring) {
            return Err(GradedError::RingMismatch);
        }
        let mut out = Series::zero(f.target(), self.nvars, self.trunc);
        for (m, t) in &self.coeffs {
            let p = f.apply_terms(t)?;
            if !p.is_empty() {
                out.coeffs.insert(*m, p);
            }
        }
        Ok(out)
    }

    /// Checks that every term `c·x^e` has `deg c = degree + |e|`.
    pub fn is_homogeneous_of(&self, degree: i32) -> bool {
        self.coeffs.iter().all(|(m, t)| t.keys().all(|mm| self.ring.mono_degree(mm) == degree + total(m) as i32))
    }

    /// Coefficients outside the domain after a change of coefficient ring, e.g. from ℚ to ℤ_(p).
    pub fn cast(&self, ring: &Ring) -> Result<Series, GradedError> {
        let mut out = Series::zero(ring, self.nvars, self.trunc);
        for (m, t) in &self.coeffs {
            let p = Poly::from_normal(&self.ring, t.clone()).cast(ring)?;
            if !p.is_zero() {
                out.coeffs.insert(*m, p.into_terms());
            }
        }
        Ok(out)
    }

    pub fn with_trunc(&self, trunc: u32) -> Series {
        let mut s = self.truncated(trunc);
        s.trunc = trunc;
        s
    }

    /// Series in one variable as a coefficient vector `[c_0, …, c_trunc]`.
    pub fn coefficient_list(&self) -> Vec<Poly> {
        (0..=self.trunc).map(|i| self.coefficient(&[i])).collect()
    }

    pub fn is_one_variable_identity(&self) -> bool {
        self.nvars == 1 && self.coeffs.len() == 1 && self.coefficient(&[1]).is_one()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 + O({})", self.trunc + 1);
        }
        let names = VAR_NAMES[self.nvars - 1];
        let mut items: Vec<(&SMono, &Terms)> = self.coeffs.iter().collect();
        items.sort_by_key(|(m, _)| (total(m), std::cmp::Reverse(**m)));
        let mut first = true;
        for (m, t) in items {
            let p = Poly::from_normal(&self.ring, t.clone());
            let mut vars = Vec::new();
            for i in 0..self.nvars {
                match m[i] {
                    0 => {}
                    1 => vars.push(names[i].to_string()),
                    e => vars.push(format!("{}^{}", names[i], e)),
                }
            }
            let var = vars.join("*");
            let coef = p.to_string();
            let (neg, coef) = if p.len() == 1 && coef.starts_with('-') { (true, coef[1..].to_string()) } else { (false, coef) };
            if !first {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            first = false;
            let coef = if p.len() > 1 { format!("({coef})") } else { coef };
            if var.is_empty() {
                f.write_str(&coef)?;
            } else if coef == "1" {
                f.write_str(&var)?;
            } else {
                write!(f, "{coef}*{var}")?;
            }
        }
        Ok(())
    }
}

impl Series {
    /// Scalar parts of the coefficients of a one-variable series.
    pub fn scalar_coefficients(&self) -> Vec<BigRational> {
        (0..=self.trunc).map(|i| self.coefficient(&[i]).constant_term()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Domain};
    use crate::graded::RingBuilder;

    fn q() -> Ring {
        RingBuilder::new(Domain::Rational).build().unwrap()
    }

    fn s1(r: &Ring, d: u32, c: &[i64]) -> Series {
        Series::from_coefficients(r, d, &c.iter().map(|&x| Poly::from_int(r, x)).collect::<Vec<_>>())
    }

    #[test]
    fn composition() {
        let r = q();
        let f = s1(&r, 6, &[0, 1, 1]);
        assert_eq!(f.compose(&f).unwrap(), s1(&r, 6, &[0, 1, 2, 2, 1]));
        let t = s1(&r, 6, &[0, 1]);
        assert_eq!(t.compose(&f).unwrap(), f);
        let f = s1(&r, 2, &[0, 1, 0, 1]);
        assert_eq!(f.compose(&s1(&r, 2, &[0, 1])).unwrap(), s1(&r, 2, &[0, 1]));
        assert_eq!(t.compose(&s1(&r, 6, &[1, 1])), Err(GradedError::NonzeroConstantTerm));
    }

    #[test]
    fn reversion() {
        let r = q();
        let g = s1(&r, 5, &[0, 1, 1]).reverse().unwrap();
        assert_eq!(g, s1(&r, 5, &[0, 1, -1, 2, -5, 14]));
        assert_eq!(s1(&r, 5, &[0, 1]).reverse().unwrap(), s1(&r, 5, &[0, 1]));
        let h = s1(&r, 5, &[0, 2]).reverse().unwrap();
        assert_eq!(h.coefficient(&[1]).constant_term(), crate::arith::rat(1, 2));
        let z = RingBuilder::new(Domain::Integer).build().unwrap();
        assert_eq!(s1(&z, 5, &[0, 2]).reverse(), Err(GradedError::LeadingCoefficientNotUnit));
    }

    #[test]
    fn two_variable_substitution() {
        let r = q();
        let x = Series::var(&r, 2, 0, 6);
        let y = Series::var(&r, 2, 1, 6);
        let f = x.checked_add(&y).unwrap().checked_add(&x.checked_mul(&y).unwrap()).unwrap();
        let t = Series::var(&r, 1, 0, 6);
        let out = f.substitute(&[t.clone(), t.clone()]).unwrap();
        assert_eq!(out, s1(&r, 6, &[0, 2, 1]));
        let add = x.checked_add(&y).unwrap();
        let out = add.substitute(&[t.pow(2), t.pow(3)]).unwrap();
        assert_eq!(out, s1(&r, 6, &[0, 0, 1, 1]));
        let zero = Series::zero(&r, 1, 6);
        assert_eq!(f.substitute(&[t.clone(), zero]).unwrap(), t);
        assert_eq!(f.permute(&[1, 0]), f);
    }

    #[test]
    fn inverse_and_integral() {
        let r = q();
        let u = s1(&r, 6, &[1, 1]);
        let inv = u.inverse().unwrap();
        assert_eq!(inv, s1(&r, 6, &[1, -1, 1, -1, 1, -1, 1]));
        let l = inv.with_trunc(3).integrate().unwrap();
        assert_eq!(l.coefficient(&[4]).constant_term(), crate::arith::rat(-1, 4));
        assert_eq!(l.coefficient(&[1]).constant_term(), int(1));
    }
}
