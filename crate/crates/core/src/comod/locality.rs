use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ComodError;
use crate::arith::{kernel_basis, Domain, QMatrix};
use crate::graded::{Mono, Poly, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandVerdict {
    pub ring: String,
    pub local: bool,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Whether α_M: M → ker(⊕ M_{f_i} → ⊕ M_{f_i f_j}) is an isomorphism, for M a sum of cyclic
/// modules R = (A/J)[S^{-1}].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub ideal: Vec<String>,
    pub local: bool,
    pub summands: Vec<SummandVerdict>,
    pub bound: i32,
}

fn is_nilpotent(f: &Poly) -> bool {
    let r = f.ring();
    f.terms().keys().all(|m| m.iter().enumerate().any(|(i, &e)| e > 0 && r.nilpotence(i).is_some()))
}

/// Single monomial in generators that are neither nilpotent nor eliminated.
fn is_regular_monomial(f: &Poly) -> bool {
    let r = f.ring();
    f.len() == 1 && f.terms().keys().all(|m| m.iter().enumerate().all(|(i, &e)| e == 0 || r.nilpotence(i).is_none()))
}

/// A nonzero element of the kernel of multiplication by f in degrees ≤ bound, if any.
fn zero_divisor_witness(f: &Poly, bound: i32) -> Result<Option<Poly>, ComodError> {
    let r = f.ring();
    let d = f.degree().ok_or_else(|| ComodError::Input(format!("{f} is not homogeneous")))?;
    if !f.is_homogeneous() {
        return Err(ComodError::Input(format!("{f} is not homogeneous")));
    }
    for t in 0..=bound {
        let src = r.monomial_basis(t, 0)?;
        if src.is_empty() {
            continue;
        }
        let dst = r.monomial_basis(t + d, 0)?;
        let index: std::collections::BTreeMap<&Mono, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = QMatrix::zeros(dst.len(), src.len());
        for (j, m) in src.iter().enumerate() {
            let prod = &Poly::monomial(r, m.clone(), num_traits::One::one()) * f;
            for (m2, c) in prod.terms() {
                mat[(index[m2], j)] = c.clone();
            }
        }
        let domain = match r.domain() {
            Domain::Integer | Domain::PLocal(_) => Domain::Rational,
            d => d,
        };
        if let Some(v) = kernel_basis(domain, &mat)?.into_iter().next() {
            let mut w = Poly::zero(r);
            for (c, m) in v.iter().zip(&src) {
                if !c.is_zero() {
                    w = &w + &Poly::monomial(r, m.clone(), c.clone());
                }
            }
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn verdict(r: &Ring, fs: &[Poly], bound: i32) -> Result<SummandVerdict, ComodError> {
    let ring = r.describe();
    let done = |local: bool, reason: &str, witness: Option<String>| Ok(SummandVerdict { ring: ring.clone(), local, reason: reason.into(), witness });
    if r.is_zero_ring() {
        return done(true, "M = 0", None);
    }
    if let Some(u) = fs.iter().find(|f| f.is_unit()) {
        return done(true, &format!("{u} acts invertibly"), None);
    }
    let live: Vec<&Poly> = fs.iter().filter(|f| !f.is_zero() && !is_nilpotent(f)).collect();
    match live.len() {
        0 => done(false, "every f_i is nilpotent on M, so M_{f_i} = 0 and ker(alpha_M) = M", Some("1".into())),
        1 => {
            let f = live[0];
            if is_regular_monomial(f) {
                return done(false, &format!("{f} is a non-zero-divisor but not a unit"), Some(format!("({f})^(-1) is not in the image")));
            }
            if r.has_inverted() {
                return Err(ComodError::Unsupported(format!("regularity of {f} on a localized ring")));
            }
            match zero_divisor_witness(f, bound)? {
                Some(w) => done(false, &format!("{f} is a zero-divisor"), Some(format!("{w} lies in ker(alpha_M)"))),
                None => done(false, &format!("{f} is a non-zero-divisor through degree {bound} but not a unit"), Some(format!("({f})^(-1) is not in the image"))),
            }
        }
        _ => {
            // distinct regular parameters (generators or p) give depth ≥ 2, so H^0_I = H^1_I = 0
            let mut seen = Vec::new();
            for f in &live {
                let param = if f.is_constant() {
                    matches!(r.domain(), Domain::PLocal(_) | Domain::Integer).then(|| "p".to_string())
                } else if is_regular_monomial(f) && f.terms().keys().next().is_some_and(|m| m.iter().filter(|&&e| e != 0).count() == 1 && m.iter().all(|&e| e == 0 || e == 1)) {
                    let m = f.terms().keys().next().expect("one term");
                    let i = m.iter().position(|&e| e == 1).expect("one generator");
                    (!r.is_inverted(i)).then(|| r.generators()[i].name.clone())
                } else {
                    None
                };
                match param {
                    Some(p) if !seen.contains(&p) => seen.push(p),
                    _ => return Err(ComodError::Unsupported(format!("Cech locality for the ideal generated by {}", live.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")))),
                }
            }
            done(true, "the f_i form a regular sequence of length >= 2 on M", None)
        }
    }
}

/// Decides I-locality of ⊕ R_k for I = (f_1, …, f_m), reading each f_i in each summand ring.
pub fn locality_check(summands: &[Ring], ideal: &[String], bound: i32) -> Result<LocalityReport, ComodError> {
    let mut out = Vec::new();
    for r in summands {
        let fs = ideal.iter().map(|f| Poly::parse(r, f)).collect::<Result<Vec<_>, _>>()?;
        out.push(verdict(r, &fs, bound)?);
    }
    Ok(LocalityReport { ideal: ideal.to_vec(), local: out.iter().all(|v| v.local), summands: out, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::RingBuilder;

    #[test]
    fn locality_examples() {
        let b = || RingBuilder::new(Domain::PLocal(3)).generator("v1", 2).generator("v2", 8);
        let mod3 = b().relation("3").build().unwrap();
        let v1inv = b().relation("3").invert("v1").build().unwrap();
        let r = locality_check(&[v1inv], &["v1".into()], 16).unwrap();
        assert!(r.local);
        let r = locality_check(std::slice::from_ref(&mod3), &["v1".into()], 16).unwrap();
        assert!(!r.local);
        assert_eq!(r.summands[0].witness.as_deref(), Some("(v1)^(-1) is not in the image"));
        let all_zero = b().relation("3").relation("v1").relation("v2").build().unwrap();
        let r = locality_check(&[all_zero], &["3".into()], 16).unwrap();
        assert!(!r.local);
        assert_eq!(r.summands[0].witness.as_deref(), Some("1"));
        let bp = b().build().unwrap();
        assert!(locality_check(std::slice::from_ref(&bp), &["3".into(), "v1".into()], 16).unwrap().local);
        let nil = b().relation("3").relation("v1^2").build().unwrap();
        let r = locality_check(&[nil], &["v1 + v1*v1".into()], 8);
        assert!(r.is_err() || !r.unwrap().local);
    }
}
