use crate::arith::Domain;
use crate::fgl::{m_in_terms_of_v, v_in_terms_of_m, GeneratorKind};
use crate::graded::{Generator, Poly, Ring, RingBuilder, RingMap, Series};

use super::{HopfAlgebroid, HopfError};

/// (A, A) with every structure map the identity.
pub fn trivial(a: &Ring, trunc: i32) -> Result<HopfAlgebroid, HopfError> {
    let gamma = a.extend(&[])?;
    let eta: Vec<Poly> = (0..a.ngens()).map(|i| Poly::gen(&gamma, i)).collect();
    HopfAlgebroid::new("trivial", a, &[], trunc, eta, vec![], vec![], vec![])
}

fn poly_ring(gens: impl IntoIterator<Item = (String, i32)>) -> Ring {
    RingBuilder::new(Domain::Rational).generators(gens).build().expect("polynomial ring")
}

/// (BP_*, BP_*BP) at p through generators of degree ≤ trunc (algebraic grading,
/// deg v_n = deg t_n = p^n − 1). Structure maps are computed over ℚ[m_i] and cast into ℤ_(p),
/// which fails if any coefficient is not p-integral.
pub fn bp(p: u64, trunc: i32, kind: GeneratorKind) -> Result<HopfAlgebroid, HopfError> {
    if !crate::arith::is_prime(p) {
        return Err(HopfError::Input(format!("{p} is not prime")));
    }
    let mut n = 0usize;
    while (p.pow(n as u32 + 1) - 1) as i64 <= trunc as i64 {
        n += 1;
    }
    if n == 0 {
        return Err(HopfError::TruncationTooSmall { needed: p as i32 - 1, have: trunc });
    }
    let deg = |i: usize| (p.pow(i as u32) - 1) as i32;
    let pw = |i: usize| p.pow(i as u32) as u32;
    let t_gens: Vec<Generator> = (1..=n).map(|i| Generator { name: format!("t{i}"), degree: deg(i) }).collect();

    // rational computation in terms of the logarithm coefficients m_i
    let am = poly_ring((1..=n).map(|i| (format!("m{i}"), deg(i))));
    let gm = am.extend(&t_gens)?;
    let t2m = HopfAlgebroid::build_tensor(&am, &t_gens, 2)?;
    let one = |r: &Ring| Poly::one(r);
    let m = |r: &Ring, i: usize| if i == 0 { one(r) } else { Poly::gen(r, i - 1) };
    let t = |i: usize| if i == 0 { one(&gm) } else { Poly::gen(&gm, n + i - 1) };
    let tt = |k: usize, i: usize| if i == 0 { one(&t2m) } else { Poly::gen(&t2m, n + (k - 1) * n + i - 1) };

    let mut eta_m = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = Poly::zero(&gm);
        for i in 0..=k {
            acc = &acc + &(&m(&gm, i) * &t(k - i).pow(pw(i)));
        }
        eta_m.push(acc);
    }

    let mut delta_m: Vec<Poly> = vec![one(&t2m)];
    for k in 1..=n {
        let mut acc = Poly::zero(&t2m);
        for i in 0..=k {
            for j in 0..=(k - i) {
                let l = k - i - j;
                acc = &acc + &(&(&m(&t2m, i) * &tt(1, j).pow(pw(i))) * &tt(2, l).pow(pw(i + j)));
            }
        }
        for i in 1..=k {
            acc = &acc - &(&m(&t2m, i) * &delta_m[k - i].pow(pw(i)));
        }
        delta_m.push(acc);
    }

    let mut anti_m: Vec<Poly> = vec![one(&gm)];
    for k in 1..=n {
        let mut acc = m(&gm, k);
        for i in 0..=k {
            for j in 0..=(k - i) {
                let l = k - i - j;
                if l == k {
                    continue;
                }
                acc = &acc - &(&(&m(&gm, i) * &t(j).pow(pw(i))) * &anti_m[l].pow(pw(i + j)));
            }
        }
        anti_m.push(acc);
    }

    // change of generators m → v
    let aq = poly_ring((1..=n).map(|i| (format!("v{i}"), deg(i))));
    let gq = aq.extend(&t_gens)?;
    let t2q = HopfAlgebroid::build_tensor(&aq, &t_gens, 2)?;
    let v_gq: Vec<Poly> = (0..n).map(|i| Poly::gen(&gq, i)).collect();
    let m_of_v = m_in_terms_of_v(p, n, kind, &v_gq, &gq);
    let mut phi_images = m_of_v.clone();
    phi_images.extend((0..n).map(|i| Poly::gen(&gq, n + i)));
    let phi = RingMap::new(&gm, &gq, phi_images, true)?;
    let v_t2q: Vec<Poly> = (0..n).map(|i| Poly::gen(&t2q, i)).collect();
    let mut phi2_images = m_in_terms_of_v(p, n, kind, &v_t2q, &t2q);
    phi2_images.extend((0..2 * n).map(|i| Poly::gen(&t2q, n + i)));
    let phi2 = RingMap::new(&t2m, &t2q, phi2_images, true)?;

    let (mring, v_of_m) = v_in_terms_of_m(p, n, kind);
    let psi = RingMap::new(&mring, &gm, eta_m.clone(), true)?;

    let a = RingBuilder::new(Domain::PLocal(p)).generators((1..=n).map(|i| (format!("v{i}"), deg(i)))).build()?;
    let gamma = a.extend(&t_gens)?;
    let t2 = HopfAlgebroid::build_tensor(&a, &t_gens, 2)?;

    let eta_r = v_of_m.iter().map(|v| Ok(phi.apply(&psi.apply(v)?)?.cast(&gamma)?)).collect::<Result<Vec<_>, HopfError>>()?;
    let delta = delta_m[1..].iter().map(|d| Ok(phi2.apply(d)?.cast(&t2)?)).collect::<Result<Vec<_>, HopfError>>()?;
    let anti = anti_m[1..].iter().map(|c| Ok(phi.apply(c)?.cast(&gamma)?)).collect::<Result<Vec<_>, HopfError>>()?;
    let eps = vec![Poly::zero(&a); n];
    let name = format!("BP at p = {p} ({kind:?} generators)");
    HopfAlgebroid::new(&name, &a, &t_gens, trunc, eta_r, eps, delta, anti)
}

/// The rational model of (MU_*, MU_*MU): A = ℚ[m_1, …, m_D] (log coefficients, deg m_i = i)
/// and Γ = A[b_1, …, b_D], where b(t) = t + Σ b_i t^{i+1} is the universal strict isomorphism
/// from the left law to the right law, so log_R = log_L ∘ b^{-1}.
pub fn mu_rational(trunc: i32) -> Result<HopfAlgebroid, HopfError> {
    if trunc < 1 {
        return Err(HopfError::TruncationTooSmall { needed: 1, have: trunc });
    }
    let d = trunc as usize;
    let a = poly_ring((1..=d).map(|i| (format!("m{i}"), i as i32)));
    let b_gens: Vec<Generator> = (1..=d).map(|i| Generator { name: format!("b{i}"), degree: i as i32 }).collect();
    let gamma = a.extend(&b_gens)?;
    let t2 = HopfAlgebroid::build_tensor(&a, &b_gens, 2)?;
    let st = trunc as u32 + 1;

    let b_series = |r: &Ring, offset: usize| {
        let mut s = Series::var(r, 1, 0, st);
        for i in 1..=d {
            s.set(&[i as u32 + 1], &Poly::gen(r, offset + i - 1));
        }
        s
    };
    let b = b_series(&gamma, d);
    let b_inv = b.reverse()?;
    let mut log_l = Series::var(&gamma, 1, 0, st);
    for i in 1..=d {
        log_l.set(&[i as u32 + 1], &Poly::gen(&gamma, i - 1));
    }
    let log_r = log_l.compose(&b_inv)?;
    let eta_r: Vec<Poly> = (1..=d).map(|i| log_r.coefficient(&[i as u32 + 1])).collect();
    let anti: Vec<Poly> = (1..=d).map(|i| b_inv.coefficient(&[i as u32 + 1])).collect();
    let b1 = b_series(&t2, d);
    let b2 = b_series(&t2, 2 * d);
    let comp = b2.compose(&b1)?;
    let delta: Vec<Poly> = (1..=d).map(|i| comp.coefficient(&[i as u32 + 1])).collect();
    let eps = vec![Poly::zero(&a); d];
    HopfAlgebroid::new("rational MU", &a, &b_gens, trunc, eta_r, eps, delta, anti)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rational_valuation, Valuation};
    use crate::hopf::format_tensor;

    #[test]
    fn bp_structure() {
        let h = bp(3, 16, GeneratorKind::Hazewinkel).unwrap();
        assert_eq!(h.eta_r(0).to_string(), "v1 + 3*t1");
        assert_eq!(format_tensor(&h, h.delta(0)), "(t1)⊗(1) + (1)⊗(t1)");
        assert!(h.epsilon(0).is_zero() && h.epsilon(1).is_zero());
        assert_eq!(h.antipode(0).to_string(), "-t1");
        let report = h.check_axioms();
        assert!(report.all_pass(), "{report:?}");
        for (_, p) in h.structure_values() {
            for c in p.terms().values() {
                assert!(rational_valuation(c, 3) >= Valuation::Finite(0));
            }
        }
        assert!(matches!(bp(3, 1, GeneratorKind::Hazewinkel), Err(HopfError::TruncationTooSmall { .. })));
        let araki = bp(3, 16, GeneratorKind::Araki).unwrap();
        assert!(araki.check_axioms().all_pass());
        assert!(bp(2, 7, GeneratorKind::Hazewinkel).unwrap().check_axioms().all_pass());
    }

    #[test]
    fn mu_structure() {
        let h = mu_rational(4).unwrap();
        assert_eq!(h.eta_r(0).to_string(), "m1 - b1");
        assert!(h.epsilon(2).is_zero());
        let report = h.check_axioms();
        assert!(report.all_pass(), "{report:?}");
        let b = Series::from_coefficients(h.gamma(), 4, &[Poly::zero(h.gamma()), Poly::one(h.gamma()), Poly::gen(h.gamma(), 4), Poly::gen(h.gamma(), 5), Poly::gen(h.gamma(), 6)]);
        let c = Series::from_coefficients(h.gamma(), 4, &[Poly::zero(h.gamma()), Poly::one(h.gamma()), h.antipode(0).clone(), h.antipode(1).clone(), h.antipode(2).clone()]);
        assert_eq!(b.reverse().unwrap(), c);
    }

    #[test]
    fn trivial_passes() {
        let a = RingBuilder::new(Domain::PLocal(3)).generator("v1", 2).build().unwrap();
        assert!(trivial(&a, 10).unwrap().check_axioms().all_pass());
    }
}
