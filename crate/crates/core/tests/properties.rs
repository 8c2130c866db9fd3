use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use chromalg::arith::{cokernel_invariants, kernel_basis, smith_normal_form, Domain, IntMatrix, Scalar};
use chromalg::fgl::{self, height, p_series, strict_iso_apply, Automorphism, FormalGroupLaw, GeneratorKind};
use chromalg::graded::{Poly, Ring, RingBuilder, Series};
use chromalg::hopf;
use chromalg::landweber::{self, builtin};
use chromalg::numtheory;

fn q() -> Ring {
    fgl::scalars(Domain::Rational)
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-12i64..=12, r * c).prop_map(move |v| IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

fn series(d: u32, lead: bool) -> impl Strategy<Value = Series> {
    prop::collection::vec(rational(), d as usize).prop_filter_map("unit leading coefficient", move |mut c| {
        if lead && c[0].is_zero() {
            return None;
        }
        let q = q();
        let mut coeffs = vec![Poly::zero(&q)];
        coeffs.extend(c.drain(..).map(|x| Poly::constant(&q, x).unwrap()));
        Some(Series::from_coefficients(&q, d, &coeffs))
    })
}

fn bivariate() -> Ring {
    RingBuilder::new(Domain::PLocal(3)).generators([("x", 2), ("y", 4)]).build().unwrap()
}

fn poly(ring: Ring) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..4, 0u32..3, -9i64..=9), 0..5).prop_map(move |terms| {
        let (x, y) = (Poly::generator(&ring, "x").unwrap(), Poly::generator(&ring, "y").unwrap());
        terms.iter().fold(Poly::zero(&ring), |acc, &(i, j, c)| {
            let t = x.pow(i).checked_mul(&y.pow(j)).unwrap().scale(&BigRational::from_integer(c.into()));
            acc.checked_add(&t).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(domain in prop_oneof![Just(Domain::Rational), Just(Domain::PLocal(3)), Just(Domain::PrimeField(5)), Just(Domain::Integer)],
                           xs in prop::collection::vec((-40i64..=40, prop_oneof![Just(1i64), Just(2), Just(7)]), 3)) {
        let s: Vec<Scalar> = xs
            .iter()
            .map(|&(n, d)| if matches!(domain, Domain::Integer | Domain::PrimeField(_)) { Scalar::from_int(domain, n) } else { Scalar::from_ratio(domain, n, d).unwrap() })
            .collect();
        let (a, b, c) = (&s[0], &s[1], &s[2]);
        prop_assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
        prop_assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
        prop_assert_eq!(a.add(b).unwrap().add(c).unwrap(), a.add(&b.add(c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(b).unwrap().mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(c).unwrap()).unwrap(), a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap());
    }

    #[test]
    fn smith_decomposition_is_exact(m in matrix(7)) {
        let sd = smith_normal_form(&m);
        prop_assert!(sd.verify(&m));
        prop_assert_eq!(sd.u.mul(&m).unwrap().mul(&sd.v).unwrap(), sd.d.clone());
        prop_assert!(sd.u.determinant().abs().is_one() && sd.v.determinant().abs().is_one());
        prop_assert!(sd.divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    }

    #[test]
    fn cokernel_ignores_unimodular_operations(m in matrix(6), ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3, any::<bool>()), 1..8)) {
        let before = cokernel_invariants(&m, m.rows()).unwrap();
        let (r, c) = (m.rows(), m.cols());
        let mut rows: Vec<Vec<BigInt>> = (0..r).map(|i| m.row(i).to_vec()).collect();
        for (i, j, k, on_rows) in ops {
            if on_rows && r > 1 && i % r != j % r {
                let (i, j) = (i % r, j % r);
                for col in 0..c {
                    let add = &rows[i][col] * k;
                    rows[j][col] += add;
                }
            } else if !on_rows && c > 1 && i % c != j % c {
                let (i, j) = (i % c, j % c);
                for row in rows.iter_mut() {
                    let add = &row[i] * k;
                    row[j] += add;
                }
            }
        }
        let moved = IntMatrix::from_rows(rows).unwrap();
        prop_assert_eq!(before, cokernel_invariants(&moved, r).unwrap());
    }

    #[test]
    fn kernel_vectors_annihilate(m in matrix(6)) {
        let qm = m.to_rational();
        let basis = kernel_basis(Domain::Rational, &qm).unwrap();
        prop_assert_eq!(basis.len(), m.cols() - smith_normal_form(&m).rank());
        for v in basis {
            prop_assert!(qm.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn polynomial_normal_form_is_canonical(a in poly(bivariate()), b in poly(bivariate()), c in poly(bivariate())) {
        let ab_c = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        let c_ba = c.checked_mul(&b.checked_mul(&a).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &c_ba);
        let left = a.checked_add(&b).unwrap().checked_mul(&c).unwrap();
        let right = c.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(Poly::parse(a.ring(), &a.to_string()).unwrap(), a.clone());
        if let (Some(da), Some(db), true, true) = (a.degree(), b.degree(), a.is_homogeneous(), b.is_homogeneous()) {
            let ab = a.checked_mul(&b).unwrap();
            prop_assert!(ab.is_zero() || (ab.is_homogeneous() && ab.degree() == Some(da + db)));
        }
    }

    #[test]
    fn reversion_round_trips(f in series(10, true)) {
        let t = Series::var(&q(), 1, 0, 10);
        let g = f.reverse().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), t.clone());
        prop_assert_eq!(g.compose(&f).unwrap(), t);
    }

    #[test]
    fn truncation_is_coherent(a in series(10, false), b in series(10, true), d in 1u32..10) {
        let cut = |s: &Series| s.with_trunc(d);
        prop_assert_eq!(cut(&a.checked_add(&b).unwrap()), cut(&a).checked_add(&cut(&b)).unwrap());
        prop_assert_eq!(cut(&a.checked_mul(&b).unwrap()), cut(&a).checked_mul(&cut(&b)).unwrap());
        prop_assert_eq!(cut(&a.compose(&b).unwrap()), cut(&a).compose(&cut(&b)).unwrap());
    }

    #[test]
    fn ga_value_is_additive(n in 1u32..6, fa in rational(), ga in rational(), tail in prop::collection::vec(rational(), 12)) {
        let q = q();
        let d = 10;
        let make = |a: &BigRational, rest: &[BigRational]| {
            let mut c = vec![Poly::zero(&q), Poly::one(&q)];
            c.resize(n as usize + 1, Poly::zero(&q));
            c.push(Poly::constant(&q, a.clone()).unwrap());
            c.extend(rest.iter().take((d - n - 1) as usize).map(|x| Poly::constant(&q, x.clone()).unwrap()));
            Automorphism::new(Series::from_coefficients(&q, d, &c)).unwrap()
        };
        let (f, g) = (make(&fa, &tail[..6]), make(&ga, &tail[6..]));
        let fg = f.compose(&g).unwrap();
        prop_assert!(fg.filtration().is_none_or(|x| x.level >= n));
        prop_assert_eq!(fg.ga_value(n), Poly::constant(&q, fa + ga).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn height_is_a_strict_isomorphism_invariant(n in 1u32..=2, coeffs in prop::collection::vec(0i64..3, 8)) {
        let law = fgl::honda(3, n, 9, GeneratorKind::Hazewinkel).unwrap();
        let ring = law.ring().clone();
        let mut c = vec![Poly::zero(&ring), Poly::one(&ring)];
        c.extend(coeffs.iter().map(|&x| Poly::from_int(&ring, x)));
        let f = Automorphism::new(Series::from_coefficients(&ring, 9, &c)).unwrap();
        let moved = strict_iso_apply(&f, &law).unwrap();
        prop_assert_eq!(height(&moved, 3, 2).unwrap(), height(&law, 3, 2).unwrap());
    }

    #[test]
    fn p_series_is_an_endomorphism(p in prop_oneof![Just(2u64), Just(3), Just(5)], which in 0usize..3) {
        let d = 8;
        let law = match which {
            0 => FormalGroupLaw::multiplicative(&fgl::scalars(Domain::PLocal(p)), d),
            1 => FormalGroupLaw::additive(&fgl::scalars(Domain::PrimeField(p)), d),
            _ => fgl::honda(p, 1, d, GeneratorKind::Hazewinkel).unwrap(),
        };
        let ps = p_series(&law, p).unwrap();
        let ring = law.ring();
        let (x, y) = (Series::var(ring, 2, 0, d), Series::var(ring, 2, 1, d));
        let lhs = ps.substitute(&[law.series().clone()]).unwrap();
        let px = ps.substitute(&[x]).unwrap();
        let py = ps.substitute(&[y]).unwrap();
        prop_assert_eq!(lhs, law.series().substitute(&[px, py]).unwrap());
    }

    #[test]
    fn eta_r_is_multiplicative(ea in prop::collection::vec(0u32..3, 2), eb in prop::collection::vec(0u32..3, 2), c in -5i64..=5) {
        let h = hopf::bp(3, 12, GeneratorKind::Hazewinkel).unwrap();
        let a_ring = h.base();
        let mono = |e: &[u32]| Poly::gen(a_ring, 0).pow(e[0]).checked_mul(&Poly::gen(a_ring, 1).pow(e[1])).unwrap();
        let (a, b) = (mono(&ea).checked_add(&Poly::from_int(a_ring, c)).unwrap(), mono(&eb));
        if a.checked_mul(&b).unwrap().degrees().iter().any(|&d| d > 12) {
            return Ok(());
        }
        let eta = h.eta_r_map();
        let lhs = eta.apply(&a.checked_mul(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, eta.apply(&a).unwrap().checked_mul(&eta.apply(&b).unwrap()).unwrap());
    }

    #[test]
    fn equal_labels_compare_equivalent(i in 0usize..8, j in 0usize..8) {
        let names = ["e1", "k-model", "e2", "e2-v1-inverted", "k1", "k1-model", "k2", "k1-v2"];
        let (r, s) = (builtin(names[i], 3).unwrap(), builtin(names[j], 3).unwrap());
        let (lr, ls) = (r.classify_stratum(8, 16).unwrap(), s.classify_stratum(8, 16).unwrap());
        let report = landweber::change_of_rings_compare(&r, &s, 8, 16).unwrap();
        prop_assert_eq!(report.equivalent, lr == ls);
        let json = serde_json::to_string(&report).unwrap();
        prop_assert_eq!(serde_json::from_str::<serde_json::Value>(&json).unwrap(), serde_json::to_value(&report).unwrap());
    }
}

proptest! {
    #[test]
    fn ext1_order_is_trivial_off_the_image_of_j(p in prop_oneof![Just(3u64), Just(5), Just(7), Just(11), Just(13)], k in 1u32..=30) {
        if k % (p as u32 - 1) != 0 {
            prop_assert_eq!(numtheory::expected_ext1_order(p, k), BigInt::one());
        }
        if k >= 3 && k % 2 == 1 {
            prop_assert_eq!(numtheory::zeta_denominator(k), BigInt::one());
        }
    }
}
