use super::*;

fn b(name: &str) -> AlgebraOverBase {
    builtin(name, 3).unwrap()
}

#[test]
fn heights() {
    assert_eq!(b("e1").algebra_height(8).unwrap(), AlgebraHeight::Finite(1));
    assert_eq!(b("k-model").algebra_height(8).unwrap(), AlgebraHeight::Finite(1));
    assert_eq!(b("e2").algebra_height(8).unwrap(), AlgebraHeight::Finite(2));
    assert_eq!(b("e2-v1-inverted").algebra_height(8).unwrap(), AlgebraHeight::Finite(1));
    assert_eq!(b("zero").algebra_height(8).unwrap(), AlgebraHeight::Finite(-1));
    assert_eq!(b("rational").algebra_height(8).unwrap(), AlgebraHeight::Finite(0));
    assert_eq!(b("k2").algebra_height(8).unwrap(), AlgebraHeight::Finite(2));
    assert_eq!(b("z-local").algebra_height(8).unwrap(), AlgebraHeight::Infinite);
    assert!(matches!(b("bp").algebra_height(8).unwrap(), AlgebraHeight::InfiniteWithinBound(_)));
    assert_eq!(b("bp").algebra_height(2).unwrap(), AlgebraHeight::InfiniteWithinBound(2));
}

#[test]
fn exactness() {
    let v = b("e1").is_landweber_exact(16).unwrap();
    assert!(v.exact);
    assert_eq!(v.steps.len(), 2);
    assert_eq!(v.steps[1].method, "unit");
    for name in ["k-model", "e2", "e2-v1-inverted", "k1", "k1-model", "k2", "k1-v2", "rational", "zero"] {
        assert!(b(name).is_landweber_exact(16).unwrap().exact, "{name}");
    }
    let bp = b("bp").is_landweber_exact(16).unwrap();
    assert!(bp.exact && bp.within_bound);
    for name in ["bp-mod-i1", "bp-mod-i2"] {
        let f = b(name).is_landweber_exact(16).unwrap().failure.unwrap();
        assert_eq!(f.k, 0);
        assert_eq!(f.reason, "3·1 = 0 on a nonzero ring");
    }
    assert_eq!(b("bp1").is_landweber_exact(16).unwrap().failure.unwrap().k, 2);
    assert_eq!(b("z-local").is_landweber_exact(16).unwrap().failure.unwrap().k, 1);
}

#[test]
fn zero_divisors_are_found() {
    let spec = AlgebraSpec {
        name: None,
        p: 3,
        n: 1,
        ring: RingSpec {
            scalars: "F_3".into(),
            p: None,
            generators: vec![crate::graded::GeneratorSpec { name: "x".into(), degree: 2 }],
            relations: vec!["x^2".into()],
            inverted: vec![],
        },
        v_images: [("v1".to_string(), "x".to_string())].into_iter().collect(),
        tail: Tail::Zero,
    };
    let a = AlgebraOverBase::from_spec(&spec).unwrap();
    let f = a.is_landweber_exact(12).unwrap().failure.unwrap();
    assert_eq!((f.k, f.witness.as_str()), (1, "x"));
}

#[test]
fn fibres_and_labels() {
    assert_eq!(b("e1").geometric_fiber_heights(8, 16).unwrap().heights, vec![0, 1]);
    assert_eq!(b("k2").geometric_fiber_heights(8, 16).unwrap().heights, vec![2]);
    assert!(b("zero").geometric_fiber_heights(8, 16).unwrap().heights.is_empty());
    assert_eq!(b("e2").geometric_fiber_heights(8, 16).unwrap().heights, vec![0, 1, 2]);
    assert_eq!(b("k-model").classify_stratum(8, 16).unwrap().label, "Z^0 ∩ U^2");
    assert_eq!(b("k1").classify_stratum(8, 16).unwrap().label, "Z^1 ∩ U^2");
    assert_eq!(b("k2").classify_stratum(8, 16).unwrap().label, "Z^2 ∩ U^3");
    let bp = b("bp").classify_stratum(8, 16).unwrap();
    assert_eq!((bp.label.as_str(), bp.min_factorization_index), ("Z^0", None));
    assert_eq!(b("e1").classify_stratum(8, 16).unwrap().min_factorization_index, Some(2));
    assert!(matches!(b("bp-mod-i1").classify_stratum(8, 16), Err(LandweberError::NotLandweberExact { k: 0, .. })));
    let json = serde_json::to_value(b("e1").classify_stratum(8, 16).unwrap()).unwrap();
    assert_eq!(json["N"], 1);
    assert_eq!(serde_json::to_value(&bp).unwrap()["N"], "infinity within bound 4");
}

#[test]
fn localization_keeps_exactness() {
    for (name, k) in [("e2", 1), ("bp", 1), ("bp", 2), ("k1-v2", 1)] {
        let loc = b(name).localized(k).unwrap();
        assert!(loc.is_landweber_exact(16).unwrap().exact, "{name} at v{k}");
    }
}

#[test]
fn heights_match_formal_group_laws() {
    for name in builtin_names() {
        let a = b(name);
        let points = specialization_corpus(name, 3);
        if points.is_empty() {
            continue;
        }
        let mut best = -1;
        for pt in &points {
            match a.fgl_height_at(pt, 3).unwrap() {
                Height::Finite(h) => best = best.max(h as i32),
                other => panic!("{name}: unexpected {other}"),
            }
        }
        assert_eq!(AlgebraHeight::Finite(best), a.algebra_height(8).unwrap(), "{name}");
    }
}

#[test]
fn comparator() {
    let r = change_of_rings_compare(&b("k-model"), &b("e1"), 8, 16).unwrap();
    assert!(r.equivalent);
    assert!(r.basis.starts_with("classification-based"));
    assert!(r.left.checks.iter().all(|c| c.holds == Some(true)), "{:?}", r.left.checks);
    assert!(!change_of_rings_compare(&b("e1"), &b("e2"), 8, 16).unwrap().equivalent);
    for (x, y) in comparison_pairs() {
        let (lx, ly) = (b(x).classify_stratum(8, 16).unwrap(), b(y).classify_stratum(8, 16).unwrap());
        assert_eq!(change_of_rings_compare(&b(x), &b(y), 8, 16).unwrap().equivalent, lx == ly, "{x} vs {y}");
    }
    let bp = change_of_rings_compare(&b("bp"), &b("bp-over-i1"), 8, 12).unwrap();
    let ext0 = bp.ext0.unwrap();
    assert_eq!(ext0.left_ranks[0], 1);
    assert!(!ext0.agree);
    assert!(matches!(change_of_rings_compare(&b("bp1"), &b("e1"), 8, 16), Err(LandweberError::UnclassifiedAlgebra(_))));
}

#[test]
fn json_input() {
    let text = r#"{"p":3,"n":0,"ring":{"scalars":"Z_(p)","generators":[{"name":"v1","degree":2}],"inverted":["v1"]},"v_images":{"v1":"v1"}}"#;
    let a = AlgebraOverBase::from_json(text).unwrap();
    assert_eq!(a.classify_stratum(8, 16).unwrap().label, "Z^0 ∩ U^2");
    let bad = r#"{"p":3,"n":0,"ring":{"scalars":"Z_(p)","generators":[{"name":"v1","degree":2}]},"v_images":{"v1":"v1^2"}}"#;
    assert!(matches!(AlgebraOverBase::from_json(bad), Err(LandweberError::Input(_))));
    let not_over = r#"{"p":3,"n":1,"ring":{"scalars":"Z_(p)"}}"#;
    assert!(AlgebraOverBase::from_json(not_over).is_err());
}
