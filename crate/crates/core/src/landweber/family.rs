use std::collections::BTreeMap;

use super::{AlgebraOverBase, AlgebraSpec, LandweberError, Point, Tail};
use crate::graded::{GeneratorSpec, RingSpec};

fn ring(scalars: &str, gens: &[(&str, i32)], inverted: &[&str], relations: &[&str]) -> RingSpec {
    RingSpec {
        scalars: scalars.into(),
        p: None,
        generators: gens.iter().map(|(n, d)| GeneratorSpec { name: n.to_string(), degree: *d }).collect(),
        relations: relations.iter().map(|r| r.to_string()).collect(),
        inverted: inverted.iter().map(|r| r.to_string()).collect(),
    }
}

fn spec(name: &str, p: u64, n: u32, ring: RingSpec, images: &[(&str, String)], tail: Tail) -> AlgebraSpec {
    AlgebraSpec {
        name: Some(name.into()),
        p,
        n,
        ring,
        v_images: images.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<BTreeMap<_, _>>(),
        tail,
    }
}

pub fn builtin_names() -> &'static [&'static str] {
    &[
        "k-model", "e1", "e2", "e2-v1-inverted", "k1", "k1-model", "k2", "k1-v2", "bp", "bp-over-i1", "bp-mod-i1", "bp-mod-i2", "bp1", "z-local",
        "rational", "zero",
    ]
}

/// Built-in algebras at the prime p, in algebraic grading (deg v_k = p^k − 1).
pub fn builtin(name: &str, p: u64) -> Result<AlgebraOverBase, LandweberError> {
    if !crate::arith::is_prime(p) {
        return Err(LandweberError::Input(format!("{p} is not prime")));
    }
    let d = |k: u32| (p.pow(k) - 1) as i32;
    let zp = "Z_(p)";
    let fp = "F_p";
    let id = |k: u32| (["v1", "v2", "v3"][k as usize - 1], format!("v{k}"));
    let bp_gens = [("v1", d(1)), ("v2", d(2)), ("v3", d(3))];
    let s = match name {
        // ℤ_(p)[u^±1] with v1 ↦ u^(p−1): the p-local complex K-theory coefficients
        "k-model" => spec(name, p, 0, ring(zp, &[("u", 1)], &["u"], &[]), &[("v1", format!("u^{}", p - 1))], Tail::Zero),
        "e1" => spec(name, p, 0, ring(zp, &[("v1", d(1))], &["v1"], &[]), &[id(1)], Tail::Zero),
        "e2" => spec(name, p, 0, ring(zp, &[("v1", d(1)), ("v2", d(2))], &["v2"], &[]), &[id(1), id(2)], Tail::Zero),
        "e2-v1-inverted" => spec(name, p, 0, ring(zp, &[("v1", d(1)), ("v2", d(2))], &["v1", "v2"], &[]), &[id(1), id(2)], Tail::Zero),
        "k1" => spec(name, p, 1, ring(fp, &[("v1", d(1))], &["v1"], &[]), &[id(1)], Tail::Zero),
        "k1-model" => spec(name, p, 1, ring(fp, &[("u", 1)], &["u"], &[]), &[("v1", format!("u^{}", p - 1))], Tail::Zero),
        "k2" => spec(name, p, 2, ring(fp, &[("v2", d(2))], &["v2"], &[]), &[id(2)], Tail::Zero),
        "k1-v2" => spec(name, p, 1, ring(fp, &[("v1", d(1)), ("v2", d(2))], &["v2"], &[]), &[id(1), id(2)], Tail::Zero),
        "bp" => spec(name, p, 0, ring(zp, &bp_gens, &[], &[]), &[id(1), id(2), id(3)], Tail::Open),
        "bp-over-i1" => spec(name, p, 1, ring(fp, &bp_gens, &[], &[]), &[id(1), id(2), id(3)], Tail::Open),
        "bp-mod-i1" => spec(name, p, 0, ring(fp, &bp_gens, &[], &[]), &[id(1), id(2), id(3)], Tail::Open),
        "bp-mod-i2" => spec(name, p, 0, ring(fp, &[("v2", d(2)), ("v3", d(3))], &[], &[]), &[id(2), id(3)], Tail::Open),
        "bp1" => spec(name, p, 0, ring(zp, &[("v1", d(1))], &[], &[]), &[id(1)], Tail::Zero),
        "z-local" => spec(name, p, 0, ring(zp, &[], &[], &[]), &[], Tail::Zero),
        "rational" => spec(name, p, 0, ring("Q", &[], &[], &[]), &[], Tail::Zero),
        "zero" => spec(name, p, 0, ring(zp, &[], &[], &["1"]), &[], Tail::Zero),
        other => return Err(LandweberError::Input(format!("unknown built-in algebra {other:?}; known: {}", builtin_names().join(", ")))),
    };
    AlgebraOverBase::from_spec(&s)
}

/// Ten pairs of Landweber exact built-ins for the comparator.
pub fn comparison_pairs() -> [(&'static str, &'static str); 10] {
    [
        ("k-model", "e1"),
        ("e1", "e2"),
        ("e1", "e2-v1-inverted"),
        ("k1", "k1-model"),
        ("k1", "k2"),
        ("k1-v2", "k2"),
        ("bp", "e2"),
        ("rational", "e1"),
        ("k-model", "e2-v1-inverted"),
        ("bp", "bp-over-i1"),
    ]
}

/// Geometric points used to compare algebra heights with formal group law heights.
pub fn specialization_corpus(name: &str, p: u64) -> Vec<Point> {
    match name {
        "k-model" => vec![Point::new(&[("u", 1)], 0), Point::new(&[("u", 1)], p), Point::new(&[("u", 2)], p)],
        "e1" => vec![Point::new(&[("v1", 1)], 0), Point::new(&[("v1", 1)], p), Point::new(&[("v1", -1)], p)],
        "e2" => vec![
            Point::new(&[("v1", 0), ("v2", 1)], 0),
            Point::new(&[("v1", 1), ("v2", 1)], p),
            Point::new(&[("v1", 0), ("v2", 1)], p),
        ],
        "e2-v1-inverted" => vec![Point::new(&[("v1", 1), ("v2", 1)], 0), Point::new(&[("v1", 1), ("v2", 1)], p)],
        "k1" => vec![Point::new(&[("v1", 1)], p)],
        "k1-model" => vec![Point::new(&[("u", 1)], p)],
        "k2" => vec![Point::new(&[("v2", 1)], p)],
        "k1-v2" => vec![Point::new(&[("v1", 1), ("v2", 1)], p), Point::new(&[("v1", 0), ("v2", 1)], p)],
        "rational" => vec![Point::new(&[], 0)],
        _ => Vec::new(),
    }
}
