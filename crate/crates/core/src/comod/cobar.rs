use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{ComodError, GradedComodule};
use crate::arith::{domain_smith, kernel_basis, rank, Domain, QMatrix};
use crate::graded::{Mono, Poly, RingMap};

/// Basis cell of C^s = Γ̄^{⊗s} ⊗ M: a generator index and a monomial of T_s over A/J_k.
pub type Cell = (usize, Mono);

#[derive(Debug)]
pub struct CobarComplex {
    pub prime: Option<u64>,
    pub domain: Domain,
    pub s_max: usize,
    pub t_max: i32,
    /// bases[s][t]
    bases: Vec<BTreeMap<i32, Vec<Cell>>>,
    /// diffs[s][t]: C^{s,t} → C^{s+1,t}, for s < s_max
    diffs: Vec<BTreeMap<i32, QMatrix>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtEntry {
    pub s: usize,
    pub t: i32,
    /// Invariant factors: 0 marks a free summand, q a cyclic summand of order q.
    pub invariants: Vec<u64>,
}

/// Ext^{s,t} for s < s_max and t_min ≤ t ≤ t_max.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub grading: String,
    pub entries: Vec<ExtEntry>,
}

impl ExtTable {
    pub fn get(&self, s: usize, t: i32) -> Option<&ExtEntry> {
        self.entries.iter().find(|e| e.s == s && e.t == t)
    }

    /// Group order of a finite entry; None for a free or missing entry.
    pub fn order(&self, s: usize, t: i32) -> Option<u64> {
        let e = self.get(s, t)?;
        if e.invariants.contains(&0) {
            return None;
        }
        Some(e.invariants.iter().product())
    }

    pub fn is_zero(&self, s: usize, t: i32) -> bool {
        self.get(s, t).is_some_and(|e| e.invariants.is_empty())
    }
}

fn face_maps(m: &GradedComodule, s: usize) -> Result<Vec<Vec<RingMap>>, ComodError> {
    // faces[k] = [δ_0, …, δ_s] on T_s over A/J_k, all landing in T_{s+1} over A/J_k
    let mut out = Vec::new();
    for k in 0..m.generators().len() {
        let h = m.part(k);
        let target = h.tensor_ring(s + 1);
        let mut faces = Vec::new();
        faces.push(h.tensor_map(s, &target, &h.push(1, s + 1), |kk, j| h.t_in(s + 1, kk + 1, j))?);
        for i in 1..=s {
            let place = h.tensor_map(2, &target, &h.push(i - 1, s + 1), |kk, j| h.t_in(s + 1, i + kk - 1, j))?;
            let map = h.tensor_map(s, &target, &h.push(0, s + 1), |kk, j| {
                if kk < i {
                    h.t_in(s + 1, kk, j)
                } else if kk == i {
                    place.apply(h.delta(j)).expect("Delta lives in T_2")
                } else {
                    h.t_in(s + 1, kk + 1, j)
                }
            })?;
            faces.push(map);
        }
        out.push(faces);
    }
    Ok(out)
}

/// Inclusions T_s(A/J_k) → T_{s+1}(A/J_l) onto the first s factors.
fn inclusions(m: &GradedComodule, s: usize) -> Result<Vec<Vec<RingMap>>, ComodError> {
    let n = m.generators().len();
    let mut out = Vec::new();
    for k in 0..n {
        let hk = m.part(k);
        let mut row = Vec::new();
        for l in 0..n {
            let hl = m.part(l);
            let target = hl.tensor_ring(s + 1);
            let a = RingMap::by_name(hk.base(), &target, false)?;
            row.push(hk.tensor_map(s, &target, &a, |kk, j| hl.t_in(s + 1, kk, j))?);
        }
        out.push(row);
    }
    Ok(out)
}

fn reduced_basis(m: &GradedComodule, s: usize, t: i32) -> Result<Vec<Cell>, ComodError> {
    let mut out = Vec::new();
    for (k, g) in m.generators().iter().enumerate() {
        let h = m.part(k);
        let ring = h.tensor_ring(s);
        let na = h.base().ngens();
        let nt = h.nt();
        for mono in ring.monomial_basis(t - g.degree, 0)? {
            if (0..s).all(|f| mono[na + f * nt..na + (f + 1) * nt].iter().any(|&e| e != 0)) {
                out.push((k, mono));
            }
        }
    }
    Ok(out)
}

/// The reduced cobar complex C^{s,t} = (Γ̄^{⊗s} ⊗_A M)_t for s ≤ s_max, t ≤ t_max, with
/// d = Σ (−1)^i δ_i over the cofaces δ_0 = 1⊗−, δ_i = Δ on factor i, δ_{s+1} = ψ on M.
pub fn cobar_complex(m: &GradedComodule, s_max: usize, t_max: i32) -> Result<CobarComplex, ComodError> {
    let h = m.hopf();
    if h.base().has_inverted() || !h.base().is_connective() {
        return Err(ComodError::NonConnectiveBase(h.base().describe()));
    }
    if !(1..=3).contains(&s_max) {
        return Err(ComodError::Input(format!("s_max must be 1, 2 or 3, got {s_max}")));
    }
    if t_max > h.trunc() {
        return Err(ComodError::WindowExceeded { degree: t_max, lo: m.window().0, hi: h.trunc() });
    }
    if t_max > m.window().1 {
        return Err(ComodError::WindowExceeded { degree: t_max, lo: m.window().0, hi: m.window().1 });
    }
    if (0..h.nt()).any(|j| !h.epsilon(j).is_zero()) {
        return Err(ComodError::Unsupported("reduced cobar complex needs epsilon(t) = 0 on every t-generator".into()));
    }
    let t_min = m.window().0;
    let n = m.generators().len();
    let mut bases = Vec::new();
    for s in 0..=s_max {
        let mut per_t = BTreeMap::new();
        for t in t_min..=t_max {
            per_t.insert(t, reduced_basis(m, s, t)?);
        }
        bases.push(per_t);
    }
    let mut diffs = Vec::new();
    for s in 0..s_max {
        let faces = face_maps(m, s)?;
        let incl = inclusions(m, s)?;
        // ψ placed in factor s+1 of T_{s+1}(A/J_l)
        let mut psi_placed: Vec<Vec<Poly>> = Vec::new();
        for k in 0..n {
            let mut row = Vec::new();
            for l in 0..n {
                row.push(m.part(l).embed(s + 1, s + 1).apply(m.coaction_coefficient(k, l))?);
            }
            psi_placed.push(row);
        }
        let sign = |i: usize| if i.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
        let compute = |t: i32| -> Result<QMatrix, ComodError> {
            let src = &bases[s][&t];
            let dst = &bases[s + 1][&t];
            let index: BTreeMap<&Cell, usize> = dst.iter().enumerate().map(|(i, c)| (c, i)).collect();
            let mut mat = QMatrix::zeros(dst.len(), src.len());
            for (col, (k, mono)) in src.iter().enumerate() {
                let x = Poly::monomial(&m.part(*k).tensor_ring(s), mono.clone(), BigRational::one());
                let mut out: Vec<Poly> = (0..n).map(|l| Poly::zero(&m.part(l).tensor_ring(s + 1))).collect();
                for (i, f) in faces[*k].iter().enumerate() {
                    out[*k] = &out[*k] + &f.apply(&x)?.scale(&sign(i));
                }
                for l in 0..n {
                    let g = &psi_placed[*k][l];
                    if g.is_zero() {
                        continue;
                    }
                    let y = &incl[*k][l].apply(&x)? * g;
                    out[l] = &out[l] + &y.scale(&sign(s + 1));
                }
                for (l, p) in out.iter().enumerate() {
                    for (mono2, c) in p.terms() {
                        let cell = (l, mono2.clone());
                        let row = index.get(&cell).ok_or_else(|| {
                            ComodError::InvalidCoaction(format!("cobar differential leaves the reduced complex at (s, t) = ({}, {t})", s + 1))
                        })?;
                        mat[(*row, col)] = c.clone();
                    }
                }
            }
            Ok(mat)
        };
        let ts: Vec<i32> = (t_min..=t_max).collect();
        let results: Vec<(i32, Result<QMatrix, ComodError>)> = std::thread::scope(|scope| {
            let handles: Vec<_> = ts.iter().map(|&t| (t, scope.spawn(move || compute(t)))).collect();
            handles.into_iter().map(|(t, h)| (t, h.join().expect("cobar worker"))).collect()
        });
        let mut per_t = BTreeMap::new();
        for (t, r) in results {
            per_t.insert(t, r?);
        }
        diffs.push(per_t);
    }
    let domain = m.domain();
    Ok(CobarComplex { prime: domain.prime().or(h.base().domain().prime()), domain, s_max, t_max, bases, diffs })
}

impl CobarComplex {
    pub fn rank(&self, s: usize, t: i32) -> usize {
        self.bases.get(s).and_then(|b| b.get(&t)).map_or(0, Vec::len)
    }

    pub fn basis(&self, s: usize, t: i32) -> &[Cell] {
        self.bases.get(s).and_then(|b| b.get(&t)).map_or(&[], Vec::as_slice)
    }

    pub fn differential(&self, s: usize, t: i32) -> Option<&QMatrix> {
        self.diffs.get(s).and_then(|d| d.get(&t))
    }

    pub fn t_range(&self) -> impl Iterator<Item = i32> + '_ {
        self.bases[0].keys().copied()
    }

    /// Bidegrees (s, t) at which d^{s+1}∘d^{s} is not exactly zero.
    pub fn dd_failures(&self) -> Vec<(usize, i32)> {
        let mut bad = Vec::new();
        for s in 0..self.diffs.len().saturating_sub(1) {
            for (t, d0) in &self.diffs[s] {
                let d1 = &self.diffs[s + 1][t];
                if d0.cols() == 0 || d1.rows() == 0 {
                    continue;
                }
                let prod = d1.mul(d0).expect("composable shapes");
                if prod.entries().iter().any(|x| !self.domain.reduce(x.clone()).is_zero()) {
                    bad.push((s, *t));
                }
            }
        }
        bad
    }
}

fn to_u64(x: &BigRational) -> Result<u64, ComodError> {
    x.abs().to_integer().to_u64().ok_or_else(|| ComodError::Unsupported(format!("invariant {x} does not fit in 64 bits")))
}

/// Invariants of ker(B)/im(A) for free modules over the domain.
fn homology(domain: Domain, a: Option<&QMatrix>, b: &QMatrix, n: usize) -> Result<Vec<u64>, ComodError> {
    let field_order = match domain {
        Domain::PrimeField(p) => p,
        _ => 0,
    };
    let rank_b = if b.rows() == 0 { 0 } else { rank(domain, b) };
    if domain.is_field() {
        let rank_a = a.filter(|a| a.cols() > 0).map_or(0, |a| rank(domain, a));
        return Ok(vec![field_order; n - rank_b - rank_a]);
    }
    let kernel = if b.rows() == 0 {
        (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect()
    } else {
        kernel_basis(domain, b)?
    };
    let k = kernel.len();
    let Some(a) = a.filter(|a| a.cols() > 0 && k > 0) else {
        return Ok(vec![0; k]);
    };
    // coordinates of im(A) in the kernel basis K: solve K·X = A
    let kmat = QMatrix::from_columns(n, &kernel);
    let s = domain_smith(domain, &kmat, true)?;
    let (u, v) = (s.u.as_ref().expect("transforms"), s.v.as_ref().expect("transforms"));
    let mut cols = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let y = u.mul_vec(&a.column(j));
        let mut x = vec![BigRational::zero(); k];
        for i in 0..k {
            x[i] = &y[i] / &s.diag[i];
        }
        if y[k..].iter().any(|z| !domain.reduce(z.clone()).is_zero()) {
            return Err(ComodError::InvalidCoaction("image of the previous differential is not in the kernel".into()));
        }
        cols.push(v.mul_vec(&x));
    }
    let x = QMatrix::from_columns(k, &cols);
    let sx = domain_smith(domain, &x, false)?;
    let mut inv = vec![0; k - sx.rank()];
    let mut torsion = sx.non_unit_divisors().iter().map(to_u64).collect::<Result<Vec<_>, _>>()?;
    torsion.sort_unstable();
    inv.extend(torsion);
    Ok(inv)
}

/// Ext^{s,t} for s < s_max from the reduced cobar complex; invariants are reported over the
/// coefficient domain (p-powers over ℤ_(p), one p per dimension over 𝔽_p).
pub fn ext_groups(m: &GradedComodule, s_max: usize, t_max: i32) -> Result<(ExtTable, CobarComplex), ComodError> {
    let cx = cobar_complex(m, s_max, t_max)?;
    let mut entries = Vec::new();
    for s in 0..s_max {
        for t in cx.t_range().collect::<Vec<_>>() {
            let b = cx.differential(s, t).expect("computed differential");
            let a = if s == 0 { None } else { cx.differential(s - 1, t) };
            let invariants = homology(cx.domain, a, b, cx.rank(s, t))?;
            entries.push(ExtEntry { s, t, invariants });
        }
    }
    let table = ExtTable { p: cx.prime, grading: "algebraic".into(), entries };
    Ok((table, cx))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fgl::GeneratorKind;
    use crate::hopf::bp;
    use crate::numtheory::expected_ext1_order;

    #[test]
    fn bp_ext_at_three() {
        let h = Arc::new(bp(3, 16, GeneratorKind::Hazewinkel).unwrap());
        let a = GradedComodule::trivial(h, (0, 16)).unwrap();
        let (table, cx) = ext_groups(&a, 2, 16).unwrap();
        assert!(cx.dd_failures().is_empty());
        assert_eq!(cx.rank(1, 2), 1);
        assert_eq!(table.get(0, 0).unwrap().invariants, vec![0]);
        for t in 1..=16 {
            assert!(table.is_zero(0, t), "Ext^0,{t}");
            if t % 2 == 1 {
                assert!(table.is_zero(1, t), "Ext^1,{t}");
            }
        }
        for k in [2, 4, 6, 8, 10] {
            let expected = expected_ext1_order(3, k as u32).to_u64().unwrap();
            assert_eq!(table.order(1, k), Some(expected), "Ext^1,{k}");
        }
        assert_eq!(table.get(1, 2).unwrap().invariants, vec![3]);
    }

    #[test]
    fn mod_p_ext_and_primitives_agree() {
        let h = Arc::new(bp(3, 12, GeneratorKind::Hazewinkel).unwrap());
        for n in 0..=2 {
            let ideal = h.chromatic_ideal(n).unwrap();
            let m = GradedComodule::cyclic(h.clone(), &ideal, 0, (0, 12)).unwrap();
            let (table, cx) = ext_groups(&m, 2, 12).unwrap();
            assert!(cx.dd_failures().is_empty());
            let prims = m.primitives((0, 12)).unwrap();
            for p in prims {
                assert_eq!(table.get(0, p.t).unwrap().invariants.len(), p.rank, "n = {n}, t = {}", p.t);
            }
        }
    }

    #[test]
    fn homology_of_small_complexes() {
        let z = |rows: &[&[i64]]| crate::arith::IntMatrix::from_i64(rows).to_rational();
        // Z --3--> Z --0--> Z: H^1 = Z/3 at the middle
        let a = z(&[&[3]]);
        let b = QMatrix::zeros(0, 1);
        assert_eq!(homology(Domain::PLocal(3), Some(&a), &b, 1).unwrap(), vec![3]);
        assert_eq!(homology(Domain::PLocal(2), Some(&a), &b, 1).unwrap(), Vec::<u64>::new());
        assert_eq!(homology(Domain::PrimeField(3), Some(&z(&[&[1], &[0]])), &z(&[&[0, 1]]), 2).unwrap(), Vec::<u64>::new());
    }
}
