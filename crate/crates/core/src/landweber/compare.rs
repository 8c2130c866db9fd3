use std::sync::Arc;

use serde::Serialize;

use super::{AlgebraOverBase, LandweberError, StratumLabel, StratumTop};
use crate::comod::{locality_check, GradedComodule};
use crate::fgl::GeneratorKind;
use crate::graded::Poly;
use crate::hopf;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecessaryCheck {
    pub name: String,
    /// `None` when the check could not be decided for this presentation.
    pub holds: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideReport {
    pub algebra: String,
    pub ring: String,
    pub label: StratumLabel,
    pub checks: Vec<NecessaryCheck>,
}

/// Ext^0 ranks of BP_*/I_n (the comodule the stratum Z^n starts from) for each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ext0Check {
    pub t_max: i32,
    pub left_ranks: Vec<usize>,
    pub right_ranks: Vec<usize>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub grading: &'static str,
    pub left: SideReport,
    pub right: SideReport,
    pub equivalent: bool,
    pub verdict: String,
    pub basis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ext0: Option<Ext0Check>,
}

fn side(a: &AlgebraOverBase, bound: u32, degree_bound: i32) -> Result<SideReport, LandweberError> {
    let label = a.classify_stratum(bound, degree_bound).map_err(|e| LandweberError::UnclassifiedAlgebra(format!("{}: {e}", a.name())))?;
    let mut checks = Vec::new();
    let p = a.prime();
    let n = a.base_index();
    checks.push(NecessaryCheck {
        name: format!("I_{n} annihilates R"),
        holds: Some(n == 0 || Poly::from_int(a.ring(), p as i64).is_zero()),
        detail: if n == 0 { "I_0 = 0".into() } else { format!("{p}·1 = 0 and v_1, …, v_{} map to 0", n - 1) },
    });
    match label.top {
        StratumTop::Finite(big_n) => {
            let ideal: Vec<String> = (0..=big_n).map(|k| a.image(k).map(|f| f.to_string()).unwrap_or_default()).collect();
            let name = format!("R is I_{}-local", big_n + 1);
            match locality_check(std::slice::from_ref(a.ring()), &ideal, degree_bound) {
                Ok(r) => checks.push(NecessaryCheck { name, holds: Some(r.local), detail: r.summands[0].reason.clone() }),
                Err(e) => checks.push(NecessaryCheck { name, holds: None, detail: e.to_string() }),
            }
        }
        _ => checks.push(NecessaryCheck { name: "locality".into(), holds: Some(true), detail: "no locality condition when N = infinity".into() }),
    }
    let fibers = a.geometric_fiber_heights(bound, degree_bound)?;
    checks.push(NecessaryCheck {
        name: "geometric fibres realize every height n..N".into(),
        holds: Some(fibers.complete),
        detail: format!("{:?}", fibers.heights),
    });
    Ok(SideReport { algebra: a.name().to_string(), ring: a.ring().describe(), label, checks })
}

fn ext0_ranks(p: u64, n: u32, t_max: i32) -> Result<Vec<usize>, LandweberError> {
    let und = |e: String| LandweberError::Undecidable(e);
    let h = Arc::new(hopf::bp(p, t_max, GeneratorKind::Hazewinkel).map_err(|e| und(e.to_string()))?);
    let ideal = h.chromatic_ideal(n as usize).map_err(|e| und(e.to_string()))?;
    let m = GradedComodule::cyclic(h, &ideal, 0, (0, t_max)).map_err(|e| und(e.to_string()))?;
    let prims = m.primitives((0, t_max)).map_err(|e| und(e.to_string()))?;
    Ok(prims.iter().map(|d| d.rank).collect())
}

/// Compares the comodule categories of two Landweber exact algebras through their stratum labels.
pub fn change_of_rings_compare(r: &AlgebraOverBase, s: &AlgebraOverBase, bound: u32, degree_bound: i32) -> Result<CompareReport, LandweberError> {
    if r.prime() != s.prime() {
        return Err(LandweberError::UnclassifiedAlgebra(format!("primes differ: {} vs {}", r.prime(), s.prime())));
    }
    let left = side(r, bound, degree_bound)?;
    let right = side(s, bound, degree_bound)?;
    let equivalent = left.label.label == right.label.label;
    let verdict = if equivalent {
        format!("equivalent comodule categories: both algebras classify {}", left.label)
    } else {
        format!("not equivalent: {} vs {}", left.label, right.label)
    };
    let ext0 = if !r.ring().has_inverted() && !s.ring().has_inverted() {
        let t_max = degree_bound.clamp(0, 12);
        let left_ranks = ext0_ranks(r.prime(), r.base_index(), t_max)?;
        let right_ranks = ext0_ranks(r.prime(), s.base_index(), t_max)?;
        let agree = left_ranks == right_ranks;
        Some(Ext0Check { t_max, left_ranks, right_ranks, agree })
    } else {
        None
    };
    Ok(CompareReport {
        grading: "algebraic",
        left,
        right,
        equivalent,
        verdict,
        basis: "classification-based: the verdict compares stratum labels; the checks listed per side are necessary conditions, not a construction of the equivalence".into(),
        ext0,
    })
}
