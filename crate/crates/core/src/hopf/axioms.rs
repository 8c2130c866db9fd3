use serde::{Deserialize, Serialize};

use super::{format_tensor, HopfAlgebroid};
use crate::graded::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomOutcome {
    pub axiom: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub truncation: i32,
    pub axioms: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomOutcome> {
        self.axioms.iter().filter(|a| !a.passed)
    }
}

struct Probe<'a> {
    h: &'a HopfAlgebroid,
    axiom: &'static str,
    tensor: bool,
}

impl Probe<'_> {
    /// Compares lhs(g) and rhs(g) over the generators (in degree order), stopping at the first mismatch.
    fn run(&self, gens: Vec<(String, i32)>, f: impl Fn(usize) -> (Poly, Poly)) -> AxiomOutcome {
        let mut order: Vec<usize> = (0..gens.len()).collect();
        order.sort_by_key(|&i| gens[i].1);
        for i in order {
            let (l, r) = f(i);
            if l != r {
                let show = |p: &Poly| if self.tensor { format_tensor(self.h, p) } else { p.to_string() };
                return AxiomOutcome {
                    axiom: self.axiom.into(),
                    passed: false,
                    generator: Some(gens[i].0.clone()),
                    degree: Some(gens[i].1),
                    lhs: Some(show(&l)),
                    rhs: Some(show(&r)),
                };
            }
        }
        AxiomOutcome { axiom: self.axiom.into(), passed: true, generator: None, degree: None, lhs: None, rhs: None }
    }
}

pub(super) fn check(h: &HopfAlgebroid) -> AxiomReport {
    let a = h.base();
    let gamma = h.gamma();
    let t3 = h.tensor_ring(3);
    let a_gens: Vec<(String, i32)> = a.generators().iter().map(|g| (g.name.clone(), g.degree)).collect();
    let t_gens: Vec<(String, i32)> = h.t_generators().iter().map(|g| (g.name.clone(), g.degree)).collect();
    let na = a.ngens();
    let t = |j: usize| Poly::gen(gamma, na + j);
    let eps = h.eps_map();
    let eta_r = h.eta_r_map();
    let delta = h.delta_map();
    let anti = h.antipode_map();
    let mut out = Vec::new();

    out.push(Probe { h, axiom: "epsilon∘eta_R = id", tensor: false }.run(a_gens.clone(), |i| {
        (eps.apply(h.eta_r(i)).expect("ring"), Poly::gen(a, i))
    }));

    // (ε ⊗ id)Δ = id and (id ⊗ ε)Δ = id
    let left_counit = h
        .tensor_map(2, gamma, &h.push(0, 1), |k, j| if k == 1 { h.eta_l(h.epsilon(j)) } else { t(j) })
        .expect("counit map");
    out.push(Probe { h, axiom: "(epsilon⊗id)∘Delta = id", tensor: false }.run(t_gens.clone(), |j| {
        (left_counit.apply(h.delta(j)).expect("ring"), t(j))
    }));
    let right_counit = h
        .tensor_map(2, gamma, &h.push(0, 1), |k, j| if k == 1 { t(j) } else { eta_r.apply(h.epsilon(j)).expect("ring") })
        .expect("counit map");
    out.push(Probe { h, axiom: "(id⊗epsilon)∘Delta = id", tensor: false }.run(t_gens.clone(), |j| {
        (right_counit.apply(h.delta(j)).expect("ring"), t(j))
    }));

    // coassociativity in T_3
    let place12 = h.tensor_map(2, &t3, &h.push(0, 3), |k, j| h.t_in(3, k, j)).expect("placement");
    let place23 = h.tensor_map(2, &t3, &h.push(1, 3), |k, j| h.t_in(3, k + 1, j)).expect("placement");
    let delta_left = h
        .tensor_map(2, &t3, &h.push(0, 3), |k, j| if k == 1 { place12.apply(h.delta(j)).expect("ring") } else { h.t_in(3, 3, j) })
        .expect("Delta⊗id");
    let delta_right = h
        .tensor_map(2, &t3, &h.push(0, 3), |k, j| if k == 1 { h.t_in(3, 1, j) } else { place23.apply(h.delta(j)).expect("ring") })
        .expect("id⊗Delta");
    out.push(Probe { h, axiom: "(Delta⊗id)∘Delta = (id⊗Delta)∘Delta", tensor: false }.run(t_gens.clone(), |j| {
        (delta_left.apply(h.delta(j)).expect("ring"), delta_right.apply(h.delta(j)).expect("ring"))
    }));

    // Δ is a map of bimodules: Δ(η_R a) = 1 ⊗ η_R(a)
    let push2 = h.push(2, 2);
    out.push(Probe { h, axiom: "Delta∘eta_R = (1⊗eta_R)", tensor: true }.run(a_gens.clone(), |i| {
        (delta.apply(h.eta_r(i)).expect("ring"), push2.image_of(i))
    }));

    out.push(Probe { h, axiom: "c∘eta_R = eta_L", tensor: false }.run(a_gens.clone(), |i| {
        (anti.apply(h.eta_r(i)).expect("ring"), h.eta_l(&Poly::gen(a, i)))
    }));
    out.push(Probe { h, axiom: "c∘c = id", tensor: false }.run(t_gens.clone(), |j| (anti.apply(h.antipode(j)).expect("ring"), t(j))));

    let mu_c_id = h
        .tensor_map(2, gamma, &eta_r, |k, j| if k == 1 { h.antipode(j).clone() } else { t(j) })
        .expect("mu(c⊗id)");
    out.push(Probe { h, axiom: "mu∘(c⊗id)∘Delta = eta_R∘epsilon", tensor: false }.run(t_gens.clone(), |j| {
        (mu_c_id.apply(h.delta(j)).expect("ring"), eta_r.apply(h.epsilon(j)).expect("ring"))
    }));
    let mu_id_c = h
        .tensor_map(2, gamma, &h.push(0, 1), |k, j| if k == 1 { t(j) } else { h.antipode(j).clone() })
        .expect("mu(id⊗c)");
    out.push(Probe { h, axiom: "mu∘(id⊗c)∘Delta = eta_L∘epsilon", tensor: false }.run(t_gens.clone(), |j| {
        (mu_id_c.apply(h.delta(j)).expect("ring"), h.eta_l(h.epsilon(j)))
    }));

    AxiomReport { truncation: h.trunc(), axioms: out }
}

impl HopfAlgebroid {
    /// Runs every axiom on generators, reporting the first failing generator for each.
    pub fn check_axioms(&self) -> AxiomReport {
        check(self)
    }
}
