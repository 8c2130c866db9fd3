//! Hopf algebroids (A, Γ) with Γ = A[t_1, t_2, …] polynomial over the left unit, stored by
//! their structure maps on generators and checked against the cogroupoid axioms.
//!
//! Elements of Γ^{⊗s} (tensor over A) are kept in *left form*: polynomials in the ring
//! T_s = A[t^{(1)}, …, t^{(s)}] where A-coefficients sit in front of the first factor.
//! An A-coefficient crossing k tensor signs becomes push(k, a) = η_R applied k times.

mod algebras;
mod axioms;
mod ideal;
pub(crate) mod json;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::graded::{Generator, GradedError, Poly, Ring, RingMap};

pub use algebras::{bp, mu_rational, trivial};
pub use axioms::{AxiomOutcome, AxiomReport};
pub use ideal::{ring_map, InvariantCheck, Morphism, MorphismReport};
pub use json::{format_tensor, parse_tensor, HopfSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("truncation {have} is below the first generator degree {needed}")]
    TruncationTooSmall { needed: i32, have: i32 },
    #[error("ideal is not invariant: eta_R({gen}) - {gen} reduces to {residue}")]
    NotInvariant { gen: String, residue: String },
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("not a morphism of Hopf algebroids: {0}")]
    NotMorphism(String),
    #[error("{0}")]
    Input(String),
}

/// A truncated Hopf algebroid with Γ polynomial over A.
pub struct HopfAlgebroid {
    name: String,
    a: Ring,
    gamma: Ring,
    t_gens: Vec<Generator>,
    trunc: i32,
    eta_r: Vec<Poly>,
    eps: Vec<Poly>,
    delta: Vec<Poly>,
    anti: Vec<Poly>,
    tensors: Mutex<Vec<Ring>>,
    pushes: Mutex<HashMap<(usize, usize), Arc<RingMap>>>,
    embeds: Mutex<HashMap<(usize, usize), Arc<RingMap>>>,
}

impl std::fmt::Debug for HopfAlgebroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HopfAlgebroid").field("name", &self.name).field("a", &self.a.describe()).field("trunc", &self.trunc).finish()
    }
}

impl Clone for HopfAlgebroid {
    fn clone(&self) -> Self {
        HopfAlgebroid::new(&self.name, &self.a, &self.t_gens, self.trunc, self.eta_r.clone(), self.eps.clone(), self.delta.clone(), self.anti.clone())
            .expect("already validated shapes")
    }
}

fn tensor_name(name: &str, s: usize, k: usize) -> String {
    if s == 1 {
        name.to_string()
    } else {
        format!("{name}|{k}")
    }
}

impl HopfAlgebroid {
    /// Assembles the structure. `eta_r[i]` ∈ Γ for each A-generator, `eps[j]` ∈ A, `delta[j]` ∈ T_2
    /// and `anti[j]` ∈ Γ for each t-generator. No axioms are checked here.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        a: &Ring,
        t_gens: &[Generator],
        trunc: i32,
        eta_r: Vec<Poly>,
        eps: Vec<Poly>,
        delta: Vec<Poly>,
        anti: Vec<Poly>,
    ) -> Result<HopfAlgebroid, HopfError> {
        let gamma = a.extend(t_gens)?;
        let t2 = Self::build_tensor(a, t_gens, 2)?;
        let n = t_gens.len();
        if eta_r.len() != a.ngens() || eps.len() != n || delta.len() != n || anti.len() != n {
            return Err(HopfError::Input("structure maps must be given on every generator".into()));
        }
        let check = |p: &Poly, r: &Ring, what: &str| -> Result<(), HopfError> {
            if crate::graded::same_ring(p.ring(), r) {
                Ok(())
            } else {
                Err(HopfError::Input(format!("{what} lives in the wrong ring")))
            }
        };
        for p in &eta_r {
            check(p, &gamma, "eta_R")?;
        }
        for p in &eps {
            check(p, a, "epsilon")?;
        }
        for p in &delta {
            check(p, &t2, "Delta")?;
        }
        for p in &anti {
            check(p, &gamma, "c")?;
        }
        Ok(HopfAlgebroid {
            name: name.to_string(),
            a: a.clone(),
            gamma: gamma.clone(),
            t_gens: t_gens.to_vec(),
            trunc,
            eta_r,
            eps,
            delta,
            anti,
            tensors: Mutex::new(vec![a.clone(), gamma, t2]),
            pushes: Mutex::new(HashMap::new()),
            embeds: Mutex::new(HashMap::new()),
        })
    }

    fn build_tensor(a: &Ring, t_gens: &[Generator], s: usize) -> Result<Ring, GradedError> {
        let mut gens = Vec::new();
        for k in 1..=s {
            for g in t_gens {
                gens.push(Generator { name: tensor_name(&g.name, s, k), degree: g.degree });
            }
        }
        a.extend(&gens)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Ring {
        &self.a
    }

    pub fn gamma(&self) -> &Ring {
        &self.gamma
    }

    pub fn t_generators(&self) -> &[Generator] {
        &self.t_gens
    }

    pub fn nt(&self) -> usize {
        self.t_gens.len()
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn eta_r(&self, gen: usize) -> &Poly {
        &self.eta_r[gen]
    }

    pub fn epsilon(&self, t: usize) -> &Poly {
        &self.eps[t]
    }

    pub fn delta(&self, t: usize) -> &Poly {
        &self.delta[t]
    }

    pub fn antipode(&self, t: usize) -> &Poly {
        &self.anti[t]
    }

    /// T_s = Γ^{⊗s} in left form; T_0 = A and T_1 = Γ.
    pub fn tensor_ring(&self, s: usize) -> Ring {
        let mut cache = self.tensors.lock().expect("tensor cache");
        while cache.len() <= s {
            let k = cache.len();
            cache.push(Self::build_tensor(&self.a, &self.t_gens, k).expect("fresh generator names"));
        }
        cache[s].clone()
    }

    /// Index in T_s of the j-th t-generator in factor k (1-based).
    pub fn t_index(&self, k: usize, j: usize) -> usize {
        self.a.ngens() + (k - 1) * self.nt() + j
    }

    /// The generator t_j^{(k)} of T_s.
    pub fn t_in(&self, s: usize, k: usize, j: usize) -> Poly {
        Poly::gen(&self.tensor_ring(s), self.t_index(k, j))
    }

    /// push(k): A → T_s, moving an A-coefficient across k tensor signs (k ≤ s).
    pub fn push(&self, k: usize, s: usize) -> Arc<RingMap> {
        assert!(k <= s);
        if let Some(m) = self.pushes.lock().expect("push cache").get(&(k, s)) {
            return m.clone();
        }
        let target = self.tensor_ring(s);
        let images: Vec<Poly> = if k == 0 {
            (0..self.a.ngens()).map(|i| Poly::gen(&target, i)).collect()
        } else {
            let place = self.embed(k, s);
            self.eta_r.iter().map(|e| place.apply(e).expect("ring of eta_R")).collect()
        };
        let m = Arc::new(RingMap::new(&self.a, &target, images, false).expect("push map"));
        self.pushes.lock().expect("push cache").insert((k, s), m.clone());
        m
    }

    /// Γ → T_s placing an element in factor k: t ↦ t^{(k)}, A ↦ push(k − 1).
    pub fn embed(&self, k: usize, s: usize) -> Arc<RingMap> {
        assert!(k >= 1 && k <= s);
        if let Some(m) = self.embeds.lock().expect("embed cache").get(&(k, s)) {
            return m.clone();
        }
        let target = self.tensor_ring(s);
        let mut images: Vec<Poly> = if k == 1 {
            (0..self.a.ngens()).map(|i| Poly::gen(&target, i)).collect()
        } else {
            let p = self.push(k - 1, s);
            (0..self.a.ngens()).map(|i| p.image_of(i)).collect()
        };
        for j in 0..self.nt() {
            images.push(self.t_in(s, k, j));
        }
        let m = Arc::new(RingMap::new(&self.gamma, &target, images, false).expect("embedding"));
        self.embeds.lock().expect("embed cache").insert((k, s), m.clone());
        m
    }

    /// A ring map out of T_s given by images of A (through `a_images`) and of each t^{(k)}_j.
    pub fn tensor_map(&self, s: usize, target: &Ring, a_images: &RingMap, t_images: impl Fn(usize, usize) -> Poly) -> Result<RingMap, HopfError> {
        let mut images: Vec<Poly> = (0..self.a.ngens()).map(|i| a_images.image_of(i)).collect();
        for k in 1..=s {
            for j in 0..self.nt() {
                images.push(t_images(k, j));
            }
        }
        Ok(RingMap::new(&self.tensor_ring(s), target, images, false)?)
    }

    /// η_R: A → Γ.
    pub fn eta_r_map(&self) -> Arc<RingMap> {
        self.push(1, 1)
    }

    /// ε: Γ → A.
    pub fn eps_map(&self) -> RingMap {
        let mut images: Vec<Poly> = (0..self.a.ngens()).map(|i| Poly::gen(&self.a, i)).collect();
        images.extend(self.eps.iter().cloned());
        RingMap::new(&self.gamma, &self.a, images, false).expect("augmentation")
    }

    /// Δ: Γ → Γ ⊗_A Γ as a ring map.
    pub fn delta_map(&self) -> RingMap {
        let t2 = self.tensor_ring(2);
        let mut images: Vec<Poly> = (0..self.a.ngens()).map(|i| Poly::gen(&t2, i)).collect();
        images.extend(self.delta.iter().cloned());
        RingMap::new(&self.gamma, &t2, images, false).expect("comultiplication")
    }

    /// c: Γ → Γ as a ring map (A ↦ η_R).
    pub fn antipode_map(&self) -> RingMap {
        let mut images: Vec<Poly> = self.eta_r.clone();
        images.extend(self.anti.iter().cloned());
        RingMap::new(&self.gamma, &self.gamma, images, false).expect("antipode")
    }

    /// η_L: A → Γ.
    pub fn eta_l(&self, a: &Poly) -> Poly {
        self.push(0, 1).apply(a).expect("element of A")
    }

    /// The element x ⊗ y of T_2 from x, y ∈ Γ.
    pub fn tensor2(&self, x: &Poly, y: &Poly) -> Result<Poly, HopfError> {
        let l = self.embed(1, 2).apply(x)?;
        let r = self.embed(2, 2).apply(y)?;
        Ok(l.checked_mul(&r)?)
    }

    /// Structure-map values as (label, polynomial) pairs, for scans such as p-integrality.
    pub fn structure_values(&self) -> Vec<(String, Poly)> {
        let mut out = Vec::new();
        for (i, g) in self.a.generators().iter().enumerate() {
            out.push((format!("eta_R({})", g.name), self.eta_r[i].clone()));
        }
        for (j, g) in self.t_gens.iter().enumerate() {
            out.push((format!("epsilon({})", g.name), self.eps[j].clone()));
            out.push((format!("Delta({})", g.name), self.delta[j].clone()));
            out.push((format!("c({})", g.name), self.anti[j].clone()));
        }
        out
    }

    pub fn describe(&self) -> String {
        let mut s = format!("{} (truncated at degree {})\nA = {}\n", self.name, self.trunc, self.a.describe());
        for (label, p) in self.structure_values() {
            if label.starts_with("Delta") {
                s.push_str(&format!("{label} = {}\n", format_tensor(self, &p)));
            } else {
                s.push_str(&format!("{label} = {p}\n"));
            }
        }
        s
    }
}
