use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{HopfAlgebroid, HopfError};
use crate::graded::{format_terms, Generator, Poly, RingSpec, Terms};

/// The `hopf.json` document. Γ lists A's generators first; the remaining ones are the t's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "A")]
    pub a: RingSpec,
    #[serde(rename = "Gamma")]
    pub gamma: RingSpec,
    #[serde(rename = "etaR")]
    pub eta_r: BTreeMap<String, String>,
    #[serde(rename = "Delta")]
    pub delta: BTreeMap<String, String>,
    pub c: BTreeMap<String, String>,
    /// Defaults to ε(t) = 0 for every t.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<BTreeMap<String, String>>,
    pub truncation: i32,
}

/// Prints an element of Γ ⊗_A Γ as a sum of `(x)⊗(y)` groups, one per right-hand monomial.
pub fn format_tensor(h: &HopfAlgebroid, p: &Poly) -> String {
    let na = h.base().ngens();
    let nt = h.nt();
    let mut groups: BTreeMap<(i32, Vec<i32>), Terms> = BTreeMap::new();
    for (m, c) in p.terms() {
        let right: Vec<i32> = m[na + nt..na + 2 * nt].to_vec();
        let deg: i32 = right.iter().zip(h.t_generators()).map(|(e, g)| e * g.degree).sum();
        groups.entry((deg, right)).or_default().insert(m[..na + nt].to_vec(), c.clone());
    }
    if groups.is_empty() {
        return "0".into();
    }
    let gamma = h.gamma();
    groups
        .into_iter()
        .map(|((_, right), left)| {
            let mut rm = vec![0; na];
            rm.extend(right);
            let mut rt = Terms::new();
            rt.insert(rm, BigRational::from_integer(1.into()));
            format!("({})⊗({})", format_terms(gamma, &left), format_terms(gamma, &rt))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Splits `±[c*](x)⊗(y) ± …` into (coefficient, x, y) triples; `@` is accepted for `⊗`.
pub(crate) fn split_tensor(text: &str) -> Result<Vec<(BigRational, String, String)>, String> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |msg: &str| format!("tensor expression {text:?}: {msg}");
    let mut out = Vec::new();
    let mut pos = 0;
    if chars.is_empty() || chars == ['0'] {
        return Ok(out);
    }
    let group = |pos: &mut usize| -> Result<String, String> {
        if chars.get(*pos) != Some(&'(') {
            return Err(bad("expected '('"));
        }
        let start = *pos + 1;
        let mut depth = 0;
        while *pos < chars.len() {
            match chars[*pos] {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        let s: String = chars[start..*pos].iter().collect();
                        *pos += 1;
                        return Ok(s);
                    }
                }
                _ => {}
            }
            *pos += 1;
        }
        Err(bad("unbalanced parentheses"))
    };
    while pos < chars.len() {
        let mut sign = BigRational::from_integer(1.into());
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                sign = -sign;
                pos += 1;
            }
            _ if pos > 0 => return Err(bad("expected '+' or '-'")),
            _ => {}
        }
        if chars.get(pos).is_some_and(|c| c.is_ascii_digit()) {
            let start = pos;
            while chars.get(pos).is_some_and(|c| c.is_ascii_digit() || *c == '/') {
                pos += 1;
            }
            let s: String = chars[start..pos].iter().collect();
            let c: BigRational = s.parse().map_err(|_| bad("bad coefficient"))?;
            sign *= c;
            if chars.get(pos) != Some(&'*') {
                return Err(bad("expected '*' after a coefficient"));
            }
            pos += 1;
        }
        let x = group(&mut pos)?;
        if !matches!(chars.get(pos), Some('⊗') | Some('@')) {
            return Err(bad("expected '⊗'"));
        }
        pos += 1;
        let y = group(&mut pos)?;
        out.push((sign, x, y));
    }
    Ok(out)
}

/// Parses `±[c*](x)⊗(y) ± …` into left form; `@` is accepted for `⊗`.
pub fn parse_tensor(h: &HopfAlgebroid, text: &str) -> Result<Poly, HopfError> {
    let mut acc = Poly::zero(&h.tensor_ring(2));
    for (c, x, y) in split_tensor(text).map_err(HopfError::Input)? {
        let x = Poly::parse(h.gamma(), &x)?;
        let y = Poly::parse(h.gamma(), &y)?;
        acc = &acc + &h.tensor2(&x, &y)?.scale(&c);
    }
    Ok(acc)
}

impl HopfSpec {
    pub fn build(&self) -> Result<HopfAlgebroid, HopfError> {
        let a = self.a.build()?;
        let gamma_gens = &self.gamma.generators;
        if gamma_gens.len() < a.ngens() || a.generators().iter().zip(gamma_gens).any(|(x, y)| x.name != y.name || x.degree != y.degree) {
            return Err(HopfError::Input("Gamma must list the generators of A first".into()));
        }
        let t_gens: Vec<Generator> = gamma_gens[a.ngens()..].iter().map(|g| Generator { name: g.name.clone(), degree: g.degree }).collect();
        let gamma = a.extend(&t_gens)?;
        let lookup = |map: &BTreeMap<String, String>, name: &str, what: &str| {
            map.get(name).cloned().ok_or_else(|| HopfError::Input(format!("{what} missing for {name}")))
        };
        let eta_r = a
            .generators()
            .iter()
            .map(|g| Ok(Poly::parse(&gamma, &lookup(&self.eta_r, &g.name, "etaR")?)?))
            .collect::<Result<Vec<_>, HopfError>>()?;
        let eps = t_gens
            .iter()
            .map(|g| match &self.epsilon {
                Some(m) => Ok(Poly::parse(&a, &lookup(m, &g.name, "epsilon")?)?),
                None => Ok(Poly::zero(&a)),
            })
            .collect::<Result<Vec<_>, HopfError>>()?;
        let anti = t_gens
            .iter()
            .map(|g| Ok(Poly::parse(&gamma, &lookup(&self.c, &g.name, "c")?)?))
            .collect::<Result<Vec<_>, HopfError>>()?;
        let name = self.name.clone().unwrap_or_else(|| "custom".into());
        let t2 = HopfAlgebroid::build_tensor(&a, &t_gens, 2)?;
        let partial = HopfAlgebroid::new(&name, &a, &t_gens, self.truncation, eta_r.clone(), eps.clone(), vec![Poly::zero(&t2); t_gens.len()], anti.clone())?;
        let delta = t_gens.iter().map(|g| parse_tensor(&partial, &lookup(&self.delta, &g.name, "Delta")?)).collect::<Result<Vec<_>, _>>()?;
        HopfAlgebroid::new(&name, &a, &t_gens, self.truncation, eta_r, eps, delta, anti)
    }

    pub fn from_hopf(h: &HopfAlgebroid) -> HopfSpec {
        let a_names = h.base().generators().iter().map(|g| g.name.clone());
        let t_names: Vec<String> = h.t_generators().iter().map(|g| g.name.clone()).collect();
        HopfSpec {
            name: Some(h.name().to_string()),
            a: RingSpec::from_ring(h.base()),
            gamma: RingSpec::from_ring(h.gamma()),
            eta_r: a_names.enumerate().map(|(i, n)| (n, h.eta_r(i).to_string())).collect(),
            delta: t_names.iter().enumerate().map(|(j, n)| (n.clone(), format_tensor(h, h.delta(j)))).collect(),
            c: t_names.iter().enumerate().map(|(j, n)| (n.clone(), h.antipode(j).to_string())).collect(),
            epsilon: Some(t_names.iter().enumerate().map(|(j, n)| (n.clone(), h.epsilon(j).to_string())).collect()),
            truncation: h.trunc(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::GeneratorKind;
    use crate::hopf::bp;

    #[test]
    fn round_trip_and_fault_injection() {
        let h = bp(3, 10, GeneratorKind::Hazewinkel).unwrap();
        let spec = HopfSpec::from_hopf(&h);
        let text = serde_json::to_string(&spec).unwrap();
        let back: HopfSpec = serde_json::from_str(&text).unwrap();
        let h2 = back.build().unwrap();
        assert_eq!(HopfSpec::from_hopf(&h2), spec);
        assert!(h2.check_axioms().all_pass());

        let mut broken = spec.clone();
        broken.delta.insert("t1".into(), "(t1)⊗(1)".into());
        let report = broken.build().unwrap().check_axioms();
        assert!(!report.all_pass());
        let first = report.failures().next().unwrap();
        assert_eq!(first.generator.as_deref(), Some("t1"));
    }

    #[test]
    fn tensor_grammar() {
        let h = bp(3, 10, GeneratorKind::Hazewinkel).unwrap();
        let x = parse_tensor(&h, "(t1)⊗(v1) - 2*(1)@(t1^2)").unwrap();
        // v1 in the right factor crosses the tensor sign as eta_R(v1) = v1 + 3 t1
        let y = parse_tensor(&h, "(v1*t1 + 3*t1^2)⊗(1) - 2*(1)⊗(t1^2)").unwrap();
        assert_eq!(x, y);
        assert_eq!(parse_tensor(&h, &format_tensor(&h, &x)).unwrap(), x);
        assert!(parse_tensor(&h, "(t1)(1)").is_err());
    }
}
