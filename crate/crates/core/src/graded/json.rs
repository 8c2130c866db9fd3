use serde::{Deserialize, Serialize};

use super::{GradedError, Ring, RingBuilder};
use crate::arith::Domain;

/// The `ring.json` document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub scalars: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub inverted: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i32,
}

/// Accepts `Z`, `Q`, `Z_(p)`, `F_p` (with `p` given separately) and literal forms like `Z_(3)`, `F_3`.
pub fn parse_domain(scalars: &str, p: Option<u64>) -> Result<Domain, GradedError> {
    let bad = || GradedError::Parse(format!("unknown scalar domain {scalars:?}"));
    let prime = |s: &str| -> Result<u64, GradedError> {
        let q = if s == "p" { p.ok_or_else(|| GradedError::Parse("missing \"p\" for the scalar domain".into()))? } else { s.parse().map_err(|_| bad())? };
        if !crate::arith::is_prime(q) {
            return Err(GradedError::Parse(format!("{q} is not prime")));
        }
        Ok(q)
    };
    match scalars.trim() {
        "Z" => Ok(Domain::Integer),
        "Q" => Ok(Domain::Rational),
        s => {
            if let Some(rest) = s.strip_prefix("Z_(").and_then(|r| r.strip_suffix(')')) {
                Ok(Domain::PLocal(prime(rest)?))
            } else if let Some(rest) = s.strip_prefix("F_") {
                Ok(Domain::PrimeField(prime(rest)?))
            } else {
                Err(bad())
            }
        }
    }
}

impl RingSpec {
    pub fn build(&self) -> Result<Ring, GradedError> {
        let mut b = RingBuilder::new(parse_domain(&self.scalars, self.p)?);
        for g in &self.generators {
            b = b.generator(g.name.clone(), g.degree);
        }
        for i in &self.inverted {
            b = b.invert(i.clone());
        }
        for r in &self.relations {
            b = b.relation(r.clone());
        }
        b.build()
    }

    pub fn from_ring(ring: &Ring) -> RingSpec {
        let d = ring.domain();
        RingSpec {
            scalars: match d {
                Domain::Integer => "Z".into(),
                Domain::Rational => "Q".into(),
                Domain::PLocal(_) => "Z_(p)".into(),
                Domain::PrimeField(_) => "F_p".into(),
            },
            p: d.prime(),
            generators: ring.generators().iter().map(|g| GeneratorSpec { name: g.name.clone(), degree: g.degree }).collect(),
            relations: ring.relation_text().to_vec(),
            inverted: ring.inverted_names(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains_and_round_trip() {
        assert_eq!(parse_domain("Z_(p)", Some(3)).unwrap(), Domain::PLocal(3));
        assert_eq!(parse_domain("F_5", None).unwrap(), Domain::PrimeField(5));
        assert!(parse_domain("F_4", None).is_err());
        assert!(parse_domain("Z_(p)", None).is_err());
        let text = r#"{"scalars":"Z_(p)","p":3,"generators":[{"name":"v1","degree":2},{"name":"v2","degree":8}],"relations":["v2"],"inverted":[]}"#;
        let spec: RingSpec = serde_json::from_str(text).unwrap();
        let ring = spec.build().unwrap();
        assert_eq!(RingSpec::from_ring(&ring).build().unwrap(), ring);
    }
}
