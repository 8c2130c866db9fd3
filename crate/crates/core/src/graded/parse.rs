//! Parser for the polynomial grammar: terms `coef*gen^exp` joined by `+` and `-`, with
//! parentheses, rational literals `a/b`, and negative exponents `g^-1` or `g^{-1}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ring::add_terms;
use super::{GradedError, GradedRing, Poly, Ring, Terms};

pub fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '|')
}

pub fn parse_poly(ring: &Ring, text: &str) -> Result<Poly, GradedError> {
    let t = parse_terms(ring, text)?;
    Poly::from_terms(ring, t)
}

pub(crate) fn parse_terms(ring: &GradedRing, text: &str) -> Result<Terms, GradedError> {
    let mut p = Parser { ring, chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
    let t = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    ring: &'a GradedRing,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> GradedError {
        let s: String = self.chars.iter().collect();
        GradedError::Parse(format!("{msg} at position {} in {:?}", self.pos, s))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn constant(&self, c: BigRational) -> Terms {
        let mut t = Terms::new();
        if !c.is_zero() {
            t.insert(self.ring.one_mono(), c);
        }
        t
    }

    // products are taken without the ring's normal form so relations apply once, at the end
    fn raw_mul(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let m: Vec<i32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let mut one = Terms::new();
                one.insert(m, ca * cb);
                add_terms(crate::arith::Domain::Rational, &mut out, &one);
            }
        }
        out
    }

    fn expr(&mut self) -> Result<Terms, GradedError> {
        let mut acc = Terms::new();
        let mut sign = BigRational::one();
        match self.peek() {
            Some('-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            let t: Terms = t.into_iter().map(|(m, c)| (m, &c * &sign)).collect();
            add_terms(crate::arith::Domain::Rational, &mut acc, &t);
            match self.peek() {
                Some('+') => {
                    sign = BigRational::one();
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -BigRational::one();
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Terms, GradedError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.raw_mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Terms, GradedError> {
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                e
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    self.constant(BigRational::new(n, d))
                } else {
                    self.constant(BigRational::from_integer(n))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '|') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let i = self.ring.generator_index(&name).ok_or(GradedError::UnknownGenerator(name))?;
                let mut m = self.ring.one_mono();
                m[i] = 1;
                let mut t = Terms::new();
                t.insert(m, BigRational::one());
                t
            }
            Some('-') => {
                self.pos += 1;
                let f = self.factor()?;
                return Ok(f.into_iter().map(|(m, c)| (m, -c)).collect());
            }
            _ => return Err(self.error("expected a factor")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.exponent()?;
            return self.power(base, e);
        }
        Ok(base)
    }

    fn power(&self, base: Terms, e: i64) -> Result<Terms, GradedError> {
        if e < 0 {
            // only monomials may carry negative exponents
            if base.len() != 1 {
                return Err(self.error("negative power of a sum"));
            }
            let (m, c) = base.into_iter().next().expect("one term");
            let mut t = Terms::new();
            let c = num_traits::pow(c.recip(), e.unsigned_abs() as usize);
            t.insert(m.iter().map(|&x| x * e as i32).collect(), c);
            return Ok(t);
        }
        let mut acc = self.constant(BigRational::one());
        for _ in 0..e {
            acc = self.raw_mul(&acc, &base);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt, GradedError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("bad integer"))
    }

    fn exponent(&mut self) -> Result<i64, GradedError> {
        let braced = matches!(self.peek(), Some('{') | Some('('));
        let close = if self.peek() == Some('{') { '}' } else { ')' };
        if braced {
            self.pos += 1;
        }
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        let n = self.integer()?;
        if braced {
            if self.peek() != Some(close) {
                return Err(self.error("unclosed exponent"));
            }
            self.pos += 1;
        }
        let n: i64 = n.try_into().map_err(|_| self.error("exponent too large"))?;
        Ok(if neg { -n } else { n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Domain;
    use crate::graded::RingBuilder;

    #[test]
    fn round_trip() {
        let r = RingBuilder::new(Domain::Rational)
            .generator("v1", 2)
            .generator("v2", 8)
            .generator("u", 1)
            .invert("u")
            .build()
            .unwrap();
        for s in ["3*v1^2 - 1/3*v2", "-v1^4 + v2", "u^(-2)*v1 + 1", "0"] {
            let p = parse_poly(&r, s).unwrap();
            let q = parse_poly(&r, &p.to_string()).unwrap();
            assert_eq!(p, q, "{s}");
        }
        let p = parse_poly(&r, "(v1 + 1)^2 - v1^2").unwrap();
        assert_eq!(p.to_string(), "2*v1 + 1");
        assert_eq!(parse_poly(&r, "u^{-1}*u").unwrap().to_string(), "1");
        assert!(parse_poly(&r, "v1^-1").is_err());
        assert!(parse_poly(&r, "w").is_err());
    }
}
