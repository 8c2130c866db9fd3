use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::rational_valuation;
use super::{smith_normal_form, ArithError, Domain, IntMatrix, QMatrix, Valuation};

/// Diagonalization `U·M·V = diag(d_1, …, d_r, 0, …)` over one of the supported domains.
///
/// Over ℤ_(p) each `d_i` is a power of `p`; over a field each `d_i` is 1.
#[derive(Clone, Debug)]
pub struct DomainSmith {
    pub domain: Domain,
    pub diag: Vec<BigRational>,
    pub u: Option<QMatrix>,
    pub v: Option<QMatrix>,
}

impl DomainSmith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal entries that are not units, i.e. the torsion of the cokernel.
    pub fn non_unit_divisors(&self) -> Vec<BigRational> {
        self.diag.iter().filter(|d| !self.domain.is_unit(d)).cloned().collect()
    }
}

struct Elim {
    domain: Domain,
    a: QMatrix,
    u: Option<QMatrix>,
    v: Option<QMatrix>,
}

impl Elim {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }

    fn scale_row(&mut self, i: usize, c: &BigRational, from: usize) {
        let d = self.domain;
        for k in from..self.a.cols() {
            if !self.a[(i, k)].is_zero() {
                self.a[(i, k)] = d.mul(&self.a[(i, k)], c);
            }
        }
        if let Some(u) = &mut self.u {
            for k in 0..u.cols() {
                if !u[(i, k)].is_zero() {
                    u[(i, k)] = d.mul(&u[(i, k)], c);
                }
            }
        }
    }

    /// row_i -= q·row_j, touching only columns ≥ from of the working matrix
    fn sub_row(&mut self, i: usize, j: usize, q: &BigRational, from: usize) {
        let d = self.domain;
        for k in from..self.a.cols() {
            if !self.a[(j, k)].is_zero() {
                let x = d.mul(&self.a[(j, k)], q);
                self.a[(i, k)] = d.sub(&self.a[(i, k)], &x);
            }
        }
        if let Some(u) = &mut self.u {
            for k in 0..u.cols() {
                if !u[(j, k)].is_zero() {
                    let x = d.mul(&u[(j, k)], q);
                    u[(i, k)] = d.sub(&u[(i, k)], &x);
                }
            }
        }
    }

    /// col_i -= q·col_j on the transform only (the working column is known to become zero)
    fn sub_col_transform(&mut self, i: usize, j: usize, q: &BigRational) {
        let d = self.domain;
        if let Some(v) = &mut self.v {
            for k in 0..v.rows() {
                if !v[(k, j)].is_zero() {
                    let x = d.mul(&v[(k, j)], q);
                    v[(k, i)] = d.sub(&v[(k, i)], &x);
                }
            }
        }
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), i64)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let score = match self.domain {
                    Domain::PLocal(p) => match rational_valuation(x, p) {
                        Valuation::Finite(v) => v,
                        Valuation::Infinity => unreachable!(),
                    },
                    _ => 0,
                };
                if best.is_none_or(|(_, s)| score < s) {
                    best = Some(((i, j), score));
                    if score == 0 {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(ij, _)| ij)
    }
}

// `b` is the pivot of minimal valuation, so the quotient stays in the domain.
fn exact_quotient(domain: Domain, a: &BigRational, b: &BigRational) -> BigRational {
    if domain.is_field() {
        domain.div(a, b).expect("nonzero pivot")
    } else {
        a / b
    }
}

/// Smith-type diagonalization over a field or ℤ_(p) by minimal-valuation pivoting; over ℤ
/// it defers to the integer Smith normal form.
pub fn domain_smith(domain: Domain, m: &QMatrix, transforms: bool) -> Result<DomainSmith, ArithError> {
    let normalized: Vec<BigRational> =
        m.entries().iter().map(|x| domain.normalize(x.clone())).collect::<Result<_, _>>()?;
    let m = QMatrix::from_vec(m.rows(), m.cols(), normalized)?;
    if domain == Domain::Integer {
        let im = m.map(|x| x.numer().clone());
        let s = smith_normal_form(&im);
        let to_q = |x: &IntMatrix| x.to_rational();
        return Ok(DomainSmith {
            domain,
            diag: s.divisors.iter().map(|d| BigRational::from_integer(d.clone())).collect(),
            u: transforms.then(|| to_q(&s.u)),
            v: transforms.then(|| to_q(&s.v)),
        });
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut e = Elim {
        domain,
        a: m,
        u: transforms.then(|| QMatrix::identity(rows)),
        v: transforms.then(|| QMatrix::identity(cols)),
    };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = e.pivot(t) else { break };
        e.swap_rows(t, pi);
        e.swap_cols(t, pj);
        let piv = e.a[(t, t)].clone();
        let target = match domain {
            Domain::PLocal(p) => match rational_valuation(&piv, p) {
                Valuation::Finite(v) => BigRational::from_integer(num_traits::pow(BigInt::from(p), v as usize)),
                Valuation::Infinity => unreachable!(),
            },
            _ => BigRational::one(),
        };
        let scale = domain.reduce(&target / &piv);
        e.scale_row(t, &scale, t);
        for i in t + 1..rows {
            if e.a[(i, t)].is_zero() {
                continue;
            }
            let q = exact_quotient(domain, &e.a[(i, t)], &target);
            e.sub_row(i, t, &q, t);
        }
        for j in t + 1..cols {
            if e.a[(t, j)].is_zero() {
                continue;
            }
            let q = exact_quotient(domain, &e.a[(t, j)], &target);
            e.sub_col_transform(j, t, &q);
            e.a[(t, j)] = BigRational::zero();
        }
        diag.push(target);
    }
    Ok(DomainSmith { domain, diag, u: e.u, v: e.v })
}

/// Rank over the fraction field (or over 𝔽_p).
pub fn rank(domain: Domain, m: &QMatrix) -> usize {
    let d = if domain.is_field() { domain } else { Domain::Rational };
    domain_smith(d, m, false).map(|s| s.rank()).unwrap_or_else(|_| {
        // entries outside the domain: rank is still defined over ℚ
        domain_smith(Domain::Rational, m, false).expect("rationals").rank()
    })
}

fn normalize_vector(domain: Domain, v: &mut [BigRational]) {
    let Some(first) = v.iter().find(|x| !x.is_zero()).cloned() else { return };
    let scale = match domain {
        Domain::Integer => {
            if first.is_negative() {
                -BigRational::one()
            } else {
                BigRational::one()
            }
        }
        Domain::PLocal(p) => {
            let val = rational_valuation(&first, p).finite().unwrap_or(0);
            let target = if val >= 0 {
                BigRational::from_integer(num_traits::pow(BigInt::from(p), val as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), (-val) as usize))
            };
            &target / &first
        }
        _ => domain.inverse(&first).expect("nonzero in a field"),
    };
    for x in v.iter_mut() {
        *x = domain.mul(x, &scale);
    }
}

/// Basis of the kernel of `m`; over ℤ and ℤ_(p) a basis of the kernel lattice.
/// The first nonzero entry of each vector is normalized to 1 (fields), positive (ℤ),
/// or a power of p (ℤ_(p)).
pub fn kernel_basis(domain: Domain, m: &QMatrix) -> Result<Vec<Vec<BigRational>>, ArithError> {
    if domain.is_field() {
        return Ok(field_kernel(domain, m));
    }
    let s = domain_smith(domain, m, true)?;
    let v = s.v.as_ref().expect("requested transforms");
    let mut out = Vec::new();
    for j in s.rank()..m.cols() {
        let mut col = v.column(j);
        normalize_vector(domain, &mut col);
        out.push(col);
    }
    Ok(out)
}

fn field_kernel(domain: Domain, m: &QMatrix) -> Vec<Vec<BigRational>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> =
        (0..rows).map(|i| m.row(i).iter().map(|x| domain.normalize(x.clone()).expect("field")).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, pr);
        let inv = domain.inverse(&a[r][c]).expect("field");
        for x in a[r].iter_mut() {
            *x = domain.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let q = a[i][c].clone();
                for k in 0..cols {
                    if !a[r][k].is_zero() {
                        let x = domain.mul(&a[r][k], &q);
                        a[i][k] = domain.sub(&a[i][k], &x);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[f] = BigRational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = domain.neg(&a[i][f]);
        }
        normalize_vector(domain, &mut v);
        out.push(v);
    }
    out
}

/// Solves `m·x = b` with `x` in the domain, if possible.
pub fn solve(domain: Domain, m: &QMatrix, b: &[BigRational]) -> Result<Option<Vec<BigRational>>, ArithError> {
    let s = domain_smith(domain, m, true)?;
    let u = s.u.as_ref().expect("transforms");
    let v = s.v.as_ref().expect("transforms");
    let b: Vec<BigRational> = b.iter().map(|x| domain.normalize(x.clone())).collect::<Result<_, _>>()?;
    let ub: Vec<BigRational> = u.mul_vec(&b).into_iter().map(|x| domain.reduce(x)).collect();
    let mut y = vec![BigRational::zero(); m.cols()];
    for (i, x) in ub.iter().enumerate() {
        if i < s.rank() {
            let q = if domain.is_field() { domain.div(x, &s.diag[i])? } else { x / &s.diag[i] };
            match domain.normalize(q) {
                Ok(q) => y[i] = q,
                Err(_) => return Ok(None),
            }
        } else if !x.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(v.mul_vec(&y).into_iter().map(|x| domain.reduce(x)).collect()))
}

/// Invariant factors of `ℤ^{ambient_rank} / im(M)`; 0 marks a free summand.
pub fn cokernel_invariants(m: &IntMatrix, ambient_rank: usize) -> Result<Vec<BigInt>, ArithError> {
    if m.cols() > 0 && m.rows() != ambient_rank {
        return Err(ArithError::Shape(format!("{} rows for ambient rank {}", m.rows(), ambient_rank)));
    }
    let s = smith_normal_form(m);
    let mut out: Vec<BigInt> = s.divisors.iter().filter(|d| !d.is_one()).cloned().collect();
    out.extend(std::iter::repeat_n(BigInt::zero(), ambient_rank - s.rank()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn q(rows: &[&[i64]]) -> QMatrix {
        IntMatrix::from_i64(rows).to_rational()
    }

    #[test]
    fn kernels() {
        assert!(kernel_basis(Domain::Rational, &q(&[&[1, 0], &[0, 1]])).unwrap().is_empty());
        assert_eq!(kernel_basis(Domain::PrimeField(3), &q(&[&[1, 1]])).unwrap(), vec![vec![int(1), int(2)]]);
        assert_eq!(kernel_basis(Domain::Integer, &q(&[&[2, -1], &[4, -2]])).unwrap(), vec![vec![int(1), int(2)]]);
        let k = kernel_basis(Domain::PLocal(3), &q(&[&[3, 6, 0]])).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            let prod = q(&[&[3, 6, 0]]).mul_vec(v);
            assert!(prod[0].is_zero());
        }
    }

    #[test]
    fn cokernels() {
        let inv = |m: &IntMatrix, r| cokernel_invariants(m, r).unwrap().iter().map(|x| x.try_into().unwrap()).collect::<Vec<i64>>();
        assert_eq!(inv(&IntMatrix::from_i64(&[&[3]]), 1), vec![3]);
        assert_eq!(inv(&IntMatrix::zeros(2, 0), 2), vec![0, 0]);
        assert_eq!(inv(&IntMatrix::from_i64(&[&[2, 0], &[0, 4], &[0, 0]]), 3), vec![2, 4, 0]);
    }

    #[test]
    fn plocal_diagonal() {
        let s = domain_smith(Domain::PLocal(3), &q(&[&[6, 9], &[2, 3]]), true).unwrap();
        assert_eq!(s.diag, vec![int(1)]);
        let s = domain_smith(Domain::PLocal(3), &q(&[&[9, 0], &[0, 6]]), true).unwrap();
        assert_eq!(s.diag, vec![int(3), int(9)]);
        let m = q(&[&[9, 0], &[0, 6]]);
        let d = s.u.unwrap().mul(&m).unwrap().mul(&s.v.unwrap()).unwrap();
        assert_eq!(d, q(&[&[3, 0], &[0, 9]]));
    }

    #[test]
    fn solving() {
        let m = q(&[&[3, 0], &[0, 1]]);
        assert!(solve(Domain::PLocal(3), &m, &[int(1), int(0)]).unwrap().is_none());
        assert_eq!(solve(Domain::PLocal(3), &m, &[int(6), int(2)]).unwrap(), Some(vec![int(2), int(2)]));
        assert_eq!(solve(Domain::Rational, &m, &[int(1), int(0)]).unwrap(), Some(vec![crate::arith::rat(1, 3), int(0)]));
    }
}
