use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `U·M·V = D` with `D` diagonal, `d_1 | d_2 | …` positive, and `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub divisors: Vec<BigInt>,
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Recomputes `U·M·V` and compares with `D`, and checks the divisor chain.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let Ok(um) = self.u.mul(m) else { return false };
        let Ok(umv) = um.mul(&self.v) else { return false };
        if umv != self.d {
            return false;
        }
        let chain = self.divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        let positive = self.divisors.iter().all(|d| d.is_positive());
        chain && positive && self.u.determinant().abs() == 1.into() && self.v.determinant().abs() == 1.into()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row_i += q·row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for k in 0..self.a.cols() {
            let x = &self.a[(j, k)] * q;
            self.a[(i, k)] += x;
        }
        for k in 0..self.u.cols() {
            let x = &self.u[(j, k)] * q;
            self.u[(i, k)] += x;
        }
    }

    /// col_i += q·col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for k in 0..self.a.rows() {
            let x = &self.a[(k, j)] * q;
            self.a[(k, i)] += x;
        }
        for k in 0..self.v.rows() {
            let x = &self.v[(k, j)] * q;
            self.v[(k, i)] += x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.a.cols() {
            self.a[(i, k)] = -&self.a[(i, k)];
        }
        for k in 0..self.u.cols() {
            self.u[(i, k)] = -&self.u[(i, k)];
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work { a: m.clone(), u: IntMatrix::identity(rows), v: IntMatrix::identity(cols) };
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = w.min_entry(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = w.a[(i, t)].div_floor(&w.a[(t, t)]);
                w.add_row(i, t, &-q);
                if !w.a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = w.a[(t, j)].div_floor(&w.a[(t, t)]);
                w.add_col(j, t, &-q);
                if !w.a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = w.min_entry_in_cross(t);
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let pivot = w.a[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&w.a[(i, j)] % &pivot).is_zero()));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        divisors.push(w.a[(t, t)].clone());
        t += 1;
    }
    SmithDecomposition { divisors, d: w.a, u: w.u, v: w.v }
}

impl Work {
    fn min_entry_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let better = |x: &BigInt, b: &BigInt| !x.is_zero() && (b.is_zero() || x.abs() < b.abs());
        for i in t..self.a.rows() {
            if better(&self.a[(i, t)], &self.a[best]) {
                best = (i, t);
            }
        }
        for j in t..self.a.cols() {
            if better(&self.a[(t, j)], &self.a[best]) {
                best = (t, j);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(m: &IntMatrix) -> Vec<i64> {
        let s = smith_normal_form(m);
        assert!(s.verify(m));
        s.divisors.iter().map(|d| d.try_into().unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(divisors(&IntMatrix::from_i64(&[&[5]])), vec![5]);
        let s = smith_normal_form(&IntMatrix::from_i64(&[&[5]]));
        assert_eq!(s.u, IntMatrix::identity(1));
        assert_eq!(s.v, IntMatrix::identity(1));
        assert_eq!(divisors(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]])), vec![2, 4]);
        assert_eq!(divisors(&IntMatrix::zeros(2, 3)), Vec::<i64>::new());
        assert_eq!(divisors(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(divisors(&IntMatrix::from_i64(&[&[4, 6, 0], &[6, 4, 2]])), vec![2, 2]);
    }
}
