//! Bernoulli numbers, denominators of ζ(1−k), and the von Staudt–Clausen product.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime, p_part};

static TABLE: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Exact B_k with B_1 = −1/2, from Σ_{j≤k} C(k+1, j)·B_j = 0.
pub fn bernoulli(k: u32) -> BigRational {
    let mut table = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= k as usize {
        let n = table.len() as u64;
        let b = if n == 0 {
            BigRational::one()
        } else if n >= 3 && n % 2 == 1 {
            BigRational::zero()
        } else {
            let mut s = BigRational::zero();
            for (j, bj) in table.iter().enumerate() {
                if !bj.is_zero() {
                    s += BigRational::from_integer(binomial(n + 1, j as u64)) * bj;
                }
            }
            -s / BigRational::from_integer(BigInt::from(n + 1))
        };
        table.push(b);
    }
    table[k as usize].clone()
}

/// ζ(1−k) = −B_k/k for k ≥ 1.
pub fn zeta_one_minus(k: u32) -> BigRational {
    assert!(k >= 1, "k ≥ 1");
    -bernoulli(k) / BigRational::from_integer(k.into())
}

/// Denominator of ζ(1−k) in lowest terms; 1 when the value is 0.
pub fn zeta_denominator(k: u32) -> BigInt {
    let z = zeta_one_minus(k);
    if z.is_zero() {
        BigInt::one()
    } else {
        z.denom().abs()
    }
}

/// ∏ p over primes with (p−1) | k.
pub fn von_staudt_denominator(k: u32) -> BigInt {
    assert!(k >= 2 && k.is_multiple_of(2), "k even ≥ 2");
    let mut acc = BigInt::one();
    for d in 1..=k as u64 {
        if (k as u64).is_multiple_of(d) && is_prime(d + 1) {
            acc *= d + 1;
        }
    }
    acc
}

/// The p-part of 2·zeta_denominator(k).
pub fn expected_ext1_order(p: u64, k: u32) -> BigInt {
    p_part(&(BigInt::from(2) * zeta_denominator(k)), p)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ZetaRow {
    pub k: u32,
    pub bernoulli: String,
    pub zeta: String,
    pub denominator: String,
    pub twice_denominator: String,
}

pub fn zeta_table(k_max: u32) -> Vec<ZetaRow> {
    (2..=k_max)
        .map(|k| {
            let d = zeta_denominator(k);
            ZetaRow {
                k,
                bernoulli: bernoulli(k).to_string(),
                zeta: zeta_one_minus(k).to_string(),
                twice_denominator: (BigInt::from(2) * &d).to_string(),
                denominator: d.to_string(),
            }
        })
        .collect()
}

/// Even k ≤ k_max where denominator(B_k) differs from the von Staudt product.
pub fn von_staudt_mismatches(k_max: u32) -> Vec<u32> {
    (2..=k_max).step_by(2).filter(|&k| bernoulli(k).denom() != &von_staudt_denominator(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(zeta_denominator(2), BigInt::from(12));
        assert_eq!(zeta_denominator(3), BigInt::from(1));
        assert_eq!(zeta_denominator(4), BigInt::from(120));
        assert_eq!(von_staudt_denominator(2), BigInt::from(6));
        assert_eq!(von_staudt_denominator(4), BigInt::from(30));
        assert_eq!(von_staudt_denominator(12), BigInt::from(2730));
        assert_eq!(expected_ext1_order(3, 2), BigInt::from(3));
        assert_eq!(expected_ext1_order(3, 6), BigInt::from(9));
        assert_eq!(expected_ext1_order(5, 2), BigInt::from(1));
    }

    #[test]
    fn properties() {
        assert!(von_staudt_mismatches(30).is_empty());
        for k in (3..=31).step_by(2) {
            assert_eq!(zeta_denominator(k), BigInt::one());
        }
        for p in [3u64, 5, 7, 11, 13] {
            for k in 2..=30u32 {
                if k % (p as u32 - 1) != 0 {
                    assert_eq!(expected_ext1_order(p, k), BigInt::one(), "p={p} k={k}");
                }
            }
        }
    }
}
