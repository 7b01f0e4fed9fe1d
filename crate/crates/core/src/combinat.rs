//! Exact binomial counts.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// C(a, b), with C(a, b) = 0 for b < 0 or b > a.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc = acc * BigUint::from((a - i) as u64) / BigUint::from((i + 1) as u64);
    }
    acc
}

pub fn binomial_u64(a: usize, b: usize) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// Number of k-dimensional subspaces of GF(q)^n.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

/// Compares both sides of
/// Σ_{j=0}^{r} (r−j)·C(m,j)·C(n,r−j) = n·C(m+n−1, r−1).
pub fn vandermonde_identity_sides(m: u64, n: u64, r: u64) -> (BigUint, BigUint) {
    let (m, n, r) = (m as i64, n as i64, r as i64);
    let lhs = (0..=r)
        .fold(BigUint::zero(), |acc, j| acc + BigUint::from((r - j) as u64) * binomial(m, j) * binomial(n, r - j));
    let rhs = BigUint::from(n as u64) * binomial(m + n - 1, r - 1);
    (lhs, rhs)
}
