use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::PmdsParams;
use crate::combinat::{binomial, binomial_u64, vandermonde_identity_sides};
use crate::select::enumerate_block_selections;

/// Total-degree bound `2(n − k)·C(n − 1, k − 1)` on the product of all
/// relevant minors of the symbolic standard form.
pub fn degree_bound(params: &PmdsParams) -> BigUint {
    let (n, k) = (params.n() as i64, params.k() as i64);
    BigUint::from(2 * (n - k) as u64) * binomial(n - 1, k - 1)
}

/// `max(0, 1 − 2(n − k)·C(n − 1, k − 1)/q)`, exactly.
pub fn probability_bound(params: &PmdsParams, q: u64) -> BigRational {
    let d = BigInt::from(degree_bound(params));
    let q = BigInt::from(q);
    let value = BigRational::new(q.clone() - d, q);
    if value.is_negative() {
        BigRational::zero()
    } else {
        value
    }
}

pub fn vandermonde_identity_check(m: u64, n: u64, r: u64) -> bool {
    let (lhs, rhs) = vandermonde_identity_sides(m, n, r);
    lhs == rhs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MStarCount {
    /// `M(k−1; ℓ+r_1, …, ℓ+r_{m−1}, ℓ+r_m−1; ℓ, …, ℓ, ℓ−1)`.
    pub mstar: u64,
    /// `C(n − 1, k − 1)`.
    pub unconstrained: u64,
    /// Some cap is below both `k − 1` and its block size.
    pub cap_binds: bool,
    /// `mstar < unconstrained`.
    pub strict: bool,
}

pub fn count_mstar(params: &PmdsParams) -> MStarCount {
    let (ell, m) = (params.ell, params.m);
    let mut sizes = params.block_widths();
    sizes[m - 1] -= 1;
    let mut caps = vec![ell; m];
    caps[m - 1] = ell - 1;
    let k1 = params.k() - 1;
    let mstar = enumerate_block_selections(&sizes, &caps, k1).count() as u64;
    let unconstrained = binomial_u64(params.n() - 1, k1);
    let cap_binds = caps.iter().zip(&sizes).any(|(&f, &w)| f < k1.min(w));
    MStarCount { mstar, unconstrained, cap_binds, strict: mstar < unconstrained }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBudget {
    /// `⌈s/ℓ⌉`: the number of trailing blocks whose C-part holds A-columns.
    pub t: usize,
    /// Maximal entry degree per generator column, in block layout order.
    pub column_degrees: Vec<u8>,
    /// `2(n − k)·C(n − 1, k − 1)`.
    pub total: BigUint,
    /// `Σ_{j=0}^{k} 2(k − j)·C(k, j)·C(n − k, k − j)`; equals `total`.
    pub summation: BigUint,
}

/// Entry degrees of the symbolic standard form: 0 on the `I_k` columns,
/// 1 on the `A` columns and on D-columns of blocks whose C-part is constant,
/// 2 on D-columns of the last `⌈s/ℓ⌉` blocks.
pub fn degree_budget(params: &PmdsParams) -> DegreeBudget {
    let (k, ell, m) = (params.k(), params.ell, params.m);
    let t = params.s.div_ceil(ell);
    let mut column_degrees = Vec::with_capacity(params.n());
    for (i, &ri) in params.r.iter().enumerate() {
        for c in i * ell..(i + 1) * ell {
            column_degrees.push(u8::from(c >= k));
        }
        let d = if i + t >= m { 2 } else { 1 };
        column_degrees.extend(std::iter::repeat_n(d, ri));
    }
    let (n, ki) = (params.n() as i64, k as i64);
    let summation = (0..=ki).fold(BigUint::zero(), |acc, j| {
        acc + BigUint::from(2 * (ki - j) as u64) * binomial(ki, j) * binomial(n - ki, ki - j)
    });
    DegreeBudget { t, column_degrees, total: degree_bound(params), summation }
}
