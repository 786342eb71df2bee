//! Upper bounds on `M0(X)`, the largest minimal support over the semigroup.
//!
//! All decisions are made over integers or exact rationals. The two
//! real-valued quantities (the Eisenbrand–Shmonin reference bound and the
//! displayed value of the sinc threshold) are reported as `f64` and never
//! feed a comparison.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::linalg::{self, column_rank, ratio_string, HeightValue, IntMatrix};

/// `r(X) + floor(log2 H(X))`.
pub fn bound_rank_height(x: &Instance) -> Result<i64> {
    let r = column_rank(&x.row_matrix()) as i64;
    let h = linalg::height(x)?;
    Ok(r + h.floor_log2_h)
}

/// `floor(2d log2(2 sqrt(d) M))` with `M = ||X||_inf`, evaluated as
/// `bitlength((4 d M^2)^d) - 1`.
pub fn bound_norm(x: &Instance) -> u64 {
    norm_bound_for(x.dim() as u64, x.max_norm())
}

fn norm_bound_for(d: u64, m: u64) -> u64 {
    let m = BigUint::from(m);
    let base = BigUint::from(4 * d) * &m * &m;
    base.pow(d as u32).bits() - 1
}

/// `1 + floor(log2 max X)` for a knapsack of positive integers.
pub fn bound_knapsack_positive(x: &Instance) -> Result<u64> {
    let values = x.positive_knapsack()?;
    let max = values.into_iter().max().unwrap_or(1);
    Ok(u64::from(64 - max.leading_zeros()))
}

/// `2d log2(4 d M)`, a real-valued reference bound.
pub fn bound_eisenbrand_shmonin(x: &Instance) -> f64 {
    let d = x.dim() as f64;
    2.0 * d * (4.0 * d * x.max_norm() as f64).log2()
}

/// `sigma_n = (2/pi) ∫_0^∞ (sin x / x)^n dx`, exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SincValue {
    pub n: u32,
    pub value: BigRational,
}

/// Exact `sigma_n` from the alternating sum
/// `sum_{0 <= k < n/2} (-1)^k C(n,k) (n-2k)^(n-1) / (2^(n-1) (n-1)!)`.
pub fn sinc_sigma(n: u32) -> Result<SincValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("sinc integral index must be at least 1".into()));
    }
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    let mut k = 0u32;
    while 2 * k < n {
        let term = &binom * BigInt::from(n - 2 * k).pow(n - 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
        k += 1;
    }
    let factorial: BigInt = (1..n).map(BigInt::from).product();
    let denom = (BigInt::one() << (n - 1)) * factorial;
    Ok(SincValue { n, value: BigRational::new(sum, denom) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SumDistinct {
    pub is_sum_distinct: bool,
    /// `||X||_inf > sigma_t 2^(t-1)`.
    pub lower_bound_ok: bool,
}

/// Sum-distinctness of a set of distinct positive integers, and the sinc
/// lower bound that every sum-distinct set must satisfy.
pub fn sum_distinct_check(x: &Instance) -> Result<SumDistinct> {
    let values = x.positive_knapsack()?;
    let mut sorted = values.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotKnapsack("generators must be distinct".into()));
    }
    let is_sum_distinct = linalg::ternary_kernel(x, None).is_none();
    let limit = sinc_limit(values.len() as u32)?;
    let max = BigRational::from_integer(BigInt::from(x.max_norm()));
    Ok(SumDistinct { is_sum_distinct, lower_bound_ok: max > limit })
}

/// `sigma_t 2^(t-1)`.
fn sinc_limit(t: u32) -> Result<BigRational> {
    let sigma = sinc_sigma(t)?.value;
    Ok(sigma * BigRational::from_integer(BigInt::one() << (t - 1)))
}

/// The sinc-integral sufficient condition for support reduction of a
/// knapsack: `t > 1 - log2 sigma_t + log2 ||X||_inf`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SincThreshold {
    pub t: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub sigma_t: BigRational,
    /// `sigma_t 2^(t-1)`; the condition holds iff `||X||_inf` is below it.
    #[serde(serialize_with = "ser_ratio")]
    pub norm_limit: BigRational,
    pub condition_holds: bool,
    /// `1 - log2 sigma_t + log2 ||X||_inf`, display only.
    pub threshold_approx: f64,
}

fn ser_ratio<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(q))
}

pub fn sinc_threshold_for(x: &Instance) -> Result<SincThreshold> {
    if x.dim() != 1 {
        return Err(Error::NotKnapsack(format!("dimension is {}", x.dim())));
    }
    let t = x.len();
    let sigma_t = sinc_sigma(t as u32)?.value;
    let norm_limit = sinc_limit(t as u32)?;
    let m = x.max_norm();
    let condition_holds = BigRational::from_integer(BigInt::from(m)) < norm_limit;
    let sigma_f = sigma_t.numer().to_f64().unwrap_or(f64::NAN) / sigma_t.denom().to_f64().unwrap_or(f64::NAN);
    let threshold_approx = 1.0 - sigma_f.log2() + (m as f64).log2();
    Ok(SincThreshold { t, sigma_t, norm_limit, condition_holds, threshold_approx })
}

/// Columns `(a_i; c_i)` of `A` extended by the objective, as the rows of
/// `W`.
fn enlarged_rows(a: &IntMatrix, c: &[i64]) -> Result<IntMatrix> {
    if c.len() != a.cols() {
        return Err(Error::DimensionMismatch { expected: a.cols(), found: c.len() });
    }
    let d = a.rows();
    let t = a.cols();
    let mut data = Vec::with_capacity(t * (d + 1));
    for (j, &cj) in c.iter().enumerate() {
        for i in 0..d {
            data.push(a.get(i, j).clone());
        }
        data.push(BigInt::from(cj));
    }
    Ok(IntMatrix::from_big(t, d + 1, data))
}

/// Sparsity of some optimal solution of `min c^T x, Ax = b, x ∈ Z^t_{>=0}`:
/// `(d + 1) + floor(log2 H)` for the enlarged columns `(a_i; c_i)`.
pub fn ip_sparsity_bound(a: &IntMatrix, c: &[i64]) -> Result<i64> {
    let w = enlarged_rows(a, c)?;
    let h = linalg::lattice_height(&w)?;
    Ok(a.rows() as i64 + 1 + h.floor_log2_h)
}

/// Mixed-integer version: adds `rank(B)` for the continuous block.
pub fn mip_sparsity_bound(a: &IntMatrix, c: &[i64], b: &IntMatrix) -> Result<i64> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: b.rows() });
    }
    Ok(ip_sparsity_bound(a, c)? + column_rank(b) as i64)
}

/// Every applicable bound for one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsityBounds {
    pub rank_height: i64,
    pub norm: u64,
    pub knapsack: Option<u64>,
    pub eisenbrand_shmonin: f64,
    pub r: usize,
    #[serde(serialize_with = "ser_height_ratio")]
    pub h_squared: HeightValue,
    pub floor_log2_h: i64,
    pub max_norm: u64,
    pub sinc_threshold: Option<SincThreshold>,
}

fn ser_height_ratio<S: serde::Serializer>(h: &HeightValue, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&h.ratio_string())
}

pub fn bounds_report(x: &Instance) -> Result<SparsityBounds> {
    let r = column_rank(&x.row_matrix());
    let h = linalg::height(x)?;
    let knapsack = bound_knapsack_positive(x).ok();
    let sinc_threshold = if x.dim() == 1 { Some(sinc_threshold_for(x)?) } else { None };
    Ok(SparsityBounds {
        rank_height: r as i64 + h.floor_log2_h,
        norm: bound_norm(x),
        knapsack,
        eisenbrand_shmonin: bound_eisenbrand_shmonin(x),
        r,
        floor_log2_h: h.floor_log2_h,
        h_squared: h,
        max_norm: x.max_norm(),
        sinc_threshold,
    })
}
