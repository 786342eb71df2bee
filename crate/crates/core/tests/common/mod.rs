//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's algorithms.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sparsol::Instance;

/// Determinant by the permutation expansion.
pub fn leibniz(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i128;
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let prod: i128 = (0..n).map(|i| m[i][p[i]]).product();
        total += if inversions % 2 == 0 { prod } else { -prod };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Rank by brute force: largest `k` with a nonzero `k x k` minor.
pub fn brute_rank(rows: &[Vec<i64>]) -> usize {
    let t = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    for k in (1..=t.min(d)).rev() {
        for rs in subsets_of_size(t, k) {
            for cs in subsets_of_size(d, k) {
                let m: Vec<Vec<i128>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| i128::from(rows[i][j])).collect()).collect();
                if leibniz(&m) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

/// `H^2` of the lattice spanned by the columns of the `t x d` matrix with
/// rows `rows`: pick `r` independent columns `V`, then
/// `det(V^T V) = sum_S det(V_S)^2` and `g = gcd_S det(V_S)`.
pub fn cauchy_binet_height_squared(rows: &[Vec<i64>]) -> BigRational {
    let t = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    let r = brute_rank(rows);
    if r == 0 {
        return BigRational::from_integer(1.into());
    }
    let cols = (0..d).fold(Vec::<usize>::new(), |mut acc, j| {
        let mut trial = acc.clone();
        trial.push(j);
        let sub: Vec<Vec<i64>> = rows.iter().map(|row| trial.iter().map(|&c| row[c]).collect()).collect();
        if brute_rank(&sub) == trial.len() {
            acc = trial;
        }
        acc
    });
    assert_eq!(cols.len(), r);
    let mut sum = BigInt::from(0);
    let mut g = BigInt::from(0);
    for s in subsets_of_size(t, r) {
        let m: Vec<Vec<i128>> = s.iter().map(|&i| cols.iter().map(|&j| i128::from(rows[i][j])).collect()).collect();
        let det = BigInt::from(leibniz(&m));
        sum += &det * &det;
        g = g.gcd(&det);
    }
    BigRational::new(sum, &g * &g)
}

/// `floor(log2 sqrt(q))` through floating point; fine for small heights.
pub fn float_floor_log2_sqrt(q: &BigRational) -> i64 {
    let p: f64 = q.numer().to_string().parse().unwrap();
    let d: f64 = q.denom().to_string().parse().unwrap();
    (0.5 * (p / d).log2()).floor() as i64
}

/// Every non-negative coefficient vector with `sum c_i x_i = b`.
pub fn all_solutions(gens: &[Vec<i64>], b: &[i64]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; gens.len()];
    enumerate(gens, 0, b.to_vec(), &mut cur, &mut out);
    out
}

fn enumerate(gens: &[Vec<i64>], i: usize, rem: Vec<i64>, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if i == gens.len() {
        if rem.iter().all(|&v| v == 0) {
            out.push(cur.clone());
        }
        return;
    }
    let mut rem = rem;
    let mut c = 0;
    loop {
        cur[i] = c;
        enumerate(gens, i + 1, rem.clone(), cur, out);
        for (r, g) in rem.iter_mut().zip(&gens[i]) {
            *r -= g;
        }
        if rem.iter().any(|&v| v < 0) {
            break;
        }
        c += 1;
    }
    cur[i] = 0;
}

/// `m0(b)` by exhaustive enumeration of solutions.
pub fn brute_m0(gens: &[Vec<i64>], b: &[i64]) -> Option<usize> {
    all_solutions(gens, b).iter().map(|s| s.iter().filter(|&&c| c > 0).count()).min()
}

/// Largest multiple of `gcd` below `4 max^2` that is not representable.
pub fn naive_frobenius(values: &[u64]) -> Option<u64> {
    let g = values.iter().fold(0u64, |a, &v| a.gcd(&v));
    let max = *values.iter().max().unwrap();
    let limit = 4 * max * max;
    let mut rep = vec![false; limit as usize + 1];
    rep[0] = true;
    for n in 1..=limit as usize {
        rep[n] = values.iter().any(|&v| v as usize <= n && rep[n - v as usize]);
    }
    (0..=limit).rev().find(|&n| n % g == 0 && !rep[n as usize])
}

/// Whether all `2^t` subset sums differ.
pub fn brute_sum_distinct(values: &[u64]) -> bool {
    let mut sums: Vec<u64> = (0u32..1 << values.len())
        .map(|m| (0..values.len()).filter(|i| m >> i & 1 == 1).map(|i| values[i]).sum())
        .collect();
    sums.sort_unstable();
    sums.windows(2).all(|w| w[0] != w[1])
}

/// Every nonzero `y ∈ {-1,0,1}^t` with `sum y_i x_i = 0`.
pub fn all_ternary_relations(gens: &[Vec<i64>]) -> Vec<Vec<i8>> {
    let t = gens.len();
    let d = gens.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let total = 3usize.pow(t as u32);
    for code in 1..total {
        let mut c = code;
        let y: Vec<i8> = (0..t)
            .map(|_| {
                let v = (c % 3) as i8 - 1;
                c /= 3;
                v
            })
            .collect();
        if y.iter().all(|&v| v == 0) {
            continue;
        }
        if (0..d).all(|j| (0..t).map(|i| i64::from(y[i]) * gens[i][j]).sum::<i64>() == 0) {
            out.push(y);
        }
    }
    out
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `(2/pi) ∫_0^∞ (sin x / x)^n dx` by quadrature on `[k pi, (k+1) pi]`
/// for `k < 4000`, with an asymptotic tail for `n = 1, 2`.
pub fn sinc_quadrature(n: u32) -> f64 {
    let rule = gauss_legendre(24);
    let f = |x: f64| if x == 0.0 { 1.0 } else { (x.sin() / x).powi(n as i32) };
    let intervals = 4000;
    let mut total = 0.0;
    for k in 0..intervals {
        let (a, b) = (k as f64 * PI, (k + 1) as f64 * PI);
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        total += half * rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>();
    }
    let a = intervals as f64 * PI;
    total += match n {
        // ∫_A^∞ sin x / x = cos A (1/A - 2/A^3 + 24/A^5) at sin A = 0
        1 => {
            let sign = if intervals % 2 == 0 { 1.0 } else { -1.0 };
            sign * (1.0 / a - 2.0 / a.powi(3) + 24.0 / a.powi(5))
        }
        // sin^2 averages to 1/2
        2 => 1.0 / (2.0 * a),
        _ => 0.0,
    };
    2.0 / PI * total
}

pub fn random_knapsack(rng: &mut ChaCha8Rng, max_t: usize, max_entry: i64) -> Instance {
    let t = rng.gen_range(1..=max_t);
    let v: Vec<i64> = (0..t).map(|_| rng.gen_range(1..=max_entry)).collect();
    Instance::knapsack(&v).unwrap()
}

/// Componentwise non-negative, nonzero generators.
pub fn random_nonneg(rng: &mut ChaCha8Rng, d: usize, max_t: usize, max_entry: i64) -> Instance {
    let t = rng.gen_range(1..=max_t);
    let gens = (0..t)
        .map(|_| loop {
            let g: Vec<i64> = (0..d).map(|_| rng.gen_range(0..=max_entry)).collect();
            if g.iter().any(|&v| v != 0) {
                break g;
            }
        })
        .collect();
    Instance::new(d, gens).unwrap()
}

/// Arbitrary-sign nonzero generators.
pub fn random_signed(rng: &mut ChaCha8Rng, d: usize, max_t: usize, max_entry: i64) -> Instance {
    let t = rng.gen_range(1..=max_t);
    let gens = (0..t)
        .map(|_| loop {
            let g: Vec<i64> = (0..d).map(|_| rng.gen_range(-max_entry..=max_entry)).collect();
            if g.iter().any(|&v| v != 0) {
                break g;
            }
        })
        .collect();
    Instance::new(d, gens).unwrap()
}

/// Whether no element divides another (distinct elements).
pub fn divisibility_free(values: &[u64]) -> bool {
    values.iter().enumerate().all(|(i, &a)| values.iter().enumerate().all(|(j, &b)| i == j || b % a != 0))
}
