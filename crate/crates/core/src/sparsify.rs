//! Constructive support reduction.
//!
//! Two reduction steps, each of which removes at least one generator from
//! the support of a solution while keeping the right-hand side:
//!
//! * [`reduce_support_once`] subtracts a multiple of a ternary kernel
//!   vector `y` (`sum y_i x_i = 0`, `y_i ∈ {-1,0,1}`). Such a `y` exists
//!   whenever `|Y| > r(Y) + log2 H(Y)` for the current support `Y`.
//! * [`knapsack_reduce_once`] works for positive knapsacks modulo the
//!   largest support element `x*`: a ternary `u` with
//!   `sum u_i x_i ≡ 0 (mod x*)` exists whenever `x* < 2^(|Y|-1)`, and it
//!   lifts to an integer relation `p = (u, z)`.
//!
//! [`sparsify`] and [`knapsack_sparsify`] iterate these steps while the
//! existence condition holds, so failing to find a vector there is an
//! internal error rather than an ordinary outcome.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, Solution};
use crate::linalg::{self, column_rank, ternary_relation};

/// One reduction: `after = before - step * kernel`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub kernel: Vec<i64>,
    pub step: u64,
    /// Indices whose coefficient dropped to zero.
    pub zeroed: Vec<usize>,
    pub coeffs_after: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub initial: Solution,
    #[serde(rename = "final")]
    pub final_solution: Solution,
    pub steps: Vec<ReductionStep>,
}

fn apply_step(
    x: &Instance,
    rhs: &[i64],
    sol: &Solution,
    kernel: Vec<i64>,
    step: u64,
) -> Result<(Solution, ReductionStep)> {
    let mut coeffs = Vec::with_capacity(sol.coeffs.len());
    for (&c, &k) in sol.coeffs.iter().zip(&kernel) {
        let v = i128::from(c) - i128::from(step) * i128::from(k);
        let v = u64::try_from(v).map_err(|_| Error::InvariantViolation(format!("reduction left coefficient {v}")))?;
        coeffs.push(v);
    }
    let after = Solution::new(coeffs);
    after
        .verify(x, rhs)
        .map_err(|e| Error::InvariantViolation(format!("reduction changed the right-hand side: {e}")))?;
    if after.support_size() >= sol.support_size() {
        return Err(Error::InvariantViolation("reduction did not shrink the support".into()));
    }
    let zeroed = (0..sol.coeffs.len()).filter(|&i| sol.coeffs[i] != 0 && after.coeffs[i] == 0).collect();
    let record = ReductionStep { kernel, step, zeroed, coeffs_after: after.coeffs.clone() };
    Ok((after, record))
}

/// Removes at least one generator from `supp(sol)` using the canonical
/// ternary kernel vector supported there, if one exists.
pub fn reduce_support_once(x: &Instance, rhs: &[i64], sol: &Solution) -> Result<Option<(Solution, ReductionStep)>> {
    sol.verify(x, rhs)?;
    let support = sol.support();
    let Some(y) = linalg::ternary_kernel(x, Some(&support)) else {
        return Ok(None);
    };
    // step = min lambda_i over supp(y); orient y so the first minimizer is +1
    let (argmin, step) = y
        .support()
        .into_iter()
        .map(|i| (i, sol.coeffs[i]))
        .min_by_key(|&(i, c)| (c, i))
        .expect("kernel vector is nonzero");
    let y = if y.entries()[argmin] == 1 { y } else { y.negated() };
    let kernel = y.entries().iter().map(|&v| i64::from(v)).collect();
    apply_step(x, rhs, sol, kernel, step).map(Some)
}

/// `|Y| > r(Y) + log2 H(Y)` for the support `Y` of `sol`, decided exactly.
pub fn siegel_condition(x: &Instance, sol: &Solution) -> Result<bool> {
    let support = sol.support();
    if support.is_empty() {
        return Ok(false);
    }
    let sub = x.subset(&support)?;
    let r = column_rank(&sub.row_matrix());
    let h = linalg::height(&sub)?;
    Ok(h.below_pow2((support.len() - r) as i64))
}

/// Reduces `sol` until its support `Y` satisfies `|Y| <= r(Y) + log2 H(Y)`.
/// The final support has at most `r(X) + floor(log2 H(X))` elements.
pub fn sparsify(x: &Instance, rhs: &[i64], sol: &Solution) -> Result<(Solution, ReductionTrace)> {
    sol.verify(x, rhs)?;
    let mut current = sol.clone();
    let mut steps = Vec::new();
    while siegel_condition(x, &current)? {
        let Some((next, step)) = reduce_support_once(x, rhs, &current)? else {
            return Err(Error::InvariantViolation(format!(
                "no ternary kernel on support {:?} although |Y| > r(Y) + log2 H(Y)",
                current.support()
            )));
        };
        steps.push(step);
        current = next;
    }
    let trace = ReductionTrace { initial: sol.clone(), final_solution: current.clone(), steps };
    Ok((current, trace))
}

/// `max(Y) < 2^(|Y|-1)` for the support `Y` of `sol`.
pub fn knapsack_condition(values: &[u64], sol: &Solution) -> bool {
    let support = sol.support();
    let n = support.len();
    if n < 2 {
        return false;
    }
    let max = support.iter().map(|&i| values[i]).max().unwrap_or(0);
    n > 64 || max < 1u64 << (n - 1)
}

/// One congruence-lattice reduction for a positive knapsack. Returns `None`
/// when the support has fewer than two elements or `max(Y) >= 2^(|Y|-1)`.
pub fn knapsack_reduce_once(x: &Instance, rhs: &[i64], sol: &Solution) -> Result<Option<(Solution, ReductionStep)>> {
    let values = x.positive_knapsack()?;
    sol.verify(x, rhs)?;
    if !knapsack_condition(&values, sol) {
        return Ok(None);
    }
    let support = sol.support();
    let (pivot, modulus) = support
        .iter()
        .map(|&i| (i, values[i]))
        .max_by_key(|&(i, v)| (v, std::cmp::Reverse(i)))
        .expect("support has at least two elements");
    let others: Vec<usize> = support.iter().copied().filter(|&i| i != pivot).collect();
    let vecs: Vec<Vec<i128>> = others.iter().map(|&i| vec![i128::from(values[i])]).collect();
    let Some(u) = ternary_relation(&vecs, &vec![true; others.len()], Some(i128::from(modulus))) else {
        return Err(Error::InvariantViolation(format!(
            "no ternary vector modulo {modulus} on support {support:?} although max < 2^(|Y|-1)"
        )));
    };
    let residue: i128 = others.iter().zip(&u).map(|(&i, &c)| i128::from(c) * i128::from(values[i])).sum();
    let z = -residue / i128::from(modulus);
    let mut p = vec![0i64; values.len()];
    for (&i, &c) in others.iter().zip(&u) {
        p[i] = i64::from(c);
    }
    p[pivot] = i64::try_from(z).map_err(|_| Error::Overflow("lifted relation"))?;

    let min_where = |sign: i8| -> Option<u64> {
        others.iter().zip(&u).filter(|(_, &c)| c == sign).map(|(&i, _)| sol.coeffs[i]).min()
    };
    let (kernel, step) = match (min_where(1), min_where(-1)) {
        (Some(k), None) => (p, k),
        (None, Some(l)) => (p.iter().map(|v| -v).collect(), l),
        (Some(k), Some(l)) => {
            // lambda - k p stays non-negative off the pivot; check the pivot
            let pivot_after = i128::from(sol.coeffs[pivot]) - i128::from(k) * i128::from(p[pivot]);
            if pivot_after >= 0 {
                (p, k)
            } else {
                (p.iter().map(|v| -v).collect(), l)
            }
        }
        (None, None) => unreachable!("ternary relation is nonzero"),
    };
    apply_step(x, rhs, sol, kernel, step).map(Some)
}

/// Reduces a knapsack solution until its support `Y` satisfies
/// `max(Y) >= 2^(|Y|-1)`; the final support has at most
/// `1 + floor(log2 max X)` elements.
pub fn knapsack_sparsify(x: &Instance, rhs: &[i64], sol: &Solution) -> Result<(Solution, ReductionTrace)> {
    x.positive_knapsack()?;
    sol.verify(x, rhs)?;
    let mut current = sol.clone();
    let mut steps = Vec::new();
    while let Some((next, step)) = knapsack_reduce_once(x, rhs, &current)? {
        steps.push(step);
        current = next;
    }
    let trace = ReductionTrace { initial: sol.clone(), final_solution: current.clone(), steps };
    Ok((current, trace))
}
