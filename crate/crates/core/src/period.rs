//! Eventual periodicity of `m0` on positive knapsacks.
//!
//! For `X ⊂ Z_{>0}` put `L = lcm(X)` and `N0 = max F(X')` over nonempty
//! subsets, where `F(X')` is the largest multiple of `gcd(X')` outside
//! `Sg(X')`. Beyond `N0` the function `m0` repeats with period `L`, so a
//! single table over `[0, N0 + k L]` answers every question here.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::instance::{for_each_combination, Instance};
use crate::solver::{m0_table, M0Table};

/// Largest representability table the Frobenius search will allocate.
pub const MAX_FROBENIUS_TABLE: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusData {
    pub subset: Vec<usize>,
    pub g: u64,
    /// `None` when `Sg(X') = g Z_{>=0}` (no gaps, e.g. singletons).
    pub frobenius: Option<u64>,
}

fn gcd_all(values: &[u64]) -> u64 {
    values.iter().fold(0, |g, &v| g.gcd(&v))
}

/// Representable values in `[0, n]`.
fn representable(values: &[u64], n: u64) -> Vec<bool> {
    let n = n as usize;
    let mut rep = vec![false; n + 1];
    rep[0] = true;
    for &v in values {
        let v = v as usize;
        for i in v..=n {
            if rep[i - v] {
                rep[i] = true;
            }
        }
    }
    rep
}

/// Frobenius number of a coprime list, or `None` if 1 is in it.
fn coprime_frobenius(values: &[u64]) -> Result<Option<u64>> {
    let min = *values.iter().min().expect("nonempty");
    if min == 1 {
        return Ok(None);
    }
    let mut pair: Option<u64> = None;
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i + 1..] {
            if a.gcd(&b) == 1 {
                let p = a.saturating_mul(b);
                pair = Some(pair.map_or(p, |q| q.min(p)));
            }
        }
    }
    // F(a, b) = ab - a - b < ab, so the pair product already certifies.
    let mut ceiling = pair.unwrap_or_else(|| values.iter().max().unwrap().saturating_mul(2 * min));
    loop {
        if ceiling > MAX_FROBENIUS_TABLE {
            return Err(Error::Overflow("Frobenius table"));
        }
        let rep = representable(values, ceiling);
        let last_gap = rep.iter().rposition(|&r| !r).expect("1 is not representable") as u64;
        if ceiling - last_gap >= min {
            return Ok(Some(last_gap));
        }
        ceiling *= 2;
    }
}

fn frobenius_of(values: &[u64], subset: Vec<usize>) -> Result<FrobeniusData> {
    let g = gcd_all(values);
    let reduced: Vec<u64> = values.iter().map(|v| v / g).collect();
    let frobenius = coprime_frobenius(&reduced)?.map(|f| f * g);
    Ok(FrobeniusData { subset, g, frobenius })
}

/// `F(X') = max(Sg(gcd X') \ Sg(X'))` for a list of positive integers.
pub fn frobenius(values: &[u64]) -> Result<FrobeniusData> {
    if values.is_empty() {
        return Err(Error::EmptyInstance);
    }
    if values.contains(&0) {
        return Err(Error::InvalidArgument("Frobenius data needs positive integers".into()));
    }
    frobenius_of(values, (0..values.len()).collect())
}

/// Frobenius data of every nonempty subset, by size then lexicographically.
pub fn subset_frobenius(x: &Instance) -> Result<Vec<FrobeniusData>> {
    let values = x.positive_knapsack()?;
    let mut out = Vec::new();
    let mut err = None;
    for k in 1..=values.len() {
        for_each_combination(values.len(), k, |s| {
            let sub: Vec<u64> = s.iter().map(|&i| values[i]).collect();
            match frobenius_of(&sub, s.to_vec()) {
                Ok(f) => out.push(f),
                Err(e) => err = Some(e),
            }
            err.is_some()
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(out)
}

/// `N0 = max F(X')` over nonempty subsets, `-1` when no subset has gaps.
pub fn n0_threshold(x: &Instance) -> Result<i64> {
    Ok(subset_frobenius(x)?.iter().filter_map(|f| f.frobenius).max().map_or(-1, |f| f as i64))
}

pub fn lcm_period(x: &Instance) -> Result<u64> {
    let values = x.positive_knapsack()?;
    values.iter().try_fold(1u64, |l, &v| {
        let g = l.gcd(&v);
        (l / g).checked_mul(v).ok_or(Error::Overflow("lcm(X)"))
    })
}

/// Shared data for the period checks: `L`, `N0` and an `m0` table.
struct Periodic {
    lcm: u64,
    n0: i64,
    table: M0Table,
}

impl Periodic {
    fn build(x: &Instance, hi: impl Fn(u64, i64) -> Result<u64>, exec: Exec) -> Result<Self> {
        let lcm = lcm_period(x)?;
        let n0 = n0_threshold(x)?;
        let table = m0_table(x, &[hi(lcm, n0)?], exec)?;
        Ok(Periodic { lcm, n0, table })
    }

    fn m0(&self, b: u64) -> Option<usize> {
        self.table.at(b as usize)
    }

    /// First `b > N0` with `b >= 1`.
    fn start(&self) -> u64 {
        (self.n0 + 1).max(1) as u64
    }
}

fn span(base: i64, extra: &[u64]) -> Result<u64> {
    extra.iter().try_fold(base.max(0) as u64, |a, &e| a.checked_add(e)).ok_or(Error::Overflow("period window"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodCheck {
    pub holds: bool,
    /// Checked `b` range, inclusive.
    pub window: (u64, u64),
    pub first_counterexample: Option<u64>,
}

/// Checks `m0(b + L) = m0(b)` for `b` in `(N0, N0 + window]`, `b >= 1`.
pub fn verify_period(x: &Instance, window: u64) -> Result<PeriodCheck> {
    verify_period_with(x, window, Exec::default())
}

pub fn verify_period_with(x: &Instance, window: u64, exec: Exec) -> Result<PeriodCheck> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    let p = Periodic::build(x, |l, n0| span(n0, &[window, l, 1]), exec)?;
    Ok(check_shift(&p, window))
}

fn check_shift(p: &Periodic, window: u64) -> PeriodCheck {
    let lo = p.start();
    let hi = (p.n0 + window as i64) as u64;
    let first_counterexample = (lo..=hi).find(|&b| p.m0(b) != p.m0(b + p.lcm));
    PeriodCheck { holds: first_counterexample.is_none(), window: (lo, hi), first_counterexample }
}

fn smallest_period(p: &Periodic, same: impl Fn(u64, u64) -> bool) -> Result<u64> {
    let lo = p.start();
    let hi = lo + 2 * p.lcm - 1;
    (1..=p.lcm)
        .find(|&q| (lo..=hi).all(|b| same(b, b + q)))
        .ok_or_else(|| Error::InvariantViolation(format!("no period up to lcm = {}", p.lcm)))
}

/// Smallest `p >= 1` with `m0(b + p) = m0(b)` on `2L` consecutive `b > N0`.
pub fn minimal_eventual_period(x: &Instance) -> Result<u64> {
    minimal_eventual_period_with(x, Exec::default())
}

pub fn minimal_eventual_period_with(x: &Instance, exec: Exec) -> Result<u64> {
    let p = Periodic::build(x, |l, n0| span(n0, &[l.saturating_mul(3), 1]), exec)?;
    smallest_period(&p, |a, b| p.m0(a) == p.m0(b))
}

/// Smallest eventual period of the locus `m0 = 1`, i.e. of `∪ Sg(x_i)`.
pub fn unit_locus_period(x: &Instance) -> Result<u64> {
    unit_locus_period_with(x, Exec::default())
}

pub fn unit_locus_period_with(x: &Instance, exec: Exec) -> Result<u64> {
    let p = Periodic::build(x, |l, n0| span(n0, &[l.saturating_mul(3), 1]), exec)?;
    smallest_period(&p, |a, b| (p.m0(a) == Some(1)) == (p.m0(b) == Some(1)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventualBound {
    pub m: usize,
    #[serde(rename = "N0_bound")]
    pub n0_bound: i64,
    pub witness_subsets: Vec<Vec<usize>>,
    /// `m0(b) <= m` on `(N0_bound, N0_bound + L]`.
    pub holds: bool,
    /// `m0(b) = m` somewhere in that window.
    pub sharp: bool,
}

/// Eventual bound `m` from the smallest coprime subsets, with its threshold.
pub fn eventual_bound(x: &Instance) -> Result<EventualBound> {
    eventual_bound_with(x, Exec::default())
}

pub fn eventual_bound_with(x: &Instance, exec: Exec) -> Result<EventualBound> {
    let values = x.positive_knapsack()?;
    let g = gcd_all(&values);
    if g != 1 {
        return Err(Error::NotCoprime(g));
    }
    let lcm = lcm_period(x)?;
    let mut witness_subsets = Vec::new();
    let mut m = 0;
    for k in 1..=values.len() {
        for_each_combination(values.len(), k, |s| {
            if s.iter().fold(0u64, |g, &i| g.gcd(&values[i])) == 1 {
                witness_subsets.push(s.to_vec());
            }
            false
        });
        if !witness_subsets.is_empty() {
            m = k;
            break;
        }
    }
    let n0_bound = common_gap(&values, &witness_subsets)?;
    let lo = (n0_bound + 1) as u64;
    let hi = span(n0_bound, &[lcm])?;
    let table = m0_table(x, &[hi], exec)?;
    let window: Vec<Option<usize>> = (lo..=hi).map(|b| table.at(b as usize)).collect();
    Ok(EventualBound {
        m,
        n0_bound,
        holds: window.iter().all(|v| v.is_some_and(|v| v <= m)),
        sharp: window.contains(&Some(m)),
        witness_subsets,
    })
}

/// Largest `b >= 0` outside every `Sg(X_i)`, or `-1`.
fn common_gap(values: &[u64], subsets: &[Vec<usize>]) -> Result<i64> {
    let mut ceiling = u64::MAX;
    let mut lists = Vec::with_capacity(subsets.len());
    for s in subsets {
        let sub: Vec<u64> = s.iter().map(|&i| values[i]).collect();
        match coprime_frobenius(&sub)? {
            None => return Ok(-1),
            Some(f) => ceiling = ceiling.min(f),
        }
        lists.push(sub);
    }
    let reps: Vec<Vec<bool>> = lists.iter().map(|l| representable(l, ceiling)).collect();
    Ok((0..=ceiling as usize).rev().find(|&b| reps.iter().all(|r| !r[b])).map_or(-1, |b| b as i64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnapsackM0 {
    pub value: usize,
    pub argmax: Vec<u64>,
    /// Upper end of the searched range `[0, max(N0, 0) + L]`.
    pub searched_to: u64,
}

/// `M0(X) = max m0(b)` over members, from the finite range `[0, N0 + L]`.
#[allow(non_snake_case)]
pub fn M0_knapsack_exact(x: &Instance) -> Result<KnapsackM0> {
    M0_knapsack_exact_with(x, Exec::default())
}

#[allow(non_snake_case)]
pub fn M0_knapsack_exact_with(x: &Instance, exec: Exec) -> Result<KnapsackM0> {
    let p = Periodic::build(x, |l, n0| span(n0, &[l]), exec)?;
    Ok(exact_max(&p))
}

fn exact_max(p: &Periodic) -> KnapsackM0 {
    let searched_to = (p.n0.max(0) as u64) + p.lcm;
    let value = (0..=searched_to).filter_map(|b| p.m0(b)).max().unwrap_or(0);
    let argmax = (0..=searched_to).filter(|&b| p.m0(b) == Some(value)).collect();
    KnapsackM0 { value, argmax, searched_to }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct PeriodReport {
    pub L: u64,
    pub N0_period: i64,
    pub verified_window: (u64, u64),
    pub verified: bool,
    pub first_counterexample: Option<u64>,
    pub minimal_period_observed: u64,
    /// Absent when `gcd(X) > 1`.
    pub m: Option<usize>,
    pub N0_bound: Option<i64>,
    pub M0_exact: usize,
    pub M0_argmax: Vec<u64>,
}

/// Everything above for one knapsack, from a single table.
pub fn period_report(x: &Instance, window: u64) -> Result<PeriodReport> {
    period_report_with(x, window, Exec::default())
}

pub fn period_report_with(x: &Instance, window: u64, exec: Exec) -> Result<PeriodReport> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    let p = Periodic::build(x, |l, n0| Ok(span(n0, &[window, l, 1])?.max(span(n0, &[l.saturating_mul(3), 1])?)), exec)?;
    let check = check_shift(&p, window);
    let minimal = smallest_period(&p, |a, b| p.m0(a) == p.m0(b))?;
    let exact = exact_max(&p);
    let (m, n0_bound) = match eventual_bound_with(x, exec) {
        Ok(e) => (Some(e.m), Some(e.n0_bound)),
        Err(Error::NotCoprime(_)) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(PeriodReport {
        L: p.lcm,
        N0_period: p.n0,
        verified_window: check.window,
        verified: check.holds,
        first_counterexample: check.first_counterexample,
        minimal_period_observed: minimal,
        m,
        N0_bound: n0_bound,
        M0_exact: exact.value,
        M0_argmax: exact.argmax,
    })
}
