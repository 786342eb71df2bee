//! Exact membership and minimal support for non-negative generators.
//!
//! Membership `b ∈ Sg(X)` is an unbounded-knapsack reachability pass over
//! the box `[0, b]`. The minimal support `m0(b)` is found subset-first:
//! supports are tried by increasing size in lexicographic order and the
//! first subset whose semigroup contains `b` decides. Tables over a whole
//! box fold the reachability sets of all `2^t` subsets, which is what the
//! sweeps use; the fold runs through [`Exec`] and is order-independent.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::instance::{for_each_combination, Instance, Solution};

/// Largest number of cells in a search box.
pub const MAX_BOX_CELLS: u128 = 1 << 26;
/// Largest generator count for whole-box tables (`2^t` subsets).
pub const MAX_TABLE_GENERATORS: usize = 20;

const NONE: u8 = u8::MAX;

/// The box `[0, upper]` in `Z^d`, flattened with coordinate 0 fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridBox {
    upper: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
}

impl GridBox {
    pub fn new(upper: &[u64]) -> Result<Self> {
        let mut strides = Vec::with_capacity(upper.len());
        let mut size: u128 = 1;
        for &u in upper {
            strides.push(size as usize);
            size *= u128::from(u) + 1;
            if size > MAX_BOX_CELLS {
                return Err(Error::BoxTooLarge(size));
            }
        }
        Ok(GridBox { upper: upper.to_vec(), strides, size: size as usize })
    }

    pub fn dim(&self) -> usize {
        self.upper.len()
    }

    pub fn upper(&self) -> &[u64] {
        &self.upper
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index(&self, v: &[u64]) -> Option<usize> {
        if v.len() != self.dim() || v.iter().zip(&self.upper).any(|(a, u)| a > u) {
            return None;
        }
        Some(v.iter().zip(&self.strides).map(|(&a, &s)| a as usize * s).sum())
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u64> {
        self.upper
            .iter()
            .map(|&u| {
                let n = u as usize + 1;
                let c = idx % n;
                idx /= n;
                c as u64
            })
            .collect()
    }

    fn fits(&self, g: &[u64]) -> bool {
        g.iter().zip(&self.upper).all(|(a, u)| a <= u)
    }

    fn offset(&self, g: &[u64]) -> usize {
        g.iter().zip(&self.strides).map(|(&a, &s)| a as usize * s).sum()
    }
}

/// Fixed-size bit set over the cells of a box.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// `self |= self << s`, truncated to `len`.
    fn or_shifted(&mut self, s: usize) {
        let ws = s / 64;
        let bs = s % 64;
        let n = self.words.len();
        for i in (ws..n).rev() {
            let lo = self.words[i - ws];
            let mut w = lo << bs;
            if bs != 0 && i > ws {
                w |= self.words[i - ws - 1] >> (64 - bs);
            }
            self.words[i] |= w;
        }
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// `Sg(gens) ∩ box` as a bit set.
fn reachable(gens: &[&[u64]], grid: &GridBox) -> BitSet {
    let mut reach = BitSet::new(grid.size);
    reach.set(0);
    for g in gens {
        if grid.fits(g) {
            close_under(&mut reach, g, grid);
        }
    }
    reach
}

fn close_under(reach: &mut BitSet, g: &[u64], grid: &GridBox) {
    if grid.dim() == 1 {
        // Doubling: after shifts by g, 2g, 4g, ... every multiple fits.
        let mut s = g[0] as usize;
        while s > 0 && s <= grid.upper[0] as usize {
            reach.or_shifted(s);
            s *= 2;
        }
        return;
    }
    let offset = grid.offset(g);
    let mut coords = vec![0u64; grid.dim()];
    for idx in 0..grid.size {
        if reach.get(idx) && coords.iter().zip(g).zip(&grid.upper).all(|((c, a), u)| c + a <= *u) {
            reach.set(idx + offset);
        }
        for (c, u) in coords.iter_mut().zip(&grid.upper) {
            if *c < *u {
                *c += 1;
                break;
            }
            *c = 0;
        }
    }
}

/// Non-negative generators as `u64` vectors, or an error.
fn nonneg_generators(x: &Instance) -> Result<Vec<Vec<u64>>> {
    x.require_nonnegative()?;
    Ok(x.generators().iter().map(|g| g.iter().map(|&v| v as u64).collect()).collect())
}

fn nonneg_rhs(x: &Instance, b: &[i64]) -> Result<Vec<u64>> {
    if b.len() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: b.len() });
    }
    b.iter()
        .map(|&v| u64::try_from(v).map_err(|_| Error::NegativeEntry(format!("right-hand side entry {v}"))))
        .collect()
}

/// Lexicographically smallest coefficient vector supported on `support`
/// (ascending indices) with `sum = b`, if any.
fn lex_min_coefficients(gens: &[Vec<u64>], support: &[usize], b: &[u64], grid: &GridBox) -> Option<Solution> {
    // suffix[k] = Sg(support[k..]) ∩ box
    let mut suffix: Vec<BitSet> = Vec::with_capacity(support.len() + 1);
    for k in 0..=support.len() {
        let tail: Vec<&[u64]> = support[k..].iter().map(|&i| gens[i].as_slice()).collect();
        suffix.push(reachable(&tail, grid));
    }
    if !suffix[0].get(grid.index(b)?) {
        return None;
    }
    let mut coeffs = vec![0u64; gens.len()];
    let mut rem = b.to_vec();
    for (k, &i) in support.iter().enumerate() {
        let g = &gens[i];
        let mut c = 0u64;
        loop {
            if suffix[k + 1].get(grid.index(&rem).expect("inside box")) {
                break;
            }
            if rem.iter().zip(g).any(|(r, a)| r < a) {
                unreachable!("suffix table promised a completion");
            }
            for (r, a) in rem.iter_mut().zip(g) {
                *r -= a;
            }
            c += 1;
        }
        coeffs[i] = c;
    }
    Some(Solution::new(coeffs))
}

/// `b ∈ Sg(X)`, with the lexicographically smallest witness when it holds.
pub fn is_member(x: &Instance, b: &[i64]) -> Result<Option<Solution>> {
    let gens = nonneg_generators(x)?;
    let b = nonneg_rhs(x, b)?;
    let grid = GridBox::new(&b)?;
    let all: Vec<usize> = (0..x.len()).collect();
    Ok(lex_min_coefficients(&gens, &all, &b, &grid))
}

/// First support (by size, then lexicographic) whose semigroup contains `b`.
fn first_support(gens: &[Vec<u64>], b: &[u64], grid: &GridBox) -> Option<Vec<usize>> {
    let target = grid.index(b)?;
    let refs: Vec<&[u64]> = gens.iter().map(Vec::as_slice).collect();
    if !reachable(&refs, grid).get(target) {
        return None;
    }
    for j in 0..=gens.len() {
        let mut hit = None;
        for_each_combination(gens.len(), j, |subset| {
            let sub: Vec<&[u64]> = subset.iter().map(|&i| gens[i].as_slice()).collect();
            if reachable(&sub, grid).get(target) {
                hit = Some(subset.to_vec());
                true
            } else {
                false
            }
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// `m0(b) = min{ |supp(lambda)| : lambda ∈ P_X(b) }`, or `None` when `b`
/// is not in the semigroup.
pub fn m0(x: &Instance, b: &[i64]) -> Result<Option<usize>> {
    let gens = nonneg_generators(x)?;
    let b = nonneg_rhs(x, b)?;
    let grid = GridBox::new(&b)?;
    Ok(first_support(&gens, &b, &grid).map(|s| s.len()))
}

/// A solution attaining `m0(b)`: the lexicographically smallest support of
/// that size, then the lexicographically smallest coefficients on it.
pub fn min_support_solution(x: &Instance, b: &[i64]) -> Result<Option<Solution>> {
    let gens = nonneg_generators(x)?;
    let b = nonneg_rhs(x, b)?;
    let grid = GridBox::new(&b)?;
    let Some(support) = first_support(&gens, &b, &grid) else {
        return Ok(None);
    };
    Ok(lex_min_coefficients(&gens, &support, &b, &grid))
}

/// `m0` at every cell of a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M0Table {
    grid: GridBox,
    values: Vec<u8>,
}

impl M0Table {
    pub fn grid(&self) -> &GridBox {
        &self.grid
    }

    pub fn get(&self, b: &[u64]) -> Option<usize> {
        self.grid.index(b).and_then(|i| self.at(i))
    }

    /// Value at a flattened index.
    pub fn at(&self, idx: usize) -> Option<usize> {
        match self.values[idx] {
            NONE => None,
            v => Some(v as usize),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest `m0` over members in the box.
    pub fn max(&self) -> usize {
        self.values.iter().filter(|&&v| v != NONE).map(|&v| v as usize).max().unwrap_or(0)
    }
}

/// `m0` over the box `[0, upper]`, folding all `2^t` subset semigroups.
pub fn m0_table(x: &Instance, upper: &[u64], exec: Exec) -> Result<M0Table> {
    if upper.len() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: upper.len() });
    }
    let gens = nonneg_generators(x)?;
    let t = gens.len();
    if t > MAX_TABLE_GENERATORS {
        return Err(Error::InvalidArgument(format!(
            "whole-box tables support at most {MAX_TABLE_GENERATORS} generators, got {t}"
        )));
    }
    let grid = GridBox::new(upper)?;
    let masks: Vec<u32> = (0..1u32 << t).collect();
    let size = grid.size;
    let values = exec.fold_reduce(
        &masks,
        || vec![NONE; size],
        |mut acc, &mask| {
            let sub: Vec<&[u64]> = (0..t).filter(|i| mask >> i & 1 == 1).map(|i| gens[i].as_slice()).collect();
            let k = mask.count_ones() as u8;
            for idx in reachable(&sub, &grid).ones() {
                if k < acc[idx] {
                    acc[idx] = k;
                }
            }
            acc
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                if y < *x {
                    *x = y;
                }
            }
            a
        },
    );
    Ok(M0Table { grid, values })
}

/// One point of a sweep: `at` is `b` for interval sweeps and the dilation
/// factor for dilation sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepPoint {
    pub at: u64,
    pub m0: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepDomain {
    Interval { lo: u64, hi: u64 },
    Dilation { direction: Vec<i64>, lambda_max: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepResult {
    pub domain: SweepDomain,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn value(&self, at: u64) -> Option<usize> {
        self.points.iter().find(|p| p.at == at).and_then(|p| p.m0)
    }

    pub fn members(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        self.points.iter().filter_map(|p| p.m0.map(|v| (p.at, v)))
    }
}

/// `m0(b)` for `b = 0..=b_max` on a positive knapsack.
pub fn m0_sweep(x: &Instance, b_max: i64) -> Result<SweepResult> {
    m0_sweep_with(x, b_max, Exec::default())
}

pub fn m0_sweep_with(x: &Instance, b_max: i64, exec: Exec) -> Result<SweepResult> {
    x.positive_knapsack()?;
    let hi = u64::try_from(b_max).map_err(|_| Error::InvalidArgument(format!("b_max = {b_max} is negative")))?;
    let table = m0_table(x, &[hi], exec)?;
    let points = (0..=hi).map(|b| SweepPoint { at: b, m0: table.at(b as usize) }).collect();
    Ok(SweepResult { domain: SweepDomain::Interval { lo: 0, hi }, points })
}

/// Start `s` and period `p` of the earliest eventually-periodic tail seen
/// in a finite window. Observational only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ObservedPeriod {
    pub start: u64,
    pub period: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DilationReport {
    pub sweep: SweepResult,
    pub observed: Option<ObservedPeriod>,
}

impl DilationReport {
    pub fn values(&self) -> Vec<Option<usize>> {
        self.sweep.points.iter().map(|p| p.m0).collect()
    }
}

/// Smallest start `s >= 1`, then smallest `p >= 1`, with `s + 2p <= n` and
/// `seq[k] == seq[k + p]` for all `s <= k <= n - p` (1-based).
pub fn observed_period<T: PartialEq>(seq: &[T]) -> Option<ObservedPeriod> {
    let n = seq.len();
    let at = |k: usize| &seq[k - 1];
    for s in 1..=n {
        for p in 1..=n {
            if s + 2 * p > n {
                break;
            }
            if (s..=n - p).all(|k| at(k) == at(k + p)) {
                return Some(ObservedPeriod { start: s as u64, period: p as u64 });
            }
        }
    }
    None
}

/// `m0(lambda b)` for `lambda = 1..=lambda_max`, plus the observed period.
pub fn dilation_sequence(x: &Instance, b: &[i64], lambda_max: u64) -> Result<DilationReport> {
    dilation_sequence_with(x, b, lambda_max, Exec::default())
}

pub fn dilation_sequence_with(x: &Instance, b: &[i64], lambda_max: u64, exec: Exec) -> Result<DilationReport> {
    let base = nonneg_rhs(x, b)?;
    if is_member(x, b)?.is_none() {
        return Err(Error::NotMember);
    }
    let upper: Vec<u64> = base
        .iter()
        .map(|&v| v.checked_mul(lambda_max).ok_or(Error::Overflow("dilation box")))
        .collect::<Result<_>>()?;
    let table = m0_table(x, &upper, exec)?;
    let points: Vec<SweepPoint> = (1..=lambda_max)
        .map(|l| {
            let p: Vec<u64> = base.iter().map(|&v| v * l).collect();
            SweepPoint { at: l, m0: table.get(&p) }
        })
        .collect();
    let values: Vec<Option<usize>> = points.iter().map(|p| p.m0).collect();
    Ok(DilationReport {
        observed: observed_period(&values),
        sweep: SweepResult { domain: SweepDomain::Dilation { direction: b.to_vec(), lambda_max }, points },
    })
}

/// Largest `m0` over members in `[0, upper]`: a lower estimate of `M0(X)`.
#[allow(non_snake_case)]
pub fn M0_box(x: &Instance, upper: &[u64]) -> Result<usize> {
    M0_box_with(x, upper, Exec::default())
}

#[allow(non_snake_case)]
pub fn M0_box_with(x: &Instance, upper: &[u64], exec: Exec) -> Result<usize> {
    Ok(m0_table(x, upper, exec)?.max())
}
