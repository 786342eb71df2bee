//! Generator sets `X = {x_1, ..., x_t}` in `Z^d` and coefficient vectors
//! over them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// A finite list of nonzero integer generators of common dimension `d`.
///
/// Repeated generators are allowed; the list is the column list of the
/// matrix `A` in `A y = b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    dim: usize,
    generators: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    d: usize,
    generators: Vec<Vec<i64>>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        Instance::new(raw.d, raw.generators)
    }
}

impl From<Instance> for RawInstance {
    fn from(x: Instance) -> Self {
        RawInstance { d: x.dim, generators: x.generators }
    }
}

impl Instance {
    pub fn new(dim: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
            }
            if g.iter().all(|&v| v == 0) {
                return Err(Error::ZeroGenerator(i));
            }
        }
        Ok(Instance { dim, generators })
    }

    /// A one-dimensional instance (knapsack) from scalar generators.
    pub fn knapsack(values: &[i64]) -> Result<Self> {
        Instance::new(1, values.iter().map(|&v| vec![v]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators `t`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &[i64] {
        &self.generators[i]
    }

    /// `||X||_inf`, the largest absolute entry over all generators.
    pub fn max_norm(&self) -> u64 {
        self.generators.iter().flat_map(|g| g.iter()).map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    /// Sub-instance on the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Instance::new(self.dim, indices.iter().map(|&i| self.generators[i].clone()).collect())
    }

    /// The `t x d` matrix `W(X)` whose rows are the generators.
    pub fn row_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.generators)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.generators.iter().all(|g| g.iter().all(|&v| v >= 0))
    }

    pub fn require_nonnegative(&self) -> Result<()> {
        if self.is_nonnegative() {
            Ok(())
        } else {
            Err(Error::NegativeEntry("generators must be componentwise non-negative".into()))
        }
    }

    /// Scalar generators when the instance is a knapsack with strictly
    /// positive entries.
    pub fn positive_knapsack(&self) -> Result<Vec<u64>> {
        if self.dim != 1 {
            return Err(Error::NotKnapsack(format!("dimension is {}", self.dim)));
        }
        self.generators
            .iter()
            .map(|g| {
                if g[0] > 0 {
                    Ok(g[0] as u64)
                } else {
                    Err(Error::NotKnapsack(format!("generator {} is not positive", g[0])))
                }
            })
            .collect()
    }

    /// `sum_i coeffs_i x_i`, in wide arithmetic.
    pub fn combine(&self, coeffs: &[u64]) -> Result<Vec<i128>> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: coeffs.len() });
        }
        let mut acc = vec![0i128; self.dim];
        for (g, &c) in self.generators.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (a, &v) in acc.iter_mut().zip(g) {
                *a = a.checked_add(i128::from(v) * i128::from(c)).ok_or(Error::Overflow("linear combination"))?;
            }
        }
        Ok(acc)
    }
}

/// A non-negative coefficient vector `lambda` over an instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    pub coeffs: Vec<u64>,
}

impl Solution {
    pub fn new(coeffs: Vec<u64>) -> Self {
        Solution { coeffs }
    }

    pub fn zeros(t: usize) -> Self {
        Solution { coeffs: vec![0; t] }
    }

    /// Indices with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// Checks `sum lambda_i x_i = rhs`.
    pub fn verify(&self, x: &Instance, rhs: &[i64]) -> Result<()> {
        if rhs.len() != x.dim() {
            return Err(Error::DimensionMismatch { expected: x.dim(), found: rhs.len() });
        }
        let sum = x.combine(&self.coeffs)?;
        if sum.iter().zip(rhs).all(|(&s, &b)| s == i128::from(b)) {
            Ok(())
        } else {
            Err(Error::InvalidSolution(format!("combination {sum:?} differs from {rhs:?}")))
        }
    }
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination<F>(n: usize, k: usize, mut f: F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return false;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_combination(n, k, |c| {
        out.push(c.to_vec());
        false
    });
    out
}
