//! Sparse non-negative integer solutions of `A y = b`.
//!
//! * [`linalg`]: exact rank, Gram determinants, lattice height `H(X)`, and
//!   ternary kernel vectors.
//! * [`bounds`]: upper bounds on the largest minimal support `M0(X)`.
//! * [`solver`]: membership, minimal support `m0(b)`, sweeps.
//! * [`sparsify`]: constructive support reduction of a given solution.
//! * [`period`]: eventual periodicity of `m0` for positive knapsacks.

pub mod bounds;
pub mod error;
pub mod exec;
pub mod instance;
pub mod linalg;
pub mod period;
pub mod solver;
pub mod sparsify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use instance::{Instance, Solution};
