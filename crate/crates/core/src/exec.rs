//! Execution strategy for the data-parallel loops (sweeps over subsets,
//! boxes and random families).
//!
//! With the `parallel` feature, [`Exec::Parallel`] dispatches to rayon and
//! runs on whatever pool is current, so callers can bound the thread count
//! with `ThreadPool::install`. Every helper here returns results in input
//! order, which keeps outputs bit-identical across strategies.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }

    /// Maps `f` over `0..n`, preserving order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    /// First `Some` in input order.
    pub fn find_map_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().find_map(f),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().find_map_first(f),
        }
    }

    /// Folds per-item values into accumulators and merges them with an
    /// associative, commutative `merge`.
    pub fn fold_reduce<T, A, Id, Fo, Me>(self, items: &[T], identity: Id, fold: Fo, merge: Me) -> A
    where
        T: Sync,
        A: Send,
        Id: Fn() -> A + Sync + Send,
        Fo: Fn(A, &T) -> A + Sync + Send,
        Me: Fn(A, A) -> A + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().fold(identity(), fold),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().fold(&identity, &fold).reduce(&identity, &merge),
        }
    }
}

/// Runs `f` with `threads` workers: one thread means [`Exec::Sequential`],
/// more means [`Exec::Parallel`] on a dedicated pool of that size. Without
/// the `parallel` feature every count runs sequentially.
pub fn with_threads<R, F>(threads: usize, f: F) -> Result<R, String>
where
    R: Send,
    F: FnOnce(Exec) -> R + Send,
{
    #[cfg(feature = "parallel")]
    if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        return Ok(pool.install(|| f(Exec::Parallel)));
    }
    let _ = threads;
    Ok(f(Exec::Sequential))
}
