//! Execution policy for the data-parallel loops.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Selects how an embarrassingly parallel loop is run.
///
/// `Parallel` falls back to sequential execution when the crate is built
/// without the `parallel` feature, so results never depend on the policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `range`, preserving order.
    pub fn map_range<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Short-circuiting conjunction over `range`.
    pub fn all<F>(self, range: Range<u64>, f: F) -> bool
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().all(f);
        }
        range.into_iter().all(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let sq = |n: u64| n * n;
        assert_eq!(
            Exec::Sequential.map_range(0..100, sq),
            Exec::Parallel.map_range(0..100, sq)
        );
        assert!(Exec::Parallel.all(0..50, |n| n < 50));
        assert!(!Exec::Sequential.all(0..50, |n| n < 49));
    }
}
