//! Execution strategy for the data-parallel inner loops.
//!
//! Every parallel loop in the crate goes through [`Exec::map_range`] or
//! [`Exec::sum_range`]. Work items are indexed, and any randomness is seeded
//! from the item index, so the parallel and sequential paths return
//! identical values.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Rayon thread pool. Falls back to [`Exec::Sequential`] when the crate
    /// is built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Exec {
    /// The strategy actually used after accounting for enabled features.
    pub fn effective(self) -> Exec {
        if cfg!(feature = "parallel") {
            self
        } else {
            Exec::Sequential
        }
    }

    /// Map `f` over `0..n`, returning results in index order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Sum of `f(i)` over `0..n` for integer-valued work items.
    pub fn sum_range<F>(self, n: usize, f: F) -> u64
    where
        F: Fn(usize) -> u64 + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).sum(),
            _ => (0..n).map(f).sum(),
        }
    }

    /// Minimum of `f(i)` over `0..n`; `+∞` for an empty range. NaN values
    /// propagate so that an undefined sample cannot be hidden.
    pub fn min_range<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let pick = |a: f64, b: f64| if a.is_nan() || b.is_nan() { f64::NAN } else { a.min(b) };
        match self.effective() {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).reduce(|| f64::INFINITY, pick),
            _ => (0..n).map(f).fold(f64::INFINITY, pick),
        }
    }
}
