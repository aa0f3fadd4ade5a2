//! Execution strategies for the data-parallel inner loops (series terms,
//! Monte Carlo blocks, finite-difference stencils).
//!
//! Every strategy returns results in input order, and callers reduce those
//! results sequentially. Output is therefore bit-identical whichever
//! strategy runs it and however many worker threads are available.
//!
//! [`Rayon`] is only available with the `parallel` feature (on by default).
//! [`DefaultExecutor`] names whichever strategy the build enables.

/// An order-preserving map over independent work items.
pub trait Executor {
    /// Apply `f` to every item, returning results in input order.
    fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send;

    /// Apply `f` to `0..n`, returning results in index order.
    fn map_range<R, F>(n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send;
}

/// Runs everything on the calling thread.
pub enum Sequential {}

impl Executor for Sequential {
    fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }

    fn map_range<R, F>(n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

/// Spreads work over the global rayon pool.
#[cfg(feature = "parallel")]
pub enum Rayon {}

#[cfg(feature = "parallel")]
impl Executor for Rayon {
    fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }

    fn map_range<R, F>(n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
}

#[cfg(feature = "parallel")]
pub type DefaultExecutor = Rayon;

#[cfg(not(feature = "parallel"))]
pub type DefaultExecutor = Sequential;
