//! Execution strategy for the data-parallel loops (ensemble trials, figure
//! seeds, brute-force chunks).
//!
//! With the `parallel` feature enabled, [`Execution::Parallel`] fans work out
//! over the rayon pool. Without it, every strategy runs sequentially. Results
//! are always returned in index order so downstream folds are deterministic.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Evaluates `f(0), ..., f(len - 1)` and collects the results in order.
    pub fn map_range<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }
}
