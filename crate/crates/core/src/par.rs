//! Order-preserving data-parallel maps.
//!
//! With the `parallel` feature the maps run on the rayon pool; without it they
//! run sequentially. Both variants return results in input order, and every
//! reduction downstream folds those results in index order, so output is
//! bit-identical either way.

/// Inputs shorter than this are mapped sequentially even when parallelism is on.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 32;

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if items.len() < MIN_PARALLEL_LEN {
        return items.iter().map(f).collect();
    }
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if n < MIN_PARALLEL_LEN {
        return (0..n).map(f).collect();
    }
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Whether this build maps in parallel.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
