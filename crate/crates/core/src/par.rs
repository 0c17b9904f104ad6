//! Data-parallel map helper with a sequential fallback.
//!
//! Output order always matches input order, so results are identical
//! with and without the `parallel` feature.

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    // Minimum chunk length keeps scheduling overhead away from grids of
    // very cheap points.
    items.into_par_iter().with_min_len(8).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
