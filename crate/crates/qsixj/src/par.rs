//! Data-parallel map helper with a sequential fallback.
//!
//! Batch workloads (tables, verification sweeps) fan out over independent
//! pure computations. With the `parallel` feature (default) they run on the
//! rayon pool; without it the same call sites run sequentially. Output order
//! matches input order in both cases.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
