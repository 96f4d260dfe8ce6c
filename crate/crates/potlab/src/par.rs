//! Thin data-parallel layer. With the `parallel` feature (default) batch maps
//! run on rayon; without it they fall back to a sequential loop. Output order
//! is the input order in both cases, so results are deterministic either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Sequential reference path, always available (used by the benches to
/// compare against the parallel path).
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
