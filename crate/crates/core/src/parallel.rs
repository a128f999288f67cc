//! Order-preserving map that runs on the rayon pool when the `parallel`
//! feature is on and sequentially otherwise.

#[cfg(feature = "parallel")]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Applies `f` to every item and collects in input order, stopping at the
/// first error (by index, not by completion time).
pub fn try_map_ordered<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    map_ordered(items, f).into_iter().collect()
}

/// Caps the global pool at `n` threads, 0 meaning one per core. Only the
/// first call in a process takes effect.
#[cfg(feature = "parallel")]
pub fn set_threads(n: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
pub fn set_threads(_n: usize) -> Result<(), String> {
    Ok(())
}
