//! Ordered index maps that run on rayon when the `parallel` feature is on.

/// Tables smaller than this are filled sequentially.
const PAR_THRESHOLD: usize = 512;

#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if count < PAR_THRESHOLD {
        (0..count).map(f).collect()
    } else {
        (0..count).into_par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let _ = PAR_THRESHOLD;
    (0..count).map(f).collect()
}

/// Like [`map_range`] but always parallel when enabled; used for trial
/// loops where every item is expensive.
#[cfg(feature = "parallel")]
pub(crate) fn map_trials<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_trials<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}
