//! Chunked map over an index range, parallel when the `parallel` feature is
//! enabled.
//!
//! Callers split their work into a number of chunks that depends only on the
//! problem size. Chunk results come back in chunk order, so any fold over
//! them is independent of how many threads ran the chunks.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Mode used by [`map_chunks`] on the current thread.
pub fn mode() -> Mode {
    if cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(Cell::get) {
        Mode::Parallel
    } else {
        Mode::Sequential
    }
}

/// Runs `f` with the given mode on the current thread. `Parallel` is a no-op
/// request when the crate was built without the `parallel` feature.
pub fn with_mode<R>(mode: Mode, f: impl FnOnce() -> R) -> R {
    let prev = FORCE_SEQUENTIAL.with(|c| c.replace(mode == Mode::Sequential));
    let out = f();
    FORCE_SEQUENTIAL.with(|c| c.set(prev));
    out
}

/// Runs `f` inside a dedicated rayon pool with `threads` workers (0 means the
/// global default). Without the `parallel` feature this just calls `f`.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if threads > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                return pool.install(f);
            }
        }
        f()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

/// Applies `f` to every chunk index in `0..chunks` and returns the results in
/// chunk order.
pub fn map_chunks<T, F>(chunks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode() {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            (0..chunks).into_par_iter().map(f).collect()
        }
        _ => (0..chunks).map(f).collect(),
    }
}

/// Splits `0..total` into at most `max_chunks` contiguous ranges of nearly
/// equal length.
pub fn split_range(total: u64, max_chunks: u64) -> Vec<std::ops::Range<u64>> {
    if total == 0 {
        return Vec::new();
    }
    let chunks = max_chunks.clamp(1, total);
    let base = total / chunks;
    let extra = total % chunks;
    let mut out = Vec::with_capacity(chunks as usize);
    let mut start = 0;
    for i in 0..chunks {
        let len = base + u64::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}
