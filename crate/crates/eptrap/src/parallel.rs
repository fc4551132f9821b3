//! Worker pool sized by `EPTRAP_THREADS`.

use eptrap_core::sweeps::{match_modesets, SweepGrid, SweepOptions, SweepResult};
use eptrap_core::ModeSet;
use rayon::prelude::*;

/// Thread cap from the environment; unset, empty or `0` means no cap.
pub fn thread_cap() -> Option<usize> {
    std::env::var("EPTRAP_THREADS").ok()?.trim().parse::<usize>().ok().filter(|&n| n > 0)
}

/// Runs `f` inside a pool that honours [`thread_cap`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        b = b.num_threads(n);
    }
    match b.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// [`eptrap_core::sweeps::sweep`] with the samples diagonalized in parallel.
pub fn sweep(grid: &SweepGrid, opts: &SweepOptions) -> eptrap_core::Result<SweepResult> {
    let sets: Vec<ModeSet> = (0..grid.samples.len())
        .into_par_iter()
        .map(|k| grid.modes_at(k, &opts.spectra))
        .collect::<eptrap_core::Result<_>>()?;
    match_modesets(&grid.samples, &sets, opts)
}
