use std::ops::Range;

use rayon::prelude::*;

use crate::{Error, Result};

/// Samples per block. Fixed so that block boundaries, and therefore the
/// order of every reduction, do not depend on the worker count.
pub(crate) const BLOCK: u64 = 2048;

/// Worker count with `0` meaning every available core.
pub fn resolve_workers(workers: usize) -> usize {
    if workers > 0 {
        return workers;
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Runs `f` on consecutive index blocks covering `0..samples` and returns
/// the per-block results in block order.
pub(crate) fn blocks<T, F>(samples: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync,
{
    let nblocks = samples.div_ceil(BLOCK);
    let run = || {
        (0..nblocks)
            .into_par_iter()
            .map(|b| f(b * BLOCK..((b + 1) * BLOCK).min(samples)))
            .collect::<Vec<T>>()
    };
    let workers = resolve_workers(workers);
    if workers == 1 {
        return Ok((0..nblocks)
            .map(|b| f(b * BLOCK..((b + 1) * BLOCK).min(samples)))
            .collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(run))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_range_in_order() {
        let r = blocks(5000, 3, |r| (r.start, r.end)).unwrap();
        assert_eq!(r, vec![(0, 2048), (2048, 4096), (4096, 5000)]);
        assert!(blocks(0, 2, |r| r.start).unwrap().is_empty());
    }
}
