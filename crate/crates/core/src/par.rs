//! Range-parallel helpers whose results never depend on the worker count.

use rayon::prelude::*;

use crate::error::Result;
use crate::sieve::thread_pool;

/// Indices per work item.
pub(crate) const CHUNK: u64 = 2048;

/// Evaluate `f` over consecutive chunks of `[start, end]` and return the
/// per-chunk results in index order.
pub(crate) fn map_chunks<T, F>(start: u64, end: u64, parallelism: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    if start > end {
        return Ok(Vec::new());
    }
    let chunks: Vec<(u64, u64)> = (0..=(end - start) / CHUNK)
        .map(|i| {
            let lo = start + i * CHUNK;
            (lo, (lo + CHUNK - 1).min(end))
        })
        .collect();
    if parallelism <= 1 {
        return Ok(chunks.into_iter().map(|(lo, hi)| f(lo, hi)).collect());
    }
    let pool = thread_pool(parallelism)?;
    Ok(pool.install(|| chunks.into_par_iter().map(|(lo, hi)| f(lo, hi)).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Probe {
    Pass,
    Hit,
    Unresolved,
}

/// Smallest index in `[start, end]` where `probe` reports a hit (or fails),
/// plus every unresolved index before it. Work proceeds in waves so a hit
/// early in a long range stops the scan soon.
pub(crate) fn first_hit<F>(start: u64, end: u64, parallelism: usize, probe: F) -> Result<(Option<u64>, Vec<u64>)>
where
    F: Fn(u64) -> Result<Probe> + Sync,
{
    let mut unresolved = Vec::new();
    let wave = CHUNK * 4 * parallelism.max(1) as u64;
    let mut lo = start;
    while lo <= end {
        let hi = lo.saturating_add(wave - 1).min(end);
        let results = map_chunks(lo, hi, parallelism, |a, b| {
            let mut skipped = Vec::new();
            for n in a..=b {
                match probe(n) {
                    Ok(Probe::Pass) => {}
                    Ok(Probe::Unresolved) => skipped.push(n),
                    Ok(Probe::Hit) => return (skipped, Some(Ok(n))),
                    Err(e) => return (skipped, Some(Err(e))),
                }
            }
            (skipped, None)
        })?;
        for (skipped, event) in results {
            unresolved.extend(skipped);
            match event {
                Some(Ok(n)) => return Ok((Some(n), unresolved)),
                Some(Err(e)) => return Err(e),
                None => {}
            }
        }
        if hi == end {
            break;
        }
        lo = hi + 1;
    }
    Ok((None, unresolved))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range_in_order() {
        for workers in [1, 4] {
            let spans = map_chunks(5, 10_000, workers, |a, b| (a, b)).unwrap();
            assert_eq!(spans.first().unwrap().0, 5);
            assert_eq!(spans.last().unwrap().1, 10_000);
            for w in spans.windows(2) {
                assert_eq!(w[0].1 + 1, w[1].0);
            }
        }
        assert!(map_chunks(3, 2, 1, |a, _| a).unwrap().is_empty());
    }

    #[test]
    fn first_hit_is_smallest() {
        for workers in [1, 3, 8] {
            let (hit, skipped) = first_hit(1, 100_000, workers, |n| {
                Ok(if n % 7919 == 0 || n == 40_000 {
                    Probe::Hit
                } else if n % 1000 == 0 {
                    Probe::Unresolved
                } else {
                    Probe::Pass
                })
            })
            .unwrap();
            assert_eq!(hit, Some(7919));
            assert_eq!(skipped, (1..=7).map(|k| k * 1000).collect::<Vec<_>>());
        }
        let (hit, _) = first_hit(1, 50, 2, |_| Ok(Probe::Pass)).unwrap();
        assert_eq!(hit, None);
    }
}
