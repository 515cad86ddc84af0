//! Gap records g_n = p_{n+1} - p_n.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::Primes;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRecord {
    pub n: u64,
    pub p_n: u64,
    pub p_next: u64,
    pub g: u64,
}

impl GapRecord {
    pub fn new(n: u64, p_n: u64, p_next: u64) -> Self {
        Self {
            n,
            p_n,
            p_next,
            g: p_next - p_n,
        }
    }
}

/// Records for every n in `[n_start, n_end]`, in increasing n.
pub struct GapStream {
    table: Arc<Vec<u64>>,
    next: u64,
    end: u64,
}

impl Iterator for GapStream {
    type Item = GapRecord;

    fn next(&mut self) -> Option<GapRecord> {
        if self.next > self.end {
            return None;
        }
        let i = self.next as usize - 1;
        let rec = GapRecord::new(self.next, self.table[i], self.table[i + 1]);
        self.next += 1;
        Some(rec)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end + 1).saturating_sub(self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for GapStream {}

pub fn gap_stream(primes: &Primes, n_start: u64, n_end: u64) -> Result<GapStream> {
    if n_start == 0 {
        return Err(Error::domain("gap index must be at least 1"));
    }
    if n_start > n_end {
        return Err(Error::EmptyRange {
            start: n_start,
            end: n_end,
        });
    }
    let table = primes.ensure(n_end + 1)?;
    Ok(GapStream {
        table,
        next: n_start,
        end: n_end,
    })
}

pub fn gap(primes: &Primes, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("gap index must be at least 1"));
    }
    Ok(primes.nth(n + 1)? - primes.nth(n)?)
}

pub fn gap_record(primes: &Primes, n: u64) -> Result<GapRecord> {
    if n == 0 {
        return Err(Error::domain("gap index must be at least 1"));
    }
    Ok(GapRecord::new(n, primes.nth(n)?, primes.nth(n + 1)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_records() {
        let primes = Primes::new();
        let recs: Vec<_> = gap_stream(&primes, 1, 3).unwrap().collect();
        assert_eq!(
            recs,
            vec![
                GapRecord { n: 1, p_n: 2, p_next: 3, g: 1 },
                GapRecord { n: 2, p_n: 3, p_next: 5, g: 2 },
                GapRecord { n: 3, p_n: 5, p_next: 7, g: 2 },
            ]
        );
        let four: Vec<_> = gap_stream(&primes, 4, 4).unwrap().collect();
        assert_eq!(four, vec![GapRecord { n: 4, p_n: 7, p_next: 11, g: 4 }]);
    }

    #[test]
    fn single_gaps() {
        let primes = Primes::new();
        assert_eq!(gap(&primes, 1).unwrap(), 1);
        assert_eq!(gap(&primes, 4).unwrap(), 4);
        assert_eq!(gap(&primes, 100).unwrap(), 6);
        assert!(gap(&primes, 0).is_err());
    }

    #[test]
    fn bad_ranges() {
        let primes = Primes::new();
        assert!(matches!(gap_stream(&primes, 5, 4), Err(Error::EmptyRange { .. })));
        assert!(gap_stream(&primes, 0, 4).is_err());
    }

    #[test]
    fn telescoping_and_parity() {
        let primes = Primes::new();
        let mut sum = 0;
        for rec in gap_stream(&primes, 1, 5000).unwrap() {
            sum += rec.g;
            assert_eq!(sum, rec.p_next - 2);
            if rec.n >= 2 {
                assert_eq!(rec.g % 2, 0);
            }
        }
    }
}
