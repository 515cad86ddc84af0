//! Segmented sieve of Eratosthenes over odd numbers.
//!
//! Each segment is a bitmap holding one bit per odd number, so a segment of
//! `segment_size` integers costs `segment_size / 16` bytes. Batches of
//! segments are sieved concurrently and emitted in order, which keeps every
//! consumer on a strictly increasing stream no matter how many workers ran.

use std::collections::VecDeque;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest accepted sieve limit.
pub const MAX_LIMIT: u64 = i64::MAX as u64;
pub const MIN_SEGMENT_SIZE: u64 = 1024;
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;

const SMALL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub limit: u64,
    pub segment_size: u64,
    pub parallelism: usize,
}

impl SieveConfig {
    pub fn new(limit: u64) -> Result<Self> {
        let config = Self {
            limit,
            segment_size: DEFAULT_SEGMENT_SIZE,
            parallelism: default_parallelism(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_segment_size(mut self, segment_size: u64) -> Result<Self> {
        self.segment_size = segment_size;
        self.validate()?;
        Ok(self)
    }

    pub fn with_parallelism(mut self, parallelism: usize) -> Result<Self> {
        self.parallelism = parallelism;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.limit < 2 {
            return Err(Error::EmptyRange {
                start: 2,
                end: self.limit,
            });
        }
        if self.limit > MAX_LIMIT {
            return Err(Error::Config(format!(
                "limit {} exceeds 2^63 - 1",
                self.limit
            )));
        }
        if self.segment_size < MIN_SEGMENT_SIZE {
            return Err(Error::Config(format!(
                "segment size {} is below {MIN_SEGMENT_SIZE}",
                self.segment_size
            )));
        }
        if self.parallelism == 0 {
            return Err(Error::Config("parallelism must be at least 1".into()));
        }
        Ok(())
    }

    /// Odd slots per segment.
    fn slots(&self) -> u64 {
        self.segment_size / 2
    }

    /// Index of the largest odd number not above the limit (odd `m` lives at `(m - 1) / 2`).
    fn last_slot(&self) -> u64 {
        (self.limit - 1) / 2
    }

    fn segment_count(&self) -> u64 {
        self.last_slot() / self.slots() + 1
    }
}

pub fn default_parallelism() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

pub(crate) fn thread_pool(parallelism: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Odd base primes up to `sqrt(limit)`, which is all a segment needs.
fn base_primes(limit: u64) -> Vec<u64> {
    let root = limit.isqrt();
    if root < 3 {
        return Vec::new();
    }
    if root <= 1 << 16 {
        simple_odd_primes(root)
    } else {
        let config = SieveConfig {
            limit: root,
            segment_size: DEFAULT_SEGMENT_SIZE,
            parallelism: 1,
        };
        PrimeStream::new(config)
            .expect("base-prime config is valid")
            .map(|(_, p)| p)
            .filter(|&p| p != 2)
            .collect()
    }
}

fn simple_odd_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    let mut m = 3;
    while m <= limit {
        if !composite[m] {
            out.push(m as u64);
            let mut k = m * m;
            while k <= limit {
                composite[k] = true;
                k += 2 * m;
            }
        }
        m += 2;
    }
    out
}

/// Sieve one segment and return a composite bitmap over its odd slots.
fn sieve_segment(config: &SieveConfig, base: &[u64], segment: u64) -> (u64, u64, Vec<u64>) {
    let first = segment * config.slots();
    let end = (first + config.slots()).min(config.last_slot() + 1);
    let len = (end - first) as usize;
    let mut bits = vec![0u64; len.div_ceil(64)];
    let hi_value = 2 * (end - 1) + 1;
    let lo_value = 2 * first + 1;

    for &p in base {
        let square = p * p;
        if square > hi_value {
            break;
        }
        let mut m = if square >= lo_value {
            square
        } else {
            lo_value.div_ceil(p) * p
        };
        if m % 2 == 0 {
            m += p;
        }
        let mut slot = ((m - 1) / 2 - first) as usize;
        let step = p as usize;
        while slot < len {
            bits[slot / 64] |= 1 << (slot % 64);
            slot += step;
        }
    }
    if first == 0 {
        // the number 1
        bits[0] |= 1;
    }
    if !len.is_multiple_of(64) {
        let last = bits.len() - 1;
        bits[last] |= !0u64 << (len % 64);
    }
    (first, end, bits)
}

fn segment_primes(config: &SieveConfig, base: &[u64], segment: u64) -> Vec<u64> {
    let (first, _, bits) = sieve_segment(config, base, segment);
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut free = !word;
        while free != 0 {
            let bit = free.trailing_zeros() as u64;
            out.push(2 * (first + w as u64 * 64 + bit) + 1);
            free &= free - 1;
        }
    }
    out
}

fn segment_count_primes(config: &SieveConfig, base: &[u64], segment: u64) -> u64 {
    let (_, _, bits) = sieve_segment(config, base, segment);
    bits.iter().map(|w| u64::from((!w).count_ones())).sum()
}

/// Ordered `(n, p_n)` pairs, 1-based, for every prime up to the configured limit.
pub struct PrimeStream {
    config: SieveConfig,
    base: Arc<Vec<u64>>,
    pool: Option<rayon::ThreadPool>,
    next_segment: u64,
    buffer: VecDeque<u64>,
    index: u64,
    emitted_two: bool,
}

impl PrimeStream {
    pub fn new(config: SieveConfig) -> Result<Self> {
        config.validate()?;
        let pool = if config.parallelism > 1 {
            Some(thread_pool(config.parallelism)?)
        } else {
            None
        };
        Ok(Self {
            base: Arc::new(base_primes(config.limit)),
            config,
            pool,
            next_segment: 0,
            buffer: VecDeque::new(),
            index: 0,
            emitted_two: false,
        })
    }

    pub fn config(&self) -> &SieveConfig {
        &self.config
    }

    fn refill(&mut self) -> bool {
        let total = self.config.segment_count();
        while self.buffer.is_empty() && self.next_segment < total {
            let batch = (self.config.parallelism as u64 * 2).max(1);
            let range = self.next_segment..(self.next_segment + batch).min(total);
            self.next_segment = range.end;
            let config = &self.config;
            let base = &self.base;
            let chunks: Vec<Vec<u64>> = match &self.pool {
                Some(pool) => pool.install(|| {
                    range
                        .into_par_iter()
                        .map(|s| segment_primes(config, base, s))
                        .collect()
                }),
                None => range.map(|s| segment_primes(config, base, s)).collect(),
            };
            for chunk in chunks {
                self.buffer.extend(chunk);
            }
        }
        !self.buffer.is_empty()
    }
}

impl Iterator for PrimeStream {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        let p = if !self.emitted_two {
            self.emitted_two = true;
            2
        } else {
            if self.buffer.is_empty() && !self.refill() {
                return None;
            }
            self.buffer.pop_front()?
        };
        self.index += 1;
        Some((self.index, p))
    }
}

/// Stream every prime `<= limit` with default segment size and parallelism.
pub fn primes_up_to(limit: u64) -> Result<PrimeStream> {
    PrimeStream::new(SieveConfig::new(limit)?)
}

pub fn primes_up_to_with(config: SieveConfig) -> Result<PrimeStream> {
    PrimeStream::new(config)
}

/// π(x).
pub fn prime_count(x: u64) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    prime_count_with(SieveConfig::new(x)?)
}

pub fn prime_count_with(config: SieveConfig) -> Result<u64> {
    config.validate()?;
    let base = base_primes(config.limit);
    let segments = 0..config.segment_count();
    let odd = if config.parallelism > 1 {
        thread_pool(config.parallelism)?.install(|| {
            segments
                .into_par_iter()
                .map(|s| segment_count_primes(&config, &base, s))
                .sum::<u64>()
        })
    } else {
        segments
            .map(|s| segment_count_primes(&config, &base, s))
            .sum()
    };
    Ok(odd + 1)
}

/// Sieve limit guaranteed (for n >= 6) to include p_n: n (ln n + ln ln n).
pub fn index_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

/// p_n, 1-based.
pub fn nth_prime(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("prime index must be at least 1"));
    }
    if n <= SMALL_PRIMES.len() as u64 {
        return Ok(SMALL_PRIMES[n as usize - 1]);
    }
    let mut limit = index_upper_bound(n);
    loop {
        if let Some((_, p)) = primes_up_to(limit)?.nth(n as usize - 1) {
            return Ok(p);
        }
        limit = grow(limit)?;
    }
}

fn grow(limit: u64) -> Result<u64> {
    let next = (limit as f64 * 1.2).ceil() as u64;
    if limit >= MAX_LIMIT {
        return Err(Error::Config("prime index beyond 64-bit range".into()));
    }
    Ok(next.min(MAX_LIMIT))
}

/// Growable, thread-safe table of the first primes, indexed from 1.
///
/// Lookups past the end re-sieve to (at least) twice the current length.
#[derive(Debug)]
pub struct Primes {
    table: RwLock<Arc<Vec<u64>>>,
    segment_size: u64,
    parallelism: usize,
}

impl Default for Primes {
    fn default() -> Self {
        Self::new()
    }
}

impl Primes {
    pub fn new() -> Self {
        Self {
            table: RwLock::new(Arc::new(Vec::new())),
            segment_size: DEFAULT_SEGMENT_SIZE,
            parallelism: default_parallelism(),
        }
    }

    pub fn with_parallelism(parallelism: usize) -> Result<Self> {
        if parallelism == 0 {
            return Err(Error::Config("parallelism must be at least 1".into()));
        }
        Ok(Self {
            parallelism,
            ..Self::new()
        })
    }

    /// Table already holding the first `count` primes.
    pub fn with_count(count: u64) -> Result<Self> {
        let primes = Self::new();
        primes.ensure(count)?;
        Ok(primes)
    }

    pub fn parallelism(&self) -> usize {
        self.parallelism
    }

    pub fn len(&self) -> u64 {
        self.table.read().expect("prime table lock").len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Make sure p_1..=p_count are available and return a snapshot.
    pub fn ensure(&self, count: u64) -> Result<Arc<Vec<u64>>> {
        {
            let table = self.table.read().expect("prime table lock");
            if table.len() as u64 >= count {
                return Ok(Arc::clone(&table));
            }
        }
        let mut table = self.table.write().expect("prime table lock");
        if table.len() as u64 >= count {
            return Ok(Arc::clone(&table));
        }
        let target = count.max(2 * table.len() as u64).max(64);
        let mut limit = index_upper_bound(target);
        let fresh = loop {
            let config = SieveConfig::new(limit)?
                .with_segment_size(self.segment_size)?
                .with_parallelism(self.parallelism)?;
            let primes: Vec<u64> = PrimeStream::new(config)?
                .take(target as usize)
                .map(|(_, p)| p)
                .collect();
            if primes.len() as u64 >= target {
                break primes;
            }
            limit = grow(limit)?;
        };
        *table = Arc::new(fresh);
        Ok(Arc::clone(&table))
    }

    /// p_n, 1-based.
    pub fn nth(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::domain("prime index must be at least 1"));
        }
        {
            let table = self.table.read().expect("prime table lock");
            if let Some(&p) = table.get(n as usize - 1) {
                return Ok(p);
            }
        }
        Ok(self.ensure(n)?[n as usize - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&m| (2..).take_while(|d| d * d <= m).all(|d| m % d != 0))
            .collect()
    }

    #[test]
    fn small_limits() {
        let ten: Vec<_> = primes_up_to(10).unwrap().collect();
        assert_eq!(ten, vec![(1, 2), (2, 3), (3, 5), (4, 7)]);
        let two: Vec<_> = primes_up_to(2).unwrap().collect();
        assert_eq!(two, vec![(1, 2)]);
        let three: Vec<_> = primes_up_to(3).unwrap().collect();
        assert_eq!(three, vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(matches!(primes_up_to(1), Err(Error::EmptyRange { .. })));
        assert!(primes_up_to(0).is_err());
        assert!(SieveConfig::new(100).unwrap().with_segment_size(1023).is_err());
        assert!(SieveConfig::new(100).unwrap().with_parallelism(0).is_err());
        assert!(SieveConfig::new(MAX_LIMIT + 1).is_err());
    }

    #[test]
    fn matches_trial_division_across_segment_sizes() {
        let oracle = trial_division(20_000);
        for segment_size in [1024, 1030, 4096, 1 << 20] {
            for parallelism in [1, 3] {
                let config = SieveConfig::new(20_000)
                    .unwrap()
                    .with_segment_size(segment_size)
                    .unwrap()
                    .with_parallelism(parallelism)
                    .unwrap();
                let got: Vec<u64> = primes_up_to_with(config).unwrap().map(|(_, p)| p).collect();
                assert_eq!(got, oracle, "segment {segment_size}, workers {parallelism}");
                assert_eq!(prime_count_with(config).unwrap(), oracle.len() as u64);
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(prime_count(0).unwrap(), 0);
        assert_eq!(prime_count(1).unwrap(), 0);
        assert_eq!(prime_count(2).unwrap(), 1);
        assert_eq!(prime_count(10).unwrap(), 4);
        assert_eq!(prime_count(1_000_000).unwrap(), 78_498);
    }

    #[test]
    fn nth_prime_values() {
        assert_eq!(nth_prime(1).unwrap(), 2);
        assert_eq!(nth_prime(5).unwrap(), 11);
        assert_eq!(nth_prime(6).unwrap(), 13);
        assert_eq!(nth_prime(100).unwrap(), 541);
        assert!(nth_prime(0).is_err());
    }

    #[test]
    fn table_grows_on_demand() {
        let primes = Primes::new();
        assert_eq!(primes.nth(1).unwrap(), 2);
        assert_eq!(primes.nth(100).unwrap(), 541);
        assert_eq!(primes.nth(1000).unwrap(), 7919);
        assert!(primes.len() >= 1000);
        assert!(primes.nth(0).is_err());
    }

    #[test]
    fn index_bound_covers_index() {
        for n in [6u64, 7, 10, 100, 1000, 5000] {
            assert!(prime_count(index_upper_bound(n)).unwrap() >= n);
        }
    }
}
