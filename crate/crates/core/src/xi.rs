//! Enumeration of Ξ({q_n}), the indices where `g_n < Q_n`.
//!
//! Each index gets two verdicts: the gap form `g_n < Q_n` and the ratio form
//! `p_{n+1} q_n < p_n (q_{n+1} + 1)`. They are the same inequality after
//! multiplying through by `q_n / p_n`, and both are evaluated independently.
//! When `q` is rational both comparisons are exact; otherwise they are
//! guarded float comparisons with a 128-bit interval retry.

use std::collections::VecDeque;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numeric::interval::{Interval, DEFAULT_PRECISION};
use crate::numeric::{compare_lt, EvalValue, GuardBand, Verdict, VerdictState};
use crate::par::{map_chunks, CHUNK};
use crate::sequences::{eval_q, first_valid_index, q_pair_interval, u_from, u_interval, AuxSequenceSpec, Builtin};
use crate::sieve::Primes;

#[derive(Debug, Clone, PartialEq)]
pub struct XiRecord {
    pub n: u64,
    pub p_n: u64,
    pub p_next: u64,
    pub g: u64,
    /// Q_n
    pub bound: EvalValue,
    /// `g_n < Q_n`
    pub verdict: Verdict,
    /// `p_{n+1} / p_n < (q_{n+1} + 1) / q_n`
    pub ratio_verdict: Verdict,
}

impl XiRecord {
    pub fn in_xi(&self) -> bool {
        self.verdict.holds()
    }
}

fn point(v: u64) -> Interval {
    Interval::point(BigRational::from_integer(v.into()), DEFAULT_PRECISION)
}

fn retry<F>(first: Verdict, f: F) -> Verdict
where
    F: FnOnce() -> Result<Verdict>,
{
    if first.is_indeterminate() {
        f().unwrap_or(first)
    } else {
        first
    }
}

/// One index of the scan.
pub fn xi_record(spec: &AuxSequenceSpec, n: u64, primes: &Primes, guard: GuardBand) -> Result<XiRecord> {
    let q = eval_q(spec, n, primes)?;
    let q_next = eval_q(spec, n + 1, primes)?;
    let p_n = primes.nth(n)?;
    let p_next = primes.nth(n + 1)?;
    let g = p_next - p_n;

    let bound = EvalValue::from(p_n).mul(&u_from(&q, &q_next)?)?;
    let verdict = retry(compare_lt(&EvalValue::from(g), &bound, guard), || {
        let (qi, qn) = q_pair_interval(spec, n, primes, DEFAULT_PRECISION)?;
        let bound = point(p_n).mul(&u_interval(&qi, &qn)?);
        Ok(Verdict::from_intervals(&point(g), &bound))
    });

    let lhs = EvalValue::from(p_next).mul(&q)?;
    let rhs = EvalValue::from(p_n).mul(&q_next.add(&EvalValue::from(1u64))?)?;
    let ratio_verdict = retry(compare_lt(&lhs, &rhs, guard), || {
        let (qi, qn) = q_pair_interval(spec, n, primes, DEFAULT_PRECISION)?;
        let lhs = point(p_next).mul(&qi);
        let rhs = point(p_n).mul(&qn.add(&point(1)));
        Ok(Verdict::from_intervals(&lhs, &rhs))
    });

    Ok(XiRecord {
        n,
        p_n,
        p_next,
        g,
        bound,
        verdict,
        ratio_verdict,
    })
}

/// The undivided form `q_n p_{n+1} - q_{n+1} p_n < p_n`.
pub fn theorem_verdict(spec: &AuxSequenceSpec, n: u64, primes: &Primes, guard: GuardBand) -> Result<Verdict> {
    let q = eval_q(spec, n, primes)?;
    let q_next = eval_q(spec, n + 1, primes)?;
    let p_n = primes.nth(n)?;
    let p_next = primes.nth(n + 1)?;
    let lhs = q.mul(&EvalValue::from(p_next))?.sub(&q_next.mul(&EvalValue::from(p_n))?)?;
    let rhs = EvalValue::from(p_n);
    Ok(retry(compare_lt(&lhs, &rhs, guard), || {
        let (qi, qn) = q_pair_interval(spec, n, primes, DEFAULT_PRECISION)?;
        let lhs = qi.mul(&point(p_next)).sub(&qn.mul(&point(p_n)));
        Ok(Verdict::from_intervals(&lhs, &point(p_n)))
    }))
}

/// `p_{n+1} q_n < p_n (q_{n+1} + 1)` on its own.
pub fn ratio_check(spec: &AuxSequenceSpec, n: u64, primes: &Primes, guard: GuardBand) -> Result<Verdict> {
    Ok(xi_record(spec, n, primes, guard)?.ratio_verdict)
}

/// Ordered stream of [`XiRecord`]s, computed a block at a time across workers.
pub struct XiScan<'a> {
    spec: &'a AuxSequenceSpec,
    primes: &'a Primes,
    guard: GuardBand,
    requested_start: u64,
    start: u64,
    next: u64,
    end: u64,
    buffer: VecDeque<Result<XiRecord>>,
    failed: bool,
}

impl XiScan<'_> {
    /// First index actually scanned; larger than requested when leading
    /// values of q were not positive.
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn clipped(&self) -> Option<(u64, u64)> {
        (self.start != self.requested_start).then_some((self.requested_start, self.start))
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    fn refill(&mut self) -> Result<()> {
        let workers = self.primes.parallelism();
        let block_end = self
            .next
            .saturating_add(CHUNK * 4 * workers as u64 - 1)
            .min(self.end);
        let (spec, primes, guard) = (self.spec, self.primes, self.guard);
        let chunks = map_chunks(self.next, block_end, workers, |a, b| {
            (a..=b).map(|n| xi_record(spec, n, primes, guard)).collect::<Vec<_>>()
        })?;
        for chunk in chunks {
            self.buffer.extend(chunk);
        }
        self.next = block_end + 1;
        Ok(())
    }
}

impl Iterator for XiScan<'_> {
    type Item = Result<XiRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        if self.buffer.is_empty() {
            if self.next > self.end {
                return None;
            }
            if let Err(e) = self.refill() {
                self.failed = true;
                return Some(Err(e));
            }
        }
        let item = self.buffer.pop_front()?;
        if item.is_err() {
            self.failed = true;
        }
        Some(item)
    }
}

pub fn xi_scan<'a>(
    spec: &'a AuxSequenceSpec,
    n_start: u64,
    n_end: u64,
    primes: &'a Primes,
    guard: GuardBand,
) -> Result<XiScan<'a>> {
    if n_start == 0 {
        return Err(Error::domain("scan start must be at least 1"));
    }
    if n_start > n_end {
        return Err(Error::EmptyRange {
            start: n_start,
            end: n_end,
        });
    }
    primes.ensure(n_end + 2)?;
    let start = first_valid_index(spec, n_start, primes)?;
    if start > n_end {
        return Err(Error::EmptyRange { start, end: n_end });
    }
    Ok(XiScan {
        spec,
        primes,
        guard,
        requested_start: n_start,
        start,
        next: start,
        end: n_end,
        buffer: VecDeque::new(),
        failed: false,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub holds: u64,
    pub fails: u64,
    pub indeterminate: u64,
}

impl Counts {
    pub fn record(&mut self, state: VerdictState) {
        match state {
            VerdictState::Holds => self.holds += 1,
            VerdictState::Fails => self.fails += 1,
            VerdictState::Indeterminate => self.indeterminate += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.holds + self.fails + self.indeterminate
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCounts {
    pub start: u64,
    pub end: u64,
    pub counts: Counts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub blocks: Vec<BlockCounts>,
    pub totals: Counts,
    pub largest_holds: Option<u64>,
    pub scanned_from: u64,
}

/// Per-block verdict counts over `[1, n_end]`.
pub fn xi_density(
    spec: &AuxSequenceSpec,
    n_end: u64,
    block: u64,
    primes: &Primes,
    guard: GuardBand,
) -> Result<DensityReport> {
    if block == 0 || block > n_end {
        return Err(Error::domain(format!("block size {block} must be in [1, {n_end}]")));
    }
    let scan = xi_scan(spec, 1, n_end, primes, guard)?;
    let scanned_from = scan.start();
    let mut blocks: Vec<BlockCounts> = (0..n_end.div_ceil(block))
        .map(|i| BlockCounts {
            start: i * block + 1,
            end: ((i + 1) * block).min(n_end),
            counts: Counts::default(),
        })
        .collect();
    let mut totals = Counts::default();
    let mut largest_holds = None;
    for rec in scan {
        let rec = rec?;
        let state = rec.verdict.state;
        blocks[((rec.n - 1) / block) as usize].counts.record(state);
        totals.record(state);
        if state == VerdictState::Holds {
            largest_holds = Some(rec.n);
        }
    }
    Ok(DensityReport {
        blocks,
        totals,
        largest_holds,
        scanned_from,
    })
}

/// An even index in Ξ for the twin-piecewise sequence with `Q_n <= 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwinCandidate {
    pub n: u64,
    pub p_n: u64,
    pub p_next: u64,
    pub g: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwinReport {
    pub pairs: Vec<TwinCandidate>,
    pub even_in_xi: u64,
    pub odd_in_xi: u64,
    pub even_large_bound: u64,
    pub indeterminate: u64,
}

/// For q_n = twin_piecewise, even members of Ξ with `Q_n <= 4` must have
/// `g_n = 2` (gaps past n = 1 are even), so they are twin-prime pairs.
pub fn twin_explorer(n_end: u64, primes: &Primes, guard: GuardBand) -> Result<TwinReport> {
    let spec = AuxSequenceSpec::Builtin(Builtin::TwinPiecewise);
    let four = EvalValue::from(4u64);
    let mut report = TwinReport {
        pairs: Vec::new(),
        even_in_xi: 0,
        odd_in_xi: 0,
        even_large_bound: 0,
        indeterminate: 0,
    };
    for rec in xi_scan(&spec, 1, n_end, primes, guard)? {
        let rec = rec?;
        match rec.verdict.state {
            VerdictState::Indeterminate => report.indeterminate += 1,
            VerdictState::Fails => {}
            VerdictState::Holds if rec.n % 2 == 1 => report.odd_in_xi += 1,
            VerdictState::Holds => {
                report.even_in_xi += 1;
                if compare_lt(&four, &rec.bound, guard).state == VerdictState::Fails {
                    report.pairs.push(TwinCandidate {
                        n: rec.n,
                        p_n: rec.p_n,
                        p_next: rec.p_next,
                        g: rec.g,
                    });
                } else {
                    report.even_large_bound += 1;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id() -> AuxSequenceSpec {
        AuxSequenceSpec::Builtin(Builtin::IdentityN)
    }

    #[test]
    fn identity_examples() {
        let primes = Primes::new();
        let g = GuardBand::default();
        let r5 = xi_record(&id(), 5, &primes, g).unwrap();
        assert_eq!((r5.g, r5.verdict.state, r5.verdict.exact), (2, VerdictState::Holds, true));
        assert_eq!(r5.bound, EvalValue::Exact(BigRational::new(22.into(), 5.into())));
        let r4 = xi_record(&id(), 4, &primes, g).unwrap();
        assert_eq!(r4.verdict.state, VerdictState::Fails);
        assert!((r4.verdict.margin - (3.5 - 4.0)).abs() < 1e-15);
        let r1 = xi_record(&id(), 1, &primes, g).unwrap();
        assert!(r1.verdict.holds() && r1.verdict.exact);
    }

    #[test]
    fn ratio_examples() {
        let primes = Primes::new();
        let g = GuardBand::default();
        let v5 = ratio_check(&id(), 5, &primes, g).unwrap();
        assert!(v5.holds() && v5.exact);
        // 13 * 5 = 65 against 11 * 7 = 77
        assert_eq!(v5.margin, 12.0);
        let v4 = ratio_check(&id(), 4, &primes, g).unwrap();
        assert_eq!((v4.state, v4.margin), (VerdictState::Fails, -2.0));
        assert!(ratio_check(&id(), 1, &primes, g).unwrap().holds());
    }

    #[test]
    fn scan_clips_leading_zeros() {
        let primes = Primes::new();
        let spec = AuxSequenceSpec::Builtin(Builtin::NLogN);
        let scan = xi_scan(&spec, 1, 50, &primes, GuardBand::default()).unwrap();
        assert_eq!(scan.clipped(), Some((1, 2)));
        let recs: Vec<_> = scan.collect::<Result<_>>().unwrap();
        assert_eq!(recs.len(), 49);
        assert_eq!(recs[0].n, 2);
        assert!(xi_scan(&spec, 5, 4, &primes, GuardBand::default()).is_err());
    }

    #[test]
    fn scan_reports_positivity_failure() {
        let primes = Primes::new();
        let spec = AuxSequenceSpec::from_text("10-n").unwrap();
        let results: Vec<_> = xi_scan(&spec, 1, 20, &primes, GuardBand::default()).unwrap().collect();
        assert!(matches!(results.last(), Some(Err(Error::Positivity { n: 10 }))));
        assert_eq!(results.len(), 9);
    }

    #[test]
    fn density_examples() {
        let primes = Primes::new();
        let g = GuardBand::default();
        let d = xi_density(&id(), 100, 100, &primes, g).unwrap();
        assert!(d.blocks[0].counts.holds >= 1);
        assert_eq!(d.totals.total(), 100);
        let d = xi_density(&id(), 10_000, 1000, &primes, g).unwrap();
        assert_eq!(d.blocks.len(), 10);
        assert!(d.blocks.iter().all(|b| b.counts.holds >= 1));
        assert!(xi_density(&id(), 10, 0, &primes, g).is_err());
    }

    #[test]
    fn parallelism_does_not_change_records() {
        let spec = AuxSequenceSpec::Builtin(Builtin::TwinPiecewise);
        let one = Primes::with_parallelism(1).unwrap();
        let many = Primes::with_parallelism(6).unwrap();
        let a: Vec<_> = xi_scan(&spec, 1, 30_000, &one, GuardBand::default()).unwrap().collect::<Result<_>>().unwrap();
        let b: Vec<_> = xi_scan(&spec, 1, 30_000, &many, GuardBand::default()).unwrap().collect::<Result<_>>().unwrap();
        assert_eq!(a, b);
    }
}
