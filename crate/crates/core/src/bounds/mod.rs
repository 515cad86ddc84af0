//! Concrete gap bounds and classical prime estimates.

pub mod liminf;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numeric::interval::{Interval, DEFAULT_PRECISION};
use crate::numeric::{compare_lt, EvalValue, GuardBand, Verdict, VerdictState};
use crate::par::{map_chunks, CHUNK};
use crate::sieve::{primes_up_to_with, Primes, SieveConfig};
use crate::xi::Counts;

pub use liminf::{liminf_track, LiminfPoint, LiminfReport, LiminfTracker, Metric};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    /// g_n
    pub lhs: u64,
    pub rhs: EvalValue,
    pub verdict: Verdict,
}

fn point(v: u64) -> Interval {
    Interval::point(BigRational::from_integer(v.into()), DEFAULT_PRECISION)
}

fn settle<F>(first: Verdict, retry: F) -> Verdict
where
    F: FnOnce() -> Result<Verdict>,
{
    if first.is_indeterminate() {
        retry().unwrap_or(first)
    } else {
        first
    }
}

fn ln_u64(x: u64) -> Result<EvalValue> {
    EvalValue::from(x).ln()
}

/// `g_n n < 2 p_n`, in integers.
pub fn two_over_n_check(n: u64, primes: &Primes) -> Result<Verdict> {
    Ok(two_over_n_report(n, primes)?.verdict)
}

fn two_over_n_report(n: u64, primes: &Primes) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::domain("index must be at least 1"));
    }
    let p = primes.nth(n)?;
    let g = primes.nth(n + 1)? - p;
    let lhs = u128::from(g) * u128::from(n);
    let rhs = 2 * u128::from(p);
    let verdict = Verdict::exact(lhs < rhs, rhs as f64 / n as f64 - g as f64);
    Ok(BoundReport {
        n,
        lhs: g,
        rhs: EvalValue::Exact(BigRational::new((2 * p).into(), n.into())),
        verdict,
    })
}

/// `q^n < p^(n+1)` in big integers. When the base-2 logarithms of the two
/// sides differ by more than 2 bits the answer is read off the estimate.
pub fn firoozbakht_exact(n: u64, p: u64, q: u64) -> bool {
    let d = n as f64 * (q as f64).log2() - (n + 1) as f64 * (p as f64).log2();
    if d > 2.0 {
        return false;
    }
    if d < -2.0 {
        return true;
    }
    firoozbakht_full(n, p, q)
}

fn firoozbakht_full(n: u64, p: u64, q: u64) -> bool {
    let exp = u32::try_from(n).expect("index fits in u32 at 64-bit prime scale");
    BigUint::from(q).pow(exp) < BigUint::from(p).pow(exp + 1)
}

/// Outcome of one Firoozbakht comparison and whether the integer path decided it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiroozbakhtVerdict {
    pub verdict: Verdict,
    pub used_exact: bool,
}

/// `n ln q < (n+1) ln p` guarded, falling back to [`firoozbakht_exact`].
pub fn firoozbakht_pair(n: u64, p: u64, q: u64, guard: GuardBand) -> FiroozbakhtVerdict {
    // libm ln is within an ulp; one more rounding for the product
    let rel_err = 4.0 * f64::EPSILON;
    let lhs = EvalValue::Float {
        value: n as f64 * (q as f64).ln(),
        rel_err,
    };
    let rhs = EvalValue::Float {
        value: (n + 1) as f64 * (p as f64).ln(),
        rel_err,
    };
    let verdict = compare_lt(&lhs, &rhs, guard);
    if verdict.is_indeterminate() {
        FiroozbakhtVerdict {
            verdict: Verdict::exact(firoozbakht_exact(n, p, q), verdict.margin),
            used_exact: true,
        }
    } else {
        FiroozbakhtVerdict {
            verdict,
            used_exact: false,
        }
    }
}

/// `p_{n+1}^(1/(n+1)) < p_n^(1/n)`.
pub fn firoozbakht_check(n: u64, primes: &Primes, guard: GuardBand) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::domain("index must be at least 1"));
    }
    Ok(firoozbakht_pair(n, primes.nth(n)?, primes.nth(n + 1)?, guard).verdict)
}

/// The gap form `g_n < p_n^(1+1/n) - p_n` of the Firoozbakht inequality.
pub fn firoozbakht_report(n: u64, p: u64, q: u64, guard: GuardBand) -> (BoundReport, bool) {
    let fv = firoozbakht_pair(n, p, q, guard);
    let rhs = p as f64 * ((p as f64).ln() / n as f64).exp_m1();
    let report = BoundReport {
        n,
        lhs: q - p,
        rhs: EvalValue::Float {
            value: rhs,
            rel_err: 8.0 * f64::EPSILON,
        },
        verdict: fv.verdict,
    };
    (report, fv.used_exact)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiroozbakhtSummary {
    pub limit: u64,
    pub checked: u64,
    pub counts: Counts,
    pub violations: Vec<u64>,
    pub exact_resolutions: u64,
}

/// Every n with `p_{n+1} < limit`, in index order through `sink`.
pub fn firoozbakht_scan<S>(limit: u64, parallelism: usize, guard: GuardBand, mut sink: S) -> Result<FiroozbakhtSummary>
where
    S: FnMut(&BoundReport) -> Result<()>,
{
    let config = SieveConfig::new(limit)?.with_parallelism(parallelism)?;
    let ps: Vec<u64> = primes_up_to_with(config)?.map(|(_, p)| p).filter(|&p| p < limit).collect();
    let mut summary = FiroozbakhtSummary {
        limit,
        checked: 0,
        counts: Counts::default(),
        violations: Vec::new(),
        exact_resolutions: 0,
    };
    if ps.len() < 2 {
        return Ok(summary);
    }
    let last = ps.len() as u64 - 1;
    let wave = CHUNK * 16 * parallelism.max(1) as u64;
    let mut lo = 1;
    while lo <= last {
        let hi = (lo + wave - 1).min(last);
        let chunks = map_chunks(lo, hi, parallelism, |a, b| {
            (a..=b)
                .map(|n| firoozbakht_report(n, ps[n as usize - 1], ps[n as usize], guard))
                .collect::<Vec<_>>()
        })?;
        for (report, used_exact) in chunks.iter().flatten() {
            summary.checked += 1;
            summary.counts.record(report.verdict.state);
            summary.exact_resolutions += u64::from(*used_exact);
            if report.verdict.state == VerdictState::Fails {
                summary.violations.push(report.n);
            }
            sink(report)?;
        }
        lo = hi + 1;
    }
    Ok(summary)
}

fn gap_and_prime(n: u64, primes: &Primes) -> Result<(u64, u64)> {
    let p = primes.nth(n)?;
    Ok((primes.nth(n + 1)? - p, p))
}

/// ln(p)^2 - ln(p) - b
fn kourbatov_rhs(p: u64, b: &EvalValue) -> Result<EvalValue> {
    let l = ln_u64(p)?;
    l.mul(&l)?.sub(&l)?.sub(b)
}

fn kourbatov_rhs_interval(p: u64, b: &EvalValue) -> Result<Interval> {
    let b = b
        .as_exact()
        .ok_or_else(|| Error::domain("no certified enclosure for an inexact parameter"))?;
    let l = point(p).ln()?;
    Ok(l.mul(&l).sub(&l).sub(&Interval::point(b.clone(), DEFAULT_PRECISION)))
}

/// (n+1) ln(n+1) - n ln(n) + 1
fn sharp_rhs(n: u64) -> Result<EvalValue> {
    let a = EvalValue::from(n + 1).mul(&ln_u64(n + 1)?)?;
    let b = EvalValue::from(n).mul(&ln_u64(n)?)?;
    a.sub(&b)?.add(&EvalValue::from(1u64))
}

fn sharp_rhs_interval(n: u64) -> Result<Interval> {
    let a = point(n + 1).mul(&point(n + 1).ln()?);
    let b = point(n).mul(&point(n).ln()?);
    Ok(a.sub(&b).add(&point(1)))
}

fn gap_report<F>(n: u64, g: u64, rhs: EvalValue, interval: F, guard: GuardBand) -> BoundReport
where
    F: FnOnce() -> Result<Interval>,
{
    let verdict = settle(compare_lt(&EvalValue::from(g), &rhs, guard), || {
        Ok(Verdict::from_intervals(&point(g), &interval()?))
    });
    BoundReport {
        n,
        lhs: g,
        rhs,
        verdict,
    }
}

/// `g_n < ln(p_n)^2 - ln(p_n) - 1`, only stated for n >= 10.
pub fn kourbatov_bound_check(n: u64, primes: &Primes, guard: GuardBand) -> Result<BoundReport> {
    if n < 10 {
        return Err(Error::domain(format!("bound is stated for n >= 10, got n = {n}")));
    }
    let (g, p) = gap_and_prime(n, primes)?;
    let one = EvalValue::from(1u64);
    Ok(gap_report(n, g, kourbatov_rhs(p, &one)?, || kourbatov_rhs_interval(p, &one), guard))
}

/// `g_n < (n+1) ln(n+1) - n ln(n) + 1`.
pub fn sharp_bound_check(n: u64, primes: &Primes, guard: GuardBand) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::domain("index must be at least 1"));
    }
    let (g, _) = gap_and_prime(n, primes)?;
    Ok(gap_report(n, g, sharp_rhs(n)?, || sharp_rhs_interval(n), guard))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapBound {
    TwoOverN,
    Kourbatov,
    Sharp,
}

impl GapBound {
    pub fn min_index(self) -> u64 {
        match self {
            GapBound::Kourbatov => 10,
            _ => 1,
        }
    }

    pub fn check(self, n: u64, primes: &Primes, guard: GuardBand) -> Result<BoundReport> {
        match self {
            GapBound::TwoOverN => two_over_n_report(n, primes),
            GapBound::Kourbatov => kourbatov_bound_check(n, primes, guard),
            GapBound::Sharp => sharp_bound_check(n, primes, guard),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub n_start: u64,
    pub n_end: u64,
    pub counts: Counts,
    pub first_failure: Option<u64>,
    pub last_failure: Option<u64>,
}

fn check_range(n_start: u64, n_end: u64, min: u64) -> Result<()> {
    if n_start < min {
        return Err(Error::domain(format!("range must start at n >= {min}, got {n_start}")));
    }
    if n_start > n_end {
        return Err(Error::EmptyRange {
            start: n_start,
            end: n_end,
        });
    }
    Ok(())
}

/// Evaluate `f` over `[n_start, n_end]` in parallel waves, feeding results in order.
fn ordered_scan<T, F, S>(n_start: u64, n_end: u64, parallelism: usize, f: F, mut sink: S) -> Result<()>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
    S: FnMut(T) -> Result<()>,
{
    let wave = CHUNK * 8 * parallelism.max(1) as u64;
    let mut lo = n_start;
    while lo <= n_end {
        let hi = lo.saturating_add(wave - 1).min(n_end);
        let chunks = map_chunks(lo, hi, parallelism, |a, b| (a..=b).map(&f).collect::<Vec<_>>())?;
        for item in chunks.into_iter().flatten() {
            sink(item?)?;
        }
        if hi == n_end {
            break;
        }
        lo = hi + 1;
    }
    Ok(())
}

pub fn bound_scan<S>(
    bound: GapBound,
    n_start: u64,
    n_end: u64,
    primes: &Primes,
    guard: GuardBand,
    mut sink: S,
) -> Result<ScanSummary>
where
    S: FnMut(&BoundReport) -> Result<()>,
{
    check_range(n_start, n_end, bound.min_index())?;
    primes.ensure(n_end + 1)?;
    let mut summary = ScanSummary {
        n_start,
        n_end,
        counts: Counts::default(),
        first_failure: None,
        last_failure: None,
    };
    ordered_scan(
        n_start,
        n_end,
        primes.parallelism(),
        |n| bound.check(n, primes, guard),
        |report| {
            summary.counts.record(report.verdict.state);
            if report.verdict.state == VerdictState::Fails {
                summary.first_failure.get_or_insert(report.n);
                summary.last_failure = Some(report.n);
            }
            sink(&report)
        },
    )?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub n: u64,
    pub sharp_rhs: EvalValue,
    pub kourbatov_rhs: EvalValue,
    /// sharp_rhs < kourbatov_rhs
    pub verdict: Verdict,
}

impl Comparison {
    pub fn sharp_smaller(&self) -> bool {
        self.verdict.holds()
    }
}

pub fn compare_bounds(n: u64, b: &EvalValue, primes: &Primes, guard: GuardBand) -> Result<Comparison> {
    if n < 10 {
        return Err(Error::domain(format!("comparison is stated for n >= 10, got n = {n}")));
    }
    let p = primes.nth(n)?;
    let sharp = sharp_rhs(n)?;
    let kourbatov = kourbatov_rhs(p, b)?;
    let verdict = settle(compare_lt(&sharp, &kourbatov, guard), || {
        Ok(Verdict::from_intervals(&sharp_rhs_interval(n)?, &kourbatov_rhs_interval(p, b)?))
    });
    Ok(Comparison {
        n,
        sharp_rhs: sharp,
        kourbatov_rhs: kourbatov,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonSummary {
    pub n_start: u64,
    pub n_end: u64,
    pub sharp_smaller: u64,
    pub not_smaller: u64,
    pub indeterminate: u64,
    /// Empirical crossover: past this index the sharp bound was always smaller.
    pub largest_not_smaller: Option<u64>,
}

pub fn bound_comparison_scan<S>(
    n_start: u64,
    n_end: u64,
    b: &EvalValue,
    primes: &Primes,
    guard: GuardBand,
    mut sink: S,
) -> Result<ComparisonSummary>
where
    S: FnMut(&Comparison) -> Result<()>,
{
    check_range(n_start, n_end, 10)?;
    if b.to_f64() < 1.0 {
        return Err(Error::domain("b must be at least 1"));
    }
    primes.ensure(n_end)?;
    let mut summary = ComparisonSummary {
        n_start,
        n_end,
        sharp_smaller: 0,
        not_smaller: 0,
        indeterminate: 0,
        largest_not_smaller: None,
    };
    ordered_scan(
        n_start,
        n_end,
        primes.parallelism(),
        |n| compare_bounds(n, b, primes, guard),
        |c| {
            match c.verdict.state {
                VerdictState::Holds => summary.sharp_smaller += 1,
                VerdictState::Fails => {
                    summary.not_smaller += 1;
                    summary.largest_not_smaller = Some(c.n);
                }
                VerdictState::Indeterminate => {
                    summary.indeterminate += 1;
                    summary.largest_not_smaller = Some(c.n);
                }
            }
            sink(&c)
        },
    )?;
    Ok(summary)
}

/// `n ln n < p_n`, certified by 128-bit intervals when the float test is close.
pub fn rosser_check(n: u64, primes: &Primes, guard: GuardBand) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::domain("index must be at least 1"));
    }
    let p = primes.nth(n)?;
    let lhs = EvalValue::from(n).mul(&ln_u64(n)?)?;
    Ok(settle(compare_lt(&lhs, &EvalValue::from(p), guard), || {
        let lhs = point(n).mul(&point(n).ln()?);
        Ok(Verdict::from_intervals(&lhs, &point(p)))
    }))
}

/// Which indices get a checkpoint row; `n_end` is always included.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Checkpoints {
    #[default]
    PowersOfTwo,
    Explicit(Vec<u64>),
}

impl Checkpoints {
    pub fn resolve(&self, n_end: u64) -> Vec<u64> {
        let mut points: Vec<u64> = match self {
            Checkpoints::PowersOfTwo => (0..64).map(|k| 1u64 << k).take_while(|&n| n <= n_end).collect(),
            Checkpoints::Explicit(v) => v.iter().copied().filter(|&n| n >= 1 && n <= n_end).collect(),
        };
        points.push(n_end);
        points.sort_unstable();
        points.dedup();
        points
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCheckpoint {
    pub n: u64,
    pub p_n: u64,
    /// p_n / (n ln n)
    pub pnt_ratio: f64,
    /// p_n^(1/n)
    pub nth_root: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalReport {
    pub n_end: u64,
    pub rosser: Counts,
    pub rosser_violations: Vec<u64>,
    pub rosser_unresolved: Vec<u64>,
    pub checkpoints: Vec<ClassicalCheckpoint>,
}

pub fn classical_checks(
    n_end: u64,
    checkpoints: &Checkpoints,
    primes: &Primes,
    guard: GuardBand,
) -> Result<ClassicalReport> {
    if n_end < 3 {
        return Err(Error::domain("classical checks need n_end >= 3"));
    }
    primes.ensure(n_end)?;
    let mut report = ClassicalReport {
        n_end,
        rosser: Counts::default(),
        rosser_violations: Vec::new(),
        rosser_unresolved: Vec::new(),
        checkpoints: Vec::new(),
    };
    ordered_scan(
        1,
        n_end,
        primes.parallelism(),
        |n| Ok((n, rosser_check(n, primes, guard)?)),
        |(n, v)| {
            report.rosser.record(v.state);
            match v.state {
                VerdictState::Fails => report.rosser_violations.push(n),
                VerdictState::Indeterminate => report.rosser_unresolved.push(n),
                VerdictState::Holds => {}
            }
            Ok(())
        },
    )?;
    for n in checkpoints.resolve(n_end).into_iter().filter(|&n| n >= 2) {
        let p = primes.nth(n)?;
        let (pf, nf) = (p as f64, n as f64);
        report.checkpoints.push(ClassicalCheckpoint {
            n,
            p_n: p,
            pnt_ratio: pf / (nf * nf.ln()),
            nth_root: (pf.ln() / nf).exp(),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g() -> GuardBand {
        GuardBand::default()
    }

    #[test]
    fn two_over_n_examples() {
        let primes = Primes::new();
        let v = two_over_n_check(5, &primes).unwrap();
        assert!(v.holds() && v.exact);
        assert_eq!(two_over_n_check(4, &primes).unwrap().state, VerdictState::Fails);
        assert!(two_over_n_check(1, &primes).unwrap().holds());
    }

    #[test]
    fn firoozbakht_examples() {
        let primes = Primes::new();
        for n in [1, 2, 4] {
            assert!(firoozbakht_check(n, &primes, g()).unwrap().holds());
        }
        assert!(firoozbakht_full(4, 7, 11));
        assert!(!firoozbakht_full(1, 2, 5));
        assert!(firoozbakht_check(0, &primes, g()).is_err());
    }

    #[test]
    fn firoozbakht_paths_agree() {
        let primes = Primes::with_count(200_001).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x6a70);
        for _ in 0..1000 {
            let n = rng.gen_range(1..200_000);
            let (p, q) = (primes.nth(n).unwrap(), primes.nth(n + 1).unwrap());
            let float = firoozbakht_pair(n, p, q, g());
            assert!(!float.used_exact);
            assert_eq!(float.verdict.holds(), firoozbakht_exact(n, p, q), "n = {n}");
        }
        // full powering, independent of the bit-length shortcut
        for n in 1..400 {
            let (p, q) = (primes.nth(n).unwrap(), primes.nth(n + 1).unwrap());
            assert_eq!(firoozbakht_full(n, p, q), firoozbakht_exact(n, p, q), "n = {n}");
            assert_eq!(firoozbakht_full(n, p, q), firoozbakht_pair(n, p, q, g()).verdict.holds());
        }
    }

    #[test]
    fn firoozbakht_guard_band_forces_exact_path() {
        let wide = GuardBand::new(0.5);
        let fv = firoozbakht_pair(4, 7, 11, wide);
        assert!(fv.used_exact && fv.verdict.exact && fv.verdict.holds());
    }

    #[test]
    fn firoozbakht_scan_small() {
        let mut rows = Vec::new();
        let s = firoozbakht_scan(1000, 2, g(), |r| {
            rows.push(r.n);
            Ok(())
        })
        .unwrap();
        // 168 primes below 1000, so 167 consecutive pairs
        assert_eq!(s.checked, 167);
        assert_eq!(rows, (1..=167).collect::<Vec<_>>());
        assert!(s.violations.is_empty());
    }

    #[test]
    fn kourbatov_examples() {
        let primes = Primes::new();
        let r = kourbatov_bound_check(100, &primes, g()).unwrap();
        assert_eq!(r.lhs, 6);
        assert!(r.verdict.holds());
        assert!((r.rhs.to_f64() - 32.31370694051009).abs() < 1e-9);
        let r = kourbatov_bound_check(10, &primes, g()).unwrap();
        assert!(r.verdict.holds());
        assert!((r.rhs.to_f64() - 6.971385376657823).abs() < 1e-9);
        assert!(matches!(kourbatov_bound_check(9, &primes, g()), Err(Error::Domain(_))));
    }

    #[test]
    fn sharp_examples() {
        let primes = Primes::new();
        let r = sharp_bound_check(100, &primes, g()).unwrap();
        assert!(r.verdict.holds());
        assert!((r.rhs.to_f64() - 6.61015360215805).abs() < 1e-9);
        let r = sharp_bound_check(4, &primes, g()).unwrap();
        assert_eq!(r.verdict.state, VerdictState::Fails);
        assert!((r.rhs.to_f64() - 3.5020121176909393).abs() < 1e-9);
        let r = sharp_bound_check(1, &primes, g()).unwrap();
        assert!(r.verdict.holds());
        assert!((r.rhs.to_f64() - 2.386294361119891).abs() < 1e-12);
    }

    #[test]
    fn comparison_examples() {
        let primes = Primes::new();
        let one = EvalValue::from(1u64);
        let c = compare_bounds(100, &one, &primes, g()).unwrap();
        assert!(c.sharp_smaller());
        let c = compare_bounds(10, &one, &primes, g()).unwrap();
        assert!(c.sharp_smaller());
        assert!((c.sharp_rhs.to_f64() - 4.350997070841615).abs() < 1e-9);
        let s = bound_comparison_scan(10, 5000, &one, &primes, g(), |_| Ok(())).unwrap();
        assert_eq!(s.largest_not_smaller, None);
        assert_eq!(s.sharp_smaller, 4991);
        assert!(bound_comparison_scan(9, 50, &one, &primes, g(), |_| Ok(())).is_err());
        let half = EvalValue::Exact(BigRational::new(1.into(), 2.into()));
        assert!(bound_comparison_scan(10, 50, &half, &primes, g(), |_| Ok(())).is_err());
    }

    #[test]
    fn bound_scan_records_failures() {
        let primes = Primes::with_parallelism(3).unwrap();
        let mut seen = Vec::new();
        let s = bound_scan(GapBound::TwoOverN, 1, 10_000, &primes, g(), |r| {
            seen.push(r.n);
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, (1..=10_000).collect::<Vec<_>>());
        assert_eq!(s.first_failure, Some(4));
        assert_eq!(s.counts.total(), 10_000);
        assert_eq!(s.counts.indeterminate, 0);
        assert!(bound_scan(GapBound::Kourbatov, 5, 20, &primes, g(), |_| Ok(())).is_err());
    }

    #[test]
    fn classical_examples() {
        let primes = Primes::new();
        let r = classical_checks(10_000, &Checkpoints::Explicit(vec![10]), &primes, g()).unwrap();
        assert!(r.rosser_violations.is_empty() && r.rosser_unresolved.is_empty());
        assert_eq!(r.rosser.holds, 10_000);
        let c10 = r.checkpoints[0];
        assert_eq!((c10.n, c10.p_n), (10, 29));
        assert!((c10.nth_root - 1.400360331291396).abs() < 1e-12);
        assert_eq!(r.checkpoints.last().unwrap().n, 10_000);
        assert!(classical_checks(2, &Checkpoints::default(), &primes, g()).is_err());
    }

    #[test]
    fn checkpoint_resolution() {
        assert_eq!(Checkpoints::PowersOfTwo.resolve(10), vec![1, 2, 4, 8, 10]);
        assert_eq!(Checkpoints::PowersOfTwo.resolve(8), vec![1, 2, 4, 8]);
        assert_eq!(Checkpoints::Explicit(vec![7, 0, 3, 99]).resolve(20), vec![3, 7, 20]);
    }
}
