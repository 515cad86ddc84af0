//! Kummer-test engine.
//!
//! A positive series `sum t_n` converges iff some positive multipliers `b_n`
//! and `c > 0` satisfy `b_n t_n / t_{n+1} - b_{n+1} >= c` from some index on.
//! [`kummer_inequality_scan`] checks that inequality over a finite range,
//! [`canonical_b`] builds the multipliers that make it an equality with `c = 1`
//! for a series of known sum, and [`find_violation_witness`] searches for the
//! index at which the `c = 1` inequality must break for `sum 1/a_n` divergent.
//!
//! The two framings are explicit: a [`Series`] says whether its values are
//! the terms themselves or the reciprocals of the terms. The witness search
//! always takes the `a_n` of the reciprocal series `sum 1/a_n` as given.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::interval::{Interval, DEFAULT_PRECISION};
use crate::numeric::{compare_lt, exact_powi, EvalValue, GuardBand, Verdict, VerdictState};
use crate::par::{first_hit, Probe};
use crate::sequences::{eval_q, AuxSequenceSpec, Expr, Table};
use crate::sieve::Primes;

/// A positive sequence s_n.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesSpec {
    /// s_n = p_n
    ReciprocalPrimes,
    /// s_n = n
    Harmonic,
    /// s_n = n^2
    Squares,
    /// s_n = r^(-n)
    Geometric(BigRational),
    Expression(Expr),
    Tabulated(Arc<Table>),
}

impl SeriesSpec {
    pub fn value(&self, n: u64, primes: &Primes) -> Result<EvalValue> {
        if n == 0 {
            return Err(Error::domain("series index must be at least 1"));
        }
        let v = match self {
            SeriesSpec::ReciprocalPrimes => EvalValue::from(primes.nth(n)?),
            SeriesSpec::Harmonic => EvalValue::from(n),
            SeriesSpec::Squares => EvalValue::integer(u128::from(n) * u128::from(n)),
            SeriesSpec::Geometric(r) => {
                if !r.is_positive() {
                    return Err(Error::domain("geometric ratio must be positive"));
                }
                let k = i64::try_from(n).map_err(|_| Error::domain("index too large"))?;
                EvalValue::Exact(exact_powi(r, -k)?)
            }
            SeriesSpec::Expression(e) => e.eval(n, primes)?,
            SeriesSpec::Tabulated(t) => EvalValue::Exact(t.get(n)?.clone()),
        };
        if !v.is_positive() {
            return Err(Error::Positivity { n });
        }
        Ok(v)
    }

    pub fn interval(&self, n: u64, primes: &Primes, prec: u64) -> Result<Interval> {
        match self {
            SeriesSpec::Expression(e) => e.eval_interval(n, primes, prec),
            other => match other.value(n, primes)? {
                EvalValue::Exact(r) => Ok(Interval::point(r, prec)),
                EvalValue::Float { .. } => Err(Error::domain("no certified enclosure")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Framing {
    /// The values are the terms t_n.
    Terms,
    /// The terms are t_n = 1 / s_n.
    Reciprocals,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub spec: SeriesSpec,
    pub framing: Framing,
}

impl Series {
    pub fn terms(spec: SeriesSpec) -> Self {
        Self {
            spec,
            framing: Framing::Terms,
        }
    }

    pub fn reciprocals(spec: SeriesSpec) -> Self {
        Self {
            spec,
            framing: Framing::Reciprocals,
        }
    }

    pub fn term(&self, n: u64, primes: &Primes) -> Result<EvalValue> {
        let v = self.spec.value(n, primes)?;
        match self.framing {
            Framing::Terms => Ok(v),
            Framing::Reciprocals => EvalValue::from(1u64).div(&v),
        }
    }

    pub fn term_interval(&self, n: u64, primes: &Primes, prec: u64) -> Result<Interval> {
        let v = self.spec.interval(n, primes, prec)?;
        match self.framing {
            Framing::Terms => Ok(v),
            Framing::Reciprocals => Interval::point(BigRational::one(), prec).div(&v),
        }
    }
}

/// The multipliers b_n = (M - sum_{j<=n} t_j) / t_n of a series with sum M.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalMultiplier {
    pub series: Series,
    pub total: EvalValue,
}

impl CanonicalMultiplier {
    pub fn new(series: Series, total: EvalValue) -> Self {
        Self { series, total }
    }

    pub fn value(&self, n: u64, primes: &Primes) -> Result<EvalValue> {
        canonical_b(&self.series, &self.total, n, primes)
    }

    pub fn interval(&self, n: u64, primes: &Primes, prec: u64) -> Result<Interval> {
        let EvalValue::Exact(total) = &self.total else {
            return Err(Error::domain("no certified enclosure for an inexact total"));
        };
        let mut rest = Interval::point(total.clone(), prec);
        for j in 1..=n {
            rest = rest.sub(&self.series.term_interval(j, primes, prec)?);
        }
        rest.div(&self.series.term_interval(n, primes, prec)?)
    }
}

/// b_n = (M - sum_{j<=n} t_j) / t_n; exact when the terms and M are.
pub fn canonical_b(series: &Series, total: &EvalValue, n: u64, primes: &Primes) -> Result<EvalValue> {
    if n == 0 {
        return Err(Error::domain("series index must be at least 1"));
    }
    let mut partial = EvalValue::Exact(BigRational::zero());
    let mut last = None;
    for j in 1..=n {
        let t = series.term(j, primes)?;
        partial = partial.add(&t)?;
        last = Some(t);
    }
    let verdict = compare_lt(&partial, total, GuardBand::default());
    if !verdict.holds() {
        return Err(Error::domain(format!(
            "total does not exceed the partial sum through n = {n}"
        )));
    }
    total.sub(&partial)?.div(&last.expect("n >= 1"))
}

/// b_1, ..., b_n_end in one pass over the partial sums.
pub fn canonical_multipliers(series: &Series, total: &EvalValue, n_end: u64, primes: &Primes) -> Result<Vec<EvalValue>> {
    let mut partial = EvalValue::Exact(BigRational::zero());
    let mut out = Vec::with_capacity(n_end.min(1 << 20) as usize);
    for n in 1..=n_end {
        let t = series.term(n, primes)?;
        partial = partial.add(&t)?;
        if !compare_lt(&partial, total, GuardBand::default()).holds() {
            return Err(Error::domain(format!(
                "total does not exceed the partial sum through n = {n}"
            )));
        }
        out.push(total.sub(&partial)?.div(&t)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KummerCheck {
    pub n0: u64,
    pub c: EvalValue,
    pub scanned_to: u64,
    pub first_violation: Option<u64>,
    /// Indices before any violation where the inequality could not be decided.
    pub unresolved: Vec<u64>,
}

impl KummerCheck {
    pub fn certified(&self) -> bool {
        self.first_violation.is_none() && self.unresolved.is_empty()
    }
}

/// b_n t_n / t_{n+1} - b_{n+1}
pub fn kummer_quantity(series: &Series, b: &AuxSequenceSpec, n: u64, primes: &Primes) -> Result<EvalValue> {
    let t = series.term(n, primes)?;
    let t_next = series.term(n + 1, primes)?;
    let bn = eval_q(b, n, primes)?;
    let b_next = eval_q(b, n + 1, primes)?;
    bn.mul(&t)?.div(&t_next)?.sub(&b_next)
}

fn kummer_quantity_interval(
    series: &Series,
    b: &AuxSequenceSpec,
    n: u64,
    primes: &Primes,
    prec: u64,
) -> Result<Interval> {
    let t = series.term_interval(n, primes, prec)?;
    let t_next = series.term_interval(n + 1, primes, prec)?;
    let bn = b.interval(n, primes, prec)?;
    let b_next = b.interval(n + 1, primes, prec)?;
    Ok(bn.mul(&t).div(&t_next)?.sub(&b_next))
}

fn value_interval(v: &EvalValue, prec: u64) -> Option<Interval> {
    v.as_exact().map(|r| Interval::point(r.clone(), prec))
}

/// Check `b_n t_n / t_{n+1} - b_{n+1} >= c` for every n in `(n0, n_end]`.
pub fn kummer_inequality_scan(
    series: &Series,
    b: &AuxSequenceSpec,
    n0: u64,
    c: &EvalValue,
    n_end: u64,
    primes: &Primes,
    guard: GuardBand,
) -> Result<KummerCheck> {
    if !c.is_positive() {
        return Err(Error::domain("c must be positive"));
    }
    if n0 == 0 || n0 >= n_end {
        return Err(Error::EmptyRange {
            start: n0 + 1,
            end: n_end,
        });
    }
    primes.ensure(n_end + 2)?;
    let (first_violation, unresolved) = first_hit(n0 + 1, n_end, primes.parallelism(), |n| {
        let quantity = kummer_quantity(series, b, n, primes)?;
        let v = compare_lt(&quantity, c, guard);
        Ok(match v.state {
            VerdictState::Holds => Probe::Hit,
            VerdictState::Fails => Probe::Pass,
            VerdictState::Indeterminate => {
                let retry = kummer_quantity_interval(series, b, n, primes, DEFAULT_PRECISION)
                    .ok()
                    .zip(value_interval(c, DEFAULT_PRECISION))
                    .map(|(q, c)| Verdict::from_intervals(&q, &c).state);
                match retry {
                    Some(VerdictState::Holds) => Probe::Hit,
                    Some(VerdictState::Fails) => Probe::Pass,
                    _ => Probe::Unresolved,
                }
            }
        })
    })?;
    Ok(KummerCheck {
        n0,
        c: c.clone(),
        scanned_to: n_end,
        first_violation,
        unresolved,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KummerWitness {
    pub n_prime: u64,
    /// b_{n'} a_{n'+1} - b_{n'+1} a_{n'}
    pub lhs: EvalValue,
    /// a_{n'}
    pub rhs: EvalValue,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessSearch {
    Found(KummerWitness),
    /// Nothing in range. This is not evidence against existence.
    NotFoundUpTo { n_end: u64, unresolved: Vec<u64> },
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&KummerWitness> {
        match self {
            WitnessSearch::Found(w) => Some(w),
            WitnessSearch::NotFoundUpTo { .. } => None,
        }
    }
}

fn witness_sides(a: &SeriesSpec, b: &AuxSequenceSpec, n: u64, primes: &Primes) -> Result<(EvalValue, EvalValue)> {
    let an = a.value(n, primes)?;
    let a_next = a.value(n + 1, primes)?;
    let bn = eval_q(b, n, primes)?;
    let b_next = eval_q(b, n + 1, primes)?;
    let lhs = bn.mul(&a_next)?.sub(&b_next.mul(&an)?)?;
    Ok((lhs, an))
}

fn witness_verdict(a: &SeriesSpec, b: &AuxSequenceSpec, n: u64, primes: &Primes, guard: GuardBand) -> Result<Verdict> {
    let (lhs, rhs) = witness_sides(a, b, n, primes)?;
    let v = compare_lt(&lhs, &rhs, guard);
    if !v.is_indeterminate() {
        return Ok(v);
    }
    let prec = DEFAULT_PRECISION;
    let retry = (|| -> Result<Verdict> {
        let an = a.interval(n, primes, prec)?;
        let a_next = a.interval(n + 1, primes, prec)?;
        let bn = b.interval(n, primes, prec)?;
        let b_next = b.interval(n + 1, primes, prec)?;
        let lhs = bn.mul(&a_next).sub(&b_next.mul(&an));
        Ok(Verdict::from_intervals(&lhs, &an))
    })();
    Ok(retry.unwrap_or(v))
}

/// Smallest n' in `[n_start, n_end]` with `b_{n'} a_{n'+1} - b_{n'+1} a_{n'} < a_{n'}`.
pub fn find_violation_witness(
    a: &SeriesSpec,
    b: &AuxSequenceSpec,
    n_start: u64,
    n_end: u64,
    primes: &Primes,
    guard: GuardBand,
) -> Result<WitnessSearch> {
    if n_start == 0 {
        return Err(Error::domain("start index must be at least 1"));
    }
    if n_start > n_end {
        return Err(Error::EmptyRange {
            start: n_start,
            end: n_end,
        });
    }
    if matches!(a, SeriesSpec::ReciprocalPrimes) || matches!(b, AuxSequenceSpec::Expression(e) if e.uses_primes()) {
        primes.ensure(n_end.min(crate::sequences::expr::MAX_PRIME_INDEX) + 1)?;
    }
    let (hit, unresolved) = first_hit(n_start, n_end, primes.parallelism(), |n| {
        Ok(match witness_verdict(a, b, n, primes, guard)?.state {
            VerdictState::Holds => Probe::Hit,
            VerdictState::Fails => Probe::Pass,
            VerdictState::Indeterminate => Probe::Unresolved,
        })
    })?;
    match hit {
        Some(n) => {
            let (lhs, rhs) = witness_sides(a, b, n, primes)?;
            let verdict = witness_verdict(a, b, n, primes, guard)?;
            Ok(WitnessSearch::Found(KummerWitness {
                n_prime: n,
                lhs,
                rhs,
                verdict,
            }))
        }
        None => Ok(WitnessSearch::NotFoundUpTo { n_end, unresolved }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::Builtin;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn identity() -> AuxSequenceSpec {
        AuxSequenceSpec::Builtin(Builtin::IdentityN)
    }

    fn constant_one() -> AuxSequenceSpec {
        AuxSequenceSpec::from_text("1").unwrap()
    }

    #[test]
    fn scan_examples() {
        let primes = Primes::new();
        let g = GuardBand::default();
        let one = EvalValue::from(1u64);
        // t_n = 1/n^2, b_n = n: quantity (n+1)/n
        let squares = Series::reciprocals(SeriesSpec::Squares);
        let check = kummer_inequality_scan(&squares, &identity(), 1, &one, 10_000, &primes, g).unwrap();
        assert!(check.certified());
        assert_eq!(check.scanned_to, 10_000);
        // t_n = 1/n, b_n = n: quantity 0
        let harmonic = Series::reciprocals(SeriesSpec::Harmonic);
        let small = EvalValue::Exact(r(1, 1000));
        let check = kummer_inequality_scan(&harmonic, &identity(), 1, &small, 1000, &primes, g).unwrap();
        assert_eq!(check.first_violation, Some(2));
        // t_n = 2^-n, b_n = 1: quantity 1
        let geometric = Series::terms(SeriesSpec::Geometric(r(2, 1)));
        let check = kummer_inequality_scan(&geometric, &constant_one(), 1, &one, 100, &primes, g).unwrap();
        assert!(check.certified());
    }

    #[test]
    fn scan_preconditions() {
        let primes = Primes::new();
        let s = Series::terms(SeriesSpec::Squares);
        let g = GuardBand::default();
        assert!(kummer_inequality_scan(&s, &identity(), 5, &EvalValue::from(1u64), 5, &primes, g).is_err());
        assert!(kummer_inequality_scan(&s, &identity(), 1, &EvalValue::from(0u64), 5, &primes, g).is_err());
        let bad = AuxSequenceSpec::from_text("3-n").unwrap();
        assert!(matches!(
            kummer_inequality_scan(&s, &bad, 1, &EvalValue::from(1u64), 10, &primes, g),
            Err(Error::Positivity { n: 3 })
        ));
    }

    #[test]
    fn witness_examples() {
        let primes = Primes::new();
        let g = GuardBand::default();
        let w = find_violation_witness(&SeriesSpec::ReciprocalPrimes, &identity(), 1, 100, &primes, g).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.n_prime, 1);
        assert_eq!(w.lhs, EvalValue::from(-1i64));
        assert_eq!(w.rhs, EvalValue::from(2u64));
        assert!(w.verdict.exact);
        let w = find_violation_witness(&SeriesSpec::ReciprocalPrimes, &identity(), 2, 100, &primes, g).unwrap();
        let w = w.witness().unwrap();
        assert_eq!((w.n_prime, w.lhs.clone()), (2, EvalValue::from(1u64)));
        let w = find_violation_witness(&SeriesSpec::Harmonic, &constant_one(), 1, 100, &primes, g).unwrap();
        assert_eq!(w.witness().unwrap().n_prime, 2);
    }

    #[test]
    fn no_witness_for_convergent_reciprocals() {
        let primes = Primes::new();
        let w = find_violation_witness(&SeriesSpec::Squares, &identity(), 1, 5000, &primes, GuardBand::default())
            .unwrap();
        assert_eq!(
            w,
            WitnessSearch::NotFoundUpTo {
                n_end: 5000,
                unresolved: vec![]
            }
        );
    }

    #[test]
    fn canonical_examples() {
        let primes = Primes::new();
        let geo = Series::terms(SeriesSpec::Geometric(r(2, 1)));
        let one = EvalValue::from(1u64);
        assert_eq!(canonical_b(&geo, &one, 5, &primes).unwrap(), one);
        assert_eq!(canonical_b(&geo, &one, 1, &primes).unwrap(), one);
        let basel = Series::reciprocals(SeriesSpec::Squares);
        let total = EvalValue::Float {
            value: std::f64::consts::PI.powi(2) / 6.0,
            rel_err: f64::EPSILON,
        };
        let b1 = canonical_b(&basel, &total, 1, &primes).unwrap();
        assert!((b1.to_f64() - 0.6449340668482264).abs() < 1e-12);
        assert!(canonical_b(&geo, &EvalValue::Exact(r(1, 2)), 1, &primes).is_err());
        assert!(canonical_b(&geo, &one, 0, &primes).is_err());
        let all = canonical_multipliers(&basel, &total, 40, &primes).unwrap();
        for n in [1, 7, 40] {
            assert_eq!(all[n - 1], canonical_b(&basel, &total, n as u64, &primes).unwrap());
        }
    }

    #[test]
    fn canonical_multiplier_gives_equality() {
        let primes = Primes::new();
        let geo = Series::terms(SeriesSpec::Geometric(r(3, 1)));
        let total = EvalValue::Exact(r(1, 2));
        let b = AuxSequenceSpec::Builtin(Builtin::KummerCanonical(Box::new(CanonicalMultiplier::new(
            geo.clone(),
            total,
        ))));
        for n in 1..30 {
            assert_eq!(kummer_quantity(&geo, &b, n, &primes).unwrap(), EvalValue::from(1u64));
        }
        let iv = b.interval(4, &primes, 128).unwrap();
        assert!(iv.is_point());
    }

    #[test]
    fn geometric_needs_positive_ratio() {
        let primes = Primes::new();
        assert!(SeriesSpec::Geometric(r(0, 1)).value(1, &primes).is_err());
        assert_eq!(SeriesSpec::Geometric(r(2, 1)).value(3, &primes).unwrap(), EvalValue::Exact(r(1, 8)));
    }
}
