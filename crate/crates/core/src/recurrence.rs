//! The equality recurrence
//!
//! ```text
//! q_{n+2} = [ (p_n / p_{n+1}) (q_{n+1} - q_n + 1) / q_n + 1 ] q_{n+1} - 1
//! ```
//!
//! which keeps `Q_n = p_n (q_{n+1} - q_n + 1) / q_n` constant, and an audit
//! for whether Q_n is nonincreasing along any sequence.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::numeric::interval::{Interval, DEFAULT_PRECISION};
use crate::numeric::{compare_lt, EvalValue, GuardBand, Verdict, VerdictState};
use crate::par::{first_hit, Probe};
use crate::sequences::{eval_gap_bound, first_valid_index, q_pair_interval, u_from, u_interval, AuxSequenceSpec};
use crate::sieve::Primes;

pub const DEFAULT_BIT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceStatus {
    Running,
    /// q_n was computed and is not positive.
    PositivityFailed(u64),
    Completed(u64),
    /// q_n would need more numerator plus denominator bits than allowed.
    BitBudgetExceeded(u64),
    /// A float q_n too close to zero to sign.
    PositivityIndeterminate(u64),
}

impl fmt::Display for RecurrenceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecurrenceStatus::Running => f.write_str("running"),
            RecurrenceStatus::PositivityFailed(n) => write!(f, "positivity_failed({n})"),
            RecurrenceStatus::Completed(n) => write!(f, "completed({n})"),
            RecurrenceStatus::BitBudgetExceeded(n) => write!(f, "bit_budget_exceeded({n})"),
            RecurrenceStatus::PositivityIndeterminate(n) => write!(f, "positivity_indeterminate({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceRun {
    pub seed: (EvalValue, EvalValue),
    /// q_1, q_2, ... all positive.
    pub values: Vec<EvalValue>,
    pub status: RecurrenceStatus,
    /// The non-positive q_n behind a `PositivityFailed(n)`.
    pub failing_value: Option<EvalValue>,
    /// Q_1, Q_2, ... for each consecutive pair in `values`.
    pub q_trace: Vec<EvalValue>,
    target: u64,
    bit_budget: u64,
}

fn bits(v: &EvalValue) -> u64 {
    match v {
        EvalValue::Exact(r) => r.numer().bits() + r.denom().bits(),
        EvalValue::Float { .. } => 0,
    }
}

impl RecurrenceRun {
    /// A run that will stop at q_n_end.
    pub fn new(seed: (EvalValue, EvalValue), n_end: u64, bit_budget: u64) -> Result<Self> {
        for (i, q) in [&seed.0, &seed.1].into_iter().enumerate() {
            if !q.is_positive() {
                return Err(Error::domain(format!("seed q_{} = {q} is not positive", i + 1)));
            }
        }
        if n_end == 0 {
            return Err(Error::domain("N must be at least 1"));
        }
        let values: Vec<EvalValue> = [seed.0.clone(), seed.1.clone()].into_iter().take(n_end as usize).collect();
        let status = if values.len() as u64 == n_end {
            RecurrenceStatus::Completed(n_end)
        } else {
            RecurrenceStatus::Running
        };
        Ok(Self {
            seed,
            values,
            status,
            failing_value: None,
            q_trace: Vec::new(),
            target: n_end,
            bit_budget,
        })
    }

    /// Compute one more term. Returns false once the run has stopped.
    pub fn step(&mut self, primes: &Primes, guard: GuardBand) -> Result<bool> {
        if self.status != RecurrenceStatus::Running {
            return Ok(false);
        }
        let k = self.values.len() as u64 - 1;
        let (q, q_next) = (&self.values[k as usize - 1], &self.values[k as usize]);
        let u = u_from(q, q_next)?;
        let ratio = EvalValue::Exact(BigRational::new(BigInt::from(primes.nth(k)?), BigInt::from(primes.nth(k + 1)?)));
        let one = EvalValue::from(1u64);
        let value = ratio.mul(&u)?.add(&one)?.mul(q_next)?.sub(&one)?;
        let index = k + 2;
        let positive = match &value {
            EvalValue::Exact(r) => r.is_positive(),
            EvalValue::Float { .. } => match compare_lt(&EvalValue::from(0u64), &value, guard).state {
                VerdictState::Holds => true,
                VerdictState::Fails => false,
                VerdictState::Indeterminate => {
                    self.status = RecurrenceStatus::PositivityIndeterminate(index);
                    return Ok(false);
                }
            },
        };
        if !positive {
            self.status = RecurrenceStatus::PositivityFailed(index);
            self.failing_value = Some(value);
            return Ok(false);
        }
        if bits(&value) > self.bit_budget {
            self.status = RecurrenceStatus::BitBudgetExceeded(index);
            return Ok(false);
        }
        self.values.push(value);
        if index == self.target {
            self.status = RecurrenceStatus::Completed(index);
            return Ok(false);
        }
        Ok(true)
    }

    fn finish(&mut self, primes: &Primes) -> Result<()> {
        self.q_trace = self
            .values
            .windows(2)
            .enumerate()
            .map(|(i, w)| EvalValue::from(primes.nth(i as u64 + 1)?).mul(&u_from(&w[0], &w[1])?))
            .collect::<Result<_>>()?;
        Ok(())
    }

    /// q_n, 1-based.
    pub fn q(&self, n: u64) -> Option<&EvalValue> {
        self.values.get(usize::try_from(n).ok()?.checked_sub(1)?)
    }
}

/// Iterate from `seed` until q_n_end, a non-positive term, or the bit budget.
pub fn iterate_equality(
    seed: (EvalValue, EvalValue),
    n_end: u64,
    primes: &Primes,
    bit_budget: u64,
    guard: GuardBand,
) -> Result<RecurrenceRun> {
    let mut run = RecurrenceRun::new(seed, n_end, bit_budget)?;
    while run.step(primes, guard)? {}
    run.finish(primes)?;
    Ok(run)
}

#[derive(Debug, Clone, Copy)]
pub enum AuditSource<'a> {
    Spec(&'a AuxSequenceSpec),
    Run(&'a RecurrenceRun),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneViolation {
    pub n: u64,
    pub bound: EvalValue,
    pub bound_next: EvalValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneAudit {
    pub start: u64,
    /// Last n for which Q_n entered a comparison.
    pub checked_through: u64,
    /// First n with Q_{n+1} > Q_n.
    pub violation: Option<MonotoneViolation>,
    /// Undecided comparisons before any violation.
    pub unresolved: Vec<u64>,
}

impl MonotoneAudit {
    pub fn nonincreasing(&self) -> bool {
        self.violation.is_none() && self.unresolved.is_empty()
    }
}

fn increases(spec: &AuxSequenceSpec, n: u64, primes: &Primes, guard: GuardBand) -> Result<Verdict> {
    let a = eval_gap_bound(spec, n, primes)?;
    let b = eval_gap_bound(spec, n + 1, primes)?;
    let v = compare_lt(&a, &b, guard);
    if !v.is_indeterminate() {
        return Ok(v);
    }
    let enclose = |k: u64| -> Result<_> {
        let (q, q_next) = q_pair_interval(spec, k, primes, DEFAULT_PRECISION)?;
        let p = Interval::point(BigRational::from_integer(primes.nth(k)?.into()), DEFAULT_PRECISION);
        Ok(p.mul(&u_interval(&q, &q_next)?))
    };
    Ok(match (enclose(n), enclose(n + 1)) {
        (Ok(a), Ok(b)) => Verdict::from_intervals(&a, &b),
        _ => v,
    })
}

/// Is Q_n nonincreasing on `[start, n_end]`? Each step compares Q_n with Q_{n+1}.
pub fn q_monotone_audit(source: AuditSource<'_>, n_end: u64, primes: &Primes, guard: GuardBand) -> Result<MonotoneAudit> {
    match source {
        AuditSource::Run(run) => {
            let trace = &run.q_trace;
            let last = (trace.len() as u64).min(n_end);
            for n in 1..last {
                let (a, b) = (&trace[n as usize - 1], &trace[n as usize]);
                if compare_lt(a, b, guard).holds() {
                    return Ok(MonotoneAudit {
                        start: 1,
                        checked_through: n + 1,
                        violation: Some(MonotoneViolation {
                            n,
                            bound: a.clone(),
                            bound_next: b.clone(),
                        }),
                        unresolved: Vec::new(),
                    });
                }
            }
            Ok(MonotoneAudit {
                start: 1,
                checked_through: last,
                violation: None,
                unresolved: Vec::new(),
            })
        }
        AuditSource::Spec(spec) => {
            let start = first_valid_index(spec, 1, primes)?;
            if start >= n_end {
                return Err(Error::EmptyRange { start, end: n_end });
            }
            primes.ensure(n_end + 1)?;
            let (hit, unresolved) = first_hit(start, n_end - 1, primes.parallelism(), |n| {
                Ok(match increases(spec, n, primes, guard)?.state {
                    VerdictState::Holds => Probe::Hit,
                    VerdictState::Fails => Probe::Pass,
                    VerdictState::Indeterminate => Probe::Unresolved,
                })
            })?;
            let violation = hit
                .map(|n| -> Result<_> {
                    Ok(MonotoneViolation {
                        n,
                        bound: eval_gap_bound(spec, n, primes)?,
                        bound_next: eval_gap_bound(spec, n + 1, primes)?,
                    })
                })
                .transpose()?;
            Ok(MonotoneAudit {
                start,
                checked_through: hit.map_or(n_end, |n| n + 1),
                violation,
                unresolved,
            })
        }
    }
}
