//! Running minima of normalized gap statistics.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::GuardBand;
use crate::par::{map_chunks, CHUNK};
use crate::sequences::{first_valid_index, AuxSequenceSpec};
use crate::sieve::Primes;
use crate::xi::xi_record;

use super::Checkpoints;

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    /// n g_n / (2 p_n)
    GapOverPScaled,
    /// g_n / ln p_n
    GapOverLog,
    /// g_n / ln(p_n)^(1+eps)
    GapOverLogEps(f64),
    /// g_n / (ln(p_n)^(1/2) ln(ln p_n)^2)
    GapOverGpy,
    /// p_{n+1}^(1/(n+1)) / p_n^(1/n)
    FiroozbakhtRatio,
    /// sum_{j<=n} 1/p_j, tracked as a running sum
    ReciprocalPrimeSum,
    /// n u_n, only at n in Ξ(q)
    XiScaledU(AuxSequenceSpec),
    /// (n ln(n)^(1/2) / ln(ln n)^2) u_n, only at n in Ξ(q)
    XiGpyU(AuxSequenceSpec),
}

pub const DEFAULT_EPSILON: f64 = 0.1;

impl Metric {
    pub const NAMES: [&'static str; 8] = [
        "gap_over_p_scaled",
        "gap_over_log",
        "gap_over_log_eps",
        "gap_over_gpy",
        "firoozbakht_ratio",
        "reciprocal_prime_partial_sum",
        "xi_n_u",
        "xi_gpy_u",
    ];

    /// Parse a metric name. The Ξ metrics need a sequence, the ε metric an ε.
    pub fn from_name(name: &str, epsilon: f64, seq: Option<AuxSequenceSpec>) -> Result<Metric> {
        let need_seq = |seq: Option<AuxSequenceSpec>| {
            seq.ok_or_else(|| Error::Config(format!("metric {name} needs a sequence")))
        };
        Ok(match name {
            "gap_over_p_scaled" => Metric::GapOverPScaled,
            "gap_over_log" => Metric::GapOverLog,
            "gap_over_log_eps" => {
                if !(epsilon > 0.0 && epsilon.is_finite()) {
                    return Err(Error::Config(format!("epsilon must be positive, got {epsilon}")));
                }
                Metric::GapOverLogEps(epsilon)
            }
            "gap_over_gpy" => Metric::GapOverGpy,
            "firoozbakht_ratio" => Metric::FiroozbakhtRatio,
            "reciprocal_prime_partial_sum" => Metric::ReciprocalPrimeSum,
            "xi_n_u" => Metric::XiScaledU(need_seq(seq)?),
            "xi_gpy_u" => Metric::XiGpyU(need_seq(seq)?),
            other => {
                return Err(Error::Config(format!(
                    "unknown metric `{other}` (expected one of {})",
                    Metric::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::GapOverPScaled => Metric::NAMES[0],
            Metric::GapOverLog => Metric::NAMES[1],
            Metric::GapOverLogEps(_) => Metric::NAMES[2],
            Metric::GapOverGpy => Metric::NAMES[3],
            Metric::FiroozbakhtRatio => Metric::NAMES[4],
            Metric::ReciprocalPrimeSum => Metric::NAMES[5],
            Metric::XiScaledU(_) => Metric::NAMES[6],
            Metric::XiGpyU(_) => Metric::NAMES[7],
        }
    }

    pub fn is_sum(&self) -> bool {
        matches!(self, Metric::ReciprocalPrimeSum)
    }

    fn xi_spec(&self) -> Option<&AuxSequenceSpec> {
        match self {
            Metric::XiScaledU(s) | Metric::XiGpyU(s) => Some(s),
            _ => None,
        }
    }

    /// The per-index value, or `None` where the metric is undefined.
    fn value(&self, n: u64, primes: &Primes, guard: GuardBand) -> Result<Option<f64>> {
        let p = primes.nth(n)? as f64;
        let q = primes.nth(n + 1)? as f64;
        let g = q - p;
        let nf = n as f64;
        let lp = p.ln();
        Ok(Some(match self {
            Metric::GapOverPScaled => nf * g / (2.0 * p),
            Metric::GapOverLog => g / lp,
            Metric::GapOverLogEps(eps) => g / lp.powf(1.0 + eps),
            Metric::GapOverGpy => g / (lp.sqrt() * lp.ln().powi(2)),
            Metric::FiroozbakhtRatio => (q.ln() / (nf + 1.0) - lp / nf).exp(),
            Metric::ReciprocalPrimeSum => 1.0 / p,
            Metric::XiScaledU(spec) | Metric::XiGpyU(spec) => {
                let rec = xi_record(spec, n, primes, guard)?;
                if !rec.in_xi() {
                    return Ok(None);
                }
                let u = rec.bound.to_f64() / p;
                match self {
                    Metric::XiScaledU(_) => nf * u,
                    _ if n < 2 => return Ok(None),
                    _ => nf * nf.ln().sqrt() / nf.ln().ln().powi(2) * u,
                }
            }
        }))
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::GapOverLogEps(eps) => write!(f, "{}({eps})", self.name()),
            Metric::XiScaledU(s) | Metric::XiGpyU(s) => write!(f, "{}({s})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

/// Running minimum (or running sum) with its argmin.
#[derive(Debug, Clone, PartialEq)]
pub struct LiminfTracker {
    pub metric: String,
    /// The running sum for the partial-sum metric.
    pub running_min: Option<f64>,
    pub argmin: Option<u64>,
    pub n_processed: u64,
    sum: bool,
}

impl LiminfTracker {
    pub fn new(metric: &Metric) -> Self {
        Self {
            metric: metric.name().to_string(),
            running_min: None,
            argmin: None,
            n_processed: 0,
            sum: metric.is_sum(),
        }
    }

    /// Feed the value at the next index. Ties keep the earlier argmin.
    pub fn push(&mut self, value: Option<f64>) {
        self.n_processed += 1;
        let Some(v) = value else { return };
        if self.sum {
            self.running_min = Some(self.running_min.unwrap_or(0.0) + v);
            self.argmin = Some(self.n_processed);
        } else if self.running_min.is_none_or(|m| v < m) {
            self.running_min = Some(v);
            self.argmin = Some(self.n_processed);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiminfPoint {
    pub n: u64,
    pub metric: String,
    pub value: Option<f64>,
    pub running_min: Option<f64>,
    pub argmin: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiminfReport {
    pub tracker: LiminfTracker,
    pub checkpoints: Vec<LiminfPoint>,
}

/// Scan `[1, n_end]`. Values are computed in parallel and folded in index
/// order, so the result does not depend on the worker count.
pub fn liminf_track(
    metric: &Metric,
    n_end: u64,
    checkpoints: &Checkpoints,
    primes: &Primes,
    guard: GuardBand,
) -> Result<LiminfReport> {
    if n_end == 0 {
        return Err(Error::domain("n_end must be at least 1"));
    }
    primes.ensure(n_end + 2)?;
    let defined_from = match metric.xi_spec() {
        Some(spec) => first_valid_index(spec, 1, primes)?,
        None => 1,
    };
    let marks = checkpoints.resolve(n_end);
    let mut marks = marks.iter().peekable();
    let mut tracker = LiminfTracker::new(metric);
    let mut points = Vec::with_capacity(marks.len());
    let workers = primes.parallelism();
    let wave = CHUNK * 8 * workers as u64;
    let mut lo = 1;
    while lo <= n_end {
        let hi = (lo + wave - 1).min(n_end);
        let chunks = map_chunks(lo, hi, workers, |a, b| {
            (a..=b)
                .map(|n| {
                    if n < defined_from {
                        Ok(None)
                    } else {
                        metric.value(n, primes, guard)
                    }
                })
                .collect::<Vec<_>>()
        })?;
        for (offset, value) in chunks.into_iter().flatten().enumerate() {
            let n = lo + offset as u64;
            let value = value?;
            tracker.push(value);
            if marks.peek() == Some(&&n) {
                marks.next();
                points.push(LiminfPoint {
                    n,
                    metric: tracker.metric.clone(),
                    value,
                    running_min: tracker.running_min,
                    argmin: tracker.argmin,
                });
            }
        }
        lo = hi + 1;
    }
    Ok(LiminfReport {
        tracker,
        checkpoints: points,
    })
}
