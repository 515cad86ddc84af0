//! Prime gap scans against auxiliary-sequence bounds.
//!
//! The library sieves primes, turns them into gaps `g_n = p_{n+1} - p_n`,
//! and checks `g_n < Q_n` where `Q_n = p_n (q_{n+1} - q_n + 1) / q_n` for
//! any positive auxiliary sequence `q_n`. Comparisons are exact when every
//! quantity is rational and guarded (with an interval-arithmetic retry)
//! otherwise; see [`numeric::Verdict`].

pub mod bounds;
pub mod error;
pub mod gaps;
pub mod kummer;
pub mod numeric;
mod par;
pub mod recurrence;
pub mod report;
pub mod sequences;
pub mod sieve;
pub mod xi;

pub use bounds::{
    bound_comparison_scan, classical_checks, firoozbakht_check, firoozbakht_scan, kourbatov_bound_check, liminf_track,
    sharp_bound_check, two_over_n_check, BoundReport, Checkpoints, LiminfTracker, Metric,
};
pub use error::{Error, Result};
pub use gaps::{gap, gap_stream, GapRecord};
pub use kummer::{canonical_b, find_violation_witness, kummer_inequality_scan, Series, SeriesSpec};
pub use numeric::{EvalValue, GuardBand, Verdict, VerdictState};
pub use recurrence::{iterate_equality, q_monotone_audit, RecurrenceRun, RecurrenceStatus};
pub use sequences::{AuxSequenceSpec, Builtin};
pub use sieve::{nth_prime, prime_count, primes_up_to, primes_up_to_with, Primes, SieveConfig};
pub use xi::{ratio_check, xi_density, xi_scan, XiRecord};
