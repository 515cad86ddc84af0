//! Auxiliary sequences q_n and the derived quantities
//! u_n = (q_{n+1} - q_n + 1) / q_n and Q_n = p_n u_n.

pub mod expr;
pub mod table;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::kummer::CanonicalMultiplier;
use crate::numeric::interval::Interval;
use crate::numeric::EvalValue;
use crate::sieve::Primes;

pub use expr::{parse_sequence_expr, BinOp, Expr, Literal};
pub use table::Table;

/// How far past the requested start a scan may move to skip leading
/// non-positive values (for example `n ln n` at n = 1).
pub const MAX_CLIP: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// q_n = n
    IdentityN,
    /// q_n = n ln n
    NLogN,
    /// q_n = p_n^(1 - 1/n) ln n
    FiroozbakhtWeight,
    /// q_n = n ln n for even n, (n - 1) ln n for odd n
    TwinPiecewise,
    /// b_n = (M - sum_{j<=n} a_j) / a_n
    KummerCanonical(Box<CanonicalMultiplier>),
}

impl Builtin {
    pub const NAMES: [&'static str; 5] = [
        "identity_n",
        "n_log_n",
        "firoozbakht_weight",
        "twin_piecewise",
        "kummer_canonical",
    ];

    /// Builtin by name. `kummer_canonical` needs a series and a total, so it
    /// is built with [`Builtin::KummerCanonical`] directly.
    pub fn from_name(name: &str) -> Result<Option<Builtin>> {
        Ok(Some(match name {
            "identity_n" => Builtin::IdentityN,
            "n_log_n" => Builtin::NLogN,
            "firoozbakht_weight" => Builtin::FiroozbakhtWeight,
            "twin_piecewise" => Builtin::TwinPiecewise,
            "kummer_canonical" => {
                return Err(Error::Config(
                    "kummer_canonical takes a series and a total; use the kummer subcommands".into(),
                ))
            }
            _ => return Ok(None),
        }))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::IdentityN => "identity_n",
            Builtin::NLogN => "n_log_n",
            Builtin::FiroozbakhtWeight => "firoozbakht_weight",
            Builtin::TwinPiecewise => "twin_piecewise",
            Builtin::KummerCanonical(_) => "kummer_canonical",
        }
    }

    /// Defining expression, for the builtins that have one.
    pub fn expr(&self) -> Option<&'static Expr> {
        static IDENTITY: OnceLock<Expr> = OnceLock::new();
        static NLOGN: OnceLock<Expr> = OnceLock::new();
        static FIROOZBAKHT: OnceLock<Expr> = OnceLock::new();
        static TWIN: OnceLock<Expr> = OnceLock::new();
        let (cell, text) = match self {
            Builtin::IdentityN => (&IDENTITY, "n"),
            Builtin::NLogN => (&NLOGN, "n*ln(n)"),
            Builtin::FiroozbakhtWeight => (&FIROOZBAKHT, "p(n)^(1-1/n)*ln(n)"),
            Builtin::TwinPiecewise => (&TWIN, "if_even(n*ln(n),(n-1)*ln(n))"),
            Builtin::KummerCanonical(_) => return None,
        };
        Some(cell.get_or_init(|| parse_sequence_expr(text).expect("builtin expression parses")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AuxSequenceSpec {
    Builtin(Builtin),
    Expression(Expr),
    Tabulated(Arc<Table>),
}

impl From<Builtin> for AuxSequenceSpec {
    fn from(b: Builtin) -> Self {
        AuxSequenceSpec::Builtin(b)
    }
}

impl fmt::Display for AuxSequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuxSequenceSpec::Builtin(b) => f.write_str(b.name()),
            AuxSequenceSpec::Expression(e) => write!(f, "{e}"),
            AuxSequenceSpec::Tabulated(t) => write!(f, "table[{} rows]", t.len()),
        }
    }
}

impl AuxSequenceSpec {
    /// A builtin name or else an expression.
    pub fn from_text(text: &str) -> Result<Self> {
        match Builtin::from_name(text.trim())? {
            Some(b) => Ok(AuxSequenceSpec::Builtin(b)),
            None => Ok(AuxSequenceSpec::Expression(parse_sequence_expr(text)?)),
        }
    }

    pub fn tabulated(table: Table) -> Self {
        AuxSequenceSpec::Tabulated(Arc::new(table))
    }

    /// Raw value at `n`, without the positivity check.
    pub fn value(&self, n: u64, primes: &Primes) -> Result<EvalValue> {
        match self {
            AuxSequenceSpec::Builtin(Builtin::KummerCanonical(c)) => c.value(n, primes),
            AuxSequenceSpec::Builtin(b) => b.expr().expect("has expression").eval(n, primes),
            AuxSequenceSpec::Expression(e) => e.eval(n, primes),
            AuxSequenceSpec::Tabulated(t) => Ok(EvalValue::Exact(t.get(n)?.clone())),
        }
    }

    pub fn interval(&self, n: u64, primes: &Primes, prec: u64) -> Result<Interval> {
        match self {
            AuxSequenceSpec::Builtin(Builtin::KummerCanonical(c)) => c.interval(n, primes, prec),
            AuxSequenceSpec::Builtin(b) => b.expr().expect("has expression").eval_interval(n, primes, prec),
            AuxSequenceSpec::Expression(e) => e.eval_interval(n, primes, prec),
            AuxSequenceSpec::Tabulated(t) => Ok(Interval::point(t.get(n)?.clone(), prec)),
        }
    }

    /// Every value is a rational number (no logarithms or fractional powers can appear).
    pub fn is_rational_valued(&self) -> bool {
        matches!(
            self,
            AuxSequenceSpec::Builtin(Builtin::IdentityN) | AuxSequenceSpec::Tabulated(_)
        )
    }
}

/// q_n, checked positive.
pub fn eval_q(spec: &AuxSequenceSpec, n: u64, primes: &Primes) -> Result<EvalValue> {
    if n == 0 {
        return Err(Error::domain("sequence index must be at least 1"));
    }
    let v = spec.value(n, primes)?;
    if !v.is_positive() {
        return Err(Error::Positivity { n });
    }
    Ok(v)
}

pub fn eval_u(spec: &AuxSequenceSpec, n: u64, primes: &Primes) -> Result<EvalValue> {
    let q = eval_q(spec, n, primes)?;
    let q_next = eval_q(spec, n + 1, primes)?;
    u_from(&q, &q_next)
}

pub(crate) fn u_from(q: &EvalValue, q_next: &EvalValue) -> Result<EvalValue> {
    q_next.sub(q)?.add(&EvalValue::from(1u64))?.div(q)
}

/// Q_n = p_n (q_{n+1} - q_n + 1) / q_n.
pub fn eval_gap_bound(spec: &AuxSequenceSpec, n: u64, primes: &Primes) -> Result<EvalValue> {
    let u = eval_u(spec, n, primes)?;
    EvalValue::from(primes.nth(n)?).mul(&u)
}

pub(crate) fn u_interval(q: &Interval, q_next: &Interval) -> Result<Interval> {
    let one = Interval::point(BigRational::one(), q.precision());
    q_next.sub(q).add(&one).div(q)
}

/// Certified enclosures of (q_n, q_{n+1}), failing unless both are provably positive.
pub fn q_pair_interval(
    spec: &AuxSequenceSpec,
    n: u64,
    primes: &Primes,
    prec: u64,
) -> Result<(Interval, Interval)> {
    let q = spec.interval(n, primes, prec)?;
    let q_next = spec.interval(n + 1, primes, prec)?;
    use num_traits::Signed;
    if !q.lo.is_positive() || !q_next.lo.is_positive() {
        return Err(Error::domain("enclosure does not certify positivity"));
    }
    Ok((q, q_next))
}

/// First index at or after `start` (and within [`MAX_CLIP`]) where q_n is
/// defined and positive. Later holes are errors, not clipped.
pub fn first_valid_index(spec: &AuxSequenceSpec, start: u64, primes: &Primes) -> Result<u64> {
    let start = start.max(1);
    let mut last_err = None;
    for n in start..start + MAX_CLIP {
        match eval_q(spec, n, primes) {
            Ok(_) => return Ok(n),
            Err(e @ (Error::Positivity { .. } | Error::Domain(_))) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(v: &EvalValue, want: f64, tol: f64) {
        assert!((v.to_f64() - want).abs() < tol, "{} vs {want}", v.to_f64());
    }

    fn rat(n: i64, d: i64) -> EvalValue {
        EvalValue::Exact(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn builtin_values() {
        let primes = Primes::new();
        let id = AuxSequenceSpec::Builtin(Builtin::IdentityN);
        assert_eq!(eval_q(&id, 7, &primes).unwrap(), rat(7, 1));
        let twin = AuxSequenceSpec::Builtin(Builtin::TwinPiecewise);
        let v = eval_q(&twin, 10, &primes).unwrap();
        assert!(!v.is_exact());
        close(&v, 23.02585092994046, 1e-12);
        let fw = AuxSequenceSpec::Builtin(Builtin::FiroozbakhtWeight);
        close(&eval_q(&fw, 2, &primes).unwrap(), 1.2005661338529436, 1e-12);
    }

    #[test]
    fn u_and_gap_bound() {
        let primes = Primes::new();
        let id = AuxSequenceSpec::Builtin(Builtin::IdentityN);
        assert_eq!(eval_u(&id, 4, &primes).unwrap(), rat(1, 2));
        assert_eq!(eval_gap_bound(&id, 5, &primes).unwrap(), rat(22, 5));
        assert_eq!(eval_gap_bound(&id, 1, &primes).unwrap(), rat(4, 1));
        let nlogn = AuxSequenceSpec::Builtin(Builtin::NLogN);
        close(&eval_u(&nlogn, 10, &primes).unwrap(), 0.18896140186437252, 1e-12);
        let twin = AuxSequenceSpec::Builtin(Builtin::TwinPiecewise);
        close(&eval_u(&twin, 10, &primes).unwrap(), 0.08482213334855025, 1e-12);
        close(&eval_gap_bound(&twin, 10, &primes).unwrap(), 2.459841867107957, 1e-12);
    }

    #[test]
    fn positivity_is_reported_not_clamped() {
        let primes = Primes::new();
        let nlogn = AuxSequenceSpec::Builtin(Builtin::NLogN);
        assert!(matches!(eval_q(&nlogn, 1, &primes), Err(Error::Positivity { n: 1 })));
        assert!(matches!(eval_u(&nlogn, 1, &primes), Err(Error::Positivity { n: 1 })));
        let shrinking = AuxSequenceSpec::from_text("5-n").unwrap();
        assert!(matches!(eval_u(&shrinking, 4, &primes), Err(Error::Positivity { n: 5 })));
        assert_eq!(first_valid_index(&nlogn, 1, &primes).unwrap(), 2);
        assert_eq!(first_valid_index(&shrinking, 1, &primes).unwrap(), 1);
        assert!(first_valid_index(&shrinking, 5, &primes).is_err());
        assert!(matches!(eval_q(&nlogn, 0, &primes), Err(Error::Domain(_))));
    }

    #[test]
    fn from_text_prefers_builtins() {
        assert_eq!(
            AuxSequenceSpec::from_text("twin_piecewise").unwrap(),
            AuxSequenceSpec::Builtin(Builtin::TwinPiecewise)
        );
        assert!(matches!(AuxSequenceSpec::from_text("n*2").unwrap(), AuxSequenceSpec::Expression(_)));
        assert!(AuxSequenceSpec::from_text("kummer_canonical").is_err());
        assert!(matches!(
            AuxSequenceSpec::from_text("nope"),
            Err(Error::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn gap_bound_is_prime_times_u() {
        let primes = Primes::new();
        for spec in [Builtin::IdentityN, Builtin::NLogN, Builtin::TwinPiecewise, Builtin::FiroozbakhtWeight] {
            let spec = AuxSequenceSpec::Builtin(spec);
            for n in 2..300u64 {
                let q = eval_gap_bound(&spec, n, &primes).unwrap();
                let u = eval_u(&spec, n, &primes).unwrap();
                let p = primes.nth(n).unwrap() as f64;
                match (&q, &u) {
                    (EvalValue::Exact(a), EvalValue::Exact(b)) => {
                        assert_eq!(a, &(b * BigRational::from_integer(primes.nth(n).unwrap().into())))
                    }
                    _ => assert!((q.to_f64() - p * u.to_f64()).abs() <= q.abs_err() + u.abs_err() * p),
                }
            }
        }
    }
}
