//! Values that are either exact rationals or floats carrying a relative error
//! bound, plus the three-state comparison built on top of them.

pub mod decimal;
pub mod interval;
mod verdict;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use verdict::{compare_lt, GuardBand, Verdict, VerdictState};

const EPS: f64 = f64::EPSILON;
/// libm transcendental functions are within a couple of ulps.
const TRANSCENDENTAL_EPS: f64 = 2.0 * f64::EPSILON;
/// Exact integer powers beyond this many result bits fall back to floats.
const MAX_EXACT_POW_BITS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub enum EvalValue {
    Exact(BigRational),
    Float { value: f64, rel_err: f64 },
}

impl From<u64> for EvalValue {
    fn from(v: u64) -> Self {
        EvalValue::Exact(BigRational::from_integer(v.into()))
    }
}

impl From<i64> for EvalValue {
    fn from(v: i64) -> Self {
        EvalValue::Exact(BigRational::from_integer(v.into()))
    }
}

impl From<BigRational> for EvalValue {
    fn from(v: BigRational) -> Self {
        EvalValue::Exact(v)
    }
}

impl fmt::Display for EvalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalValue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            EvalValue::Float { value, .. } => write!(f, "{value:e}"),
        }
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn conversion_err(r: &BigRational) -> f64 {
    if r.is_integer() && r.numer().magnitude().bits() <= 53 {
        0.0
    } else {
        EPS
    }
}

fn float(value: f64, rel_err: f64) -> Result<EvalValue> {
    if !value.is_finite() {
        return Err(Error::domain(format!("non-finite intermediate value {value}")));
    }
    Ok(EvalValue::Float {
        value,
        rel_err: if rel_err.is_nan() { f64::INFINITY } else { rel_err },
    })
}

fn rel_from_abs(abs: f64, value: f64) -> f64 {
    if abs == 0.0 {
        0.0
    } else if value == 0.0 {
        f64::INFINITY
    } else {
        abs / value.abs()
    }
}

impl EvalValue {
    pub fn exact(r: BigRational) -> Self {
        EvalValue::Exact(r)
    }

    pub fn integer(v: impl Into<BigInt>) -> Self {
        EvalValue::Exact(BigRational::from_integer(v.into()))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, EvalValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            EvalValue::Exact(r) => Some(r),
            EvalValue::Float { .. } => None,
        }
    }

    /// Exact positive integer that fits in `u64`, if this value is one.
    pub fn as_index(&self) -> Option<u64> {
        match self {
            EvalValue::Exact(r) if r.is_integer() && r.is_positive() => r.numer().to_u64(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            EvalValue::Exact(r) => rational_to_f64(r),
            EvalValue::Float { value, .. } => *value,
        }
    }

    /// Relative error bound of `to_f64()`.
    pub fn rel_err(&self) -> f64 {
        match self {
            EvalValue::Exact(r) => conversion_err(r),
            EvalValue::Float { rel_err, .. } => *rel_err,
        }
    }

    pub fn abs_err(&self) -> f64 {
        let r = self.rel_err();
        if r == 0.0 {
            0.0
        } else {
            r * self.to_f64().abs()
        }
    }

    /// Positive for certain (exact sign, or float value above zero).
    pub fn is_positive(&self) -> bool {
        match self {
            EvalValue::Exact(r) => r.is_positive(),
            EvalValue::Float { value, .. } => *value > 0.0,
        }
    }

    fn parts(&self) -> (f64, f64) {
        (self.to_f64(), self.rel_err())
    }

    pub fn add(&self, other: &EvalValue) -> Result<EvalValue> {
        match (self, other) {
            (EvalValue::Exact(a), EvalValue::Exact(b)) => Ok(EvalValue::Exact(a + b)),
            _ => {
                let (a, ra) = self.parts();
                let (b, rb) = other.parts();
                let v = a + b;
                let abs = a.abs() * ra + b.abs() * rb;
                float(v, rel_from_abs(abs, v) + EPS)
            }
        }
    }

    pub fn sub(&self, other: &EvalValue) -> Result<EvalValue> {
        match (self, other) {
            (EvalValue::Exact(a), EvalValue::Exact(b)) => Ok(EvalValue::Exact(a - b)),
            _ => {
                let (a, ra) = self.parts();
                let (b, rb) = other.parts();
                let v = a - b;
                let abs = a.abs() * ra + b.abs() * rb;
                float(v, rel_from_abs(abs, v) + EPS)
            }
        }
    }

    pub fn mul(&self, other: &EvalValue) -> Result<EvalValue> {
        match (self, other) {
            (EvalValue::Exact(a), EvalValue::Exact(b)) => Ok(EvalValue::Exact(a * b)),
            _ => {
                let (a, ra) = self.parts();
                let (b, rb) = other.parts();
                float(a * b, ra + rb + ra * rb + EPS)
            }
        }
    }

    pub fn div(&self, other: &EvalValue) -> Result<EvalValue> {
        match (self, other) {
            (_, EvalValue::Exact(b)) if b.is_zero() => Err(Error::domain("division by zero")),
            (EvalValue::Exact(a), EvalValue::Exact(b)) => Ok(EvalValue::Exact(a / b)),
            _ => {
                let (a, ra) = self.parts();
                let (b, rb) = other.parts();
                if b == 0.0 {
                    return Err(Error::domain("division by zero"));
                }
                let rel = if rb < 1.0 {
                    (ra + rb) / (1.0 - rb) + EPS
                } else {
                    f64::INFINITY
                };
                float(a / b, rel)
            }
        }
    }

    pub fn ln(&self) -> Result<EvalValue> {
        if let EvalValue::Exact(r) = self {
            if r.is_one() {
                return Ok(EvalValue::Exact(BigRational::zero()));
            }
        }
        let (a, ra) = self.parts();
        if a <= 0.0 {
            return Err(Error::domain(format!("ln of non-positive value {a}")));
        }
        let v = a.ln();
        // |ln(a(1+d)) - ln a| <= -ln(1 - |d|)
        let abs = if ra < 1.0 { -(-ra).ln_1p() } else { f64::INFINITY };
        float(v, rel_from_abs(abs, v) + TRANSCENDENTAL_EPS)
    }

    pub fn pow(&self, exponent: &EvalValue) -> Result<EvalValue> {
        if let (EvalValue::Exact(base), EvalValue::Exact(e)) = (self, exponent) {
            if e.is_integer() {
                if let Some(k) = e.numer().to_i64() {
                    let bits = base.numer().bits().max(base.denom().bits());
                    if bits.saturating_mul(k.unsigned_abs()) <= MAX_EXACT_POW_BITS {
                        return exact_powi(base, k).map(EvalValue::Exact);
                    }
                }
            }
        }
        let (a, ra) = self.parts();
        let (b, rb) = exponent.parts();
        let integral = b.fract() == 0.0 && rb == 0.0;
        if a < 0.0 && !integral {
            return Err(Error::domain(format!("{a} raised to non-integer power {b}")));
        }
        if a == 0.0 {
            if b <= 0.0 {
                return Err(Error::domain("zero raised to a non-positive power"));
            }
            return float(0.0, 0.0);
        }
        let v = a.powf(b);
        let d_ln_base = if ra < 1.0 { -(-ra).ln_1p() } else { f64::INFINITY };
        let delta = b.abs() * d_ln_base + a.abs().ln().abs() * b.abs() * rb;
        float(v, delta.exp_m1() + TRANSCENDENTAL_EPS)
    }
}

pub(crate) fn exact_powi(base: &BigRational, k: i64) -> Result<BigRational> {
    if k < 0 && base.is_zero() {
        return Err(Error::domain("zero raised to a negative power"));
    }
    let mag = k.unsigned_abs();
    let exp = usize::try_from(mag).map_err(|_| Error::domain("exponent too large"))?;
    let p = num_traits::pow(base.clone(), exp);
    Ok(if k < 0 { p.recip() } else { p })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> EvalValue {
        EvalValue::Exact(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let v = q(1, 3).add(&q(1, 6)).unwrap().mul(&q(4, 1)).unwrap();
        assert_eq!(v, q(2, 1));
        assert_eq!(q(2, 3).pow(&q(-2, 1)).unwrap(), q(9, 4));
        assert_eq!(q(1, 1).ln().unwrap(), q(0, 1));
    }

    #[test]
    fn ln_goes_float_with_small_error() {
        let v = EvalValue::from(10u64).ln().unwrap();
        assert!(!v.is_exact());
        assert!((v.to_f64() - std::f64::consts::LN_10).abs() < 1e-15);
        assert!(v.rel_err() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(q(0, 1).ln().is_err());
        assert!(q(-2, 1).ln().is_err());
        assert!(q(1, 1).div(&q(0, 1)).is_err());
        assert!(q(0, 1).pow(&q(-1, 1)).is_err());
        let neg = EvalValue::Float { value: -2.0, rel_err: 0.0 };
        assert!(neg.pow(&EvalValue::Float { value: 0.5, rel_err: 0.0 }).is_err());
    }

    #[test]
    fn cancellation_inflates_relative_error() {
        let a = EvalValue::Float { value: 1.0 + 1e-12, rel_err: 1e-15 };
        let b = EvalValue::Float { value: 1.0, rel_err: 1e-15 };
        let d = a.sub(&b).unwrap();
        assert!(d.rel_err() > 1e-4);
    }

    #[test]
    fn index_extraction() {
        assert_eq!(q(7, 1).as_index(), Some(7));
        assert_eq!(q(7, 2).as_index(), None);
        assert_eq!(q(0, 1).as_index(), None);
        assert_eq!(EvalValue::Float { value: 3.0, rel_err: 0.0 }.as_index(), None);
    }
}
