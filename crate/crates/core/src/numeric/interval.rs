//! Certified enclosures over rationals.
//!
//! Endpoints are kept as dyadic rationals rounded outward to a working
//! precision. `ln` uses the atanh series `ln m = 2 sum t^(2j+1)/(2j+1)`,
//! `t = (m-1)/(m+1)`, after scaling `m` into `[1, 2)`, so `0 <= t < 1/3`
//! and the tail after the last term is at most
//! `t^(2J+3) / ((2J+3)(1-t^2))`. `exp` halves its argument until it is at
//! most 1/2, sums the Taylor series (tail at most twice the next term) and
//! squares back.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational_to_f64;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u64 = 128;

fn approx_log2(x: &BigRational) -> i64 {
    x.numer().bits() as i64 - x.denom().bits() as i64
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// Largest dyadic with about `prec` significant bits that is `<= x`.
pub fn round_down(x: &BigRational, prec: u64) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    // Already short enough: leave alone.
    if x.numer().bits() <= prec + 2 && x.denom().bits() <= prec + 2 {
        return x.clone();
    }
    let shift = prec as i64 - approx_log2(x);
    if shift >= 0 {
        let s = shift as u64;
        let scaled = (x.numer() << s).div_floor(x.denom());
        BigRational::new(scaled, pow2(s))
    } else {
        let s = (-shift) as u64;
        let q = x.numer().div_floor(&(x.denom() << s));
        BigRational::from_integer(q << s)
    }
}

/// Smallest dyadic with about `prec` significant bits that is `>= x`.
pub fn round_up(x: &BigRational, prec: u64) -> BigRational {
    -round_down(&-x, prec)
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Enclosure of `atanh(t)` for `0 <= t_lo <= t_hi <= 1/3`.
fn atanh_bounds(t_lo: &BigRational, t_hi: &BigRational, prec: u64) -> (BigRational, BigRational) {
    let work = prec + 16;
    let eps = BigRational::new(BigInt::one(), pow2(prec + 8));
    let t2_lo = round_down(&(t_lo * t_lo), work);
    let t2_hi = round_up(&(t_hi * t_hi), work);
    let mut pw_lo = t_lo.clone();
    let mut pw_hi = t_hi.clone();
    let mut sum_lo = BigRational::zero();
    let mut sum_hi = BigRational::zero();
    let mut k: i64 = 1;
    loop {
        sum_lo = round_down(&(&sum_lo + round_down(&(&pw_lo / int(k)), work)), work);
        sum_hi = round_up(&(&sum_hi + round_up(&(&pw_hi / int(k)), work)), work);
        pw_lo = round_down(&(&pw_lo * &t2_lo), work);
        pw_hi = round_up(&(&pw_hi * &t2_hi), work);
        k += 2;
        let next_hi = &pw_hi / int(k);
        if next_hi < eps || pw_hi.is_zero() {
            let one_minus = BigRational::one() - &t2_hi;
            let tail = round_up(&(next_hi / one_minus), work);
            sum_hi = round_up(&(sum_hi + tail), work);
            return (sum_lo, sum_hi);
        }
    }
}

/// Enclosure of ln 2 = 2 atanh(1/3).
pub fn ln2_bounds(prec: u64) -> (BigRational, BigRational) {
    let third = BigRational::new(1.into(), 3.into());
    let (lo, hi) = atanh_bounds(&third, &third, prec);
    (lo * int(2), hi * int(2))
}

/// Enclosure `[lo, hi]` of `ln x` for rational `x > 0`.
pub fn ln_bounds(x: &BigRational, prec: u64) -> Result<(BigRational, BigRational)> {
    if !x.is_positive() {
        return Err(Error::domain("ln of non-positive value"));
    }
    if x.is_one() {
        return Ok((BigRational::zero(), BigRational::zero()));
    }
    let work = prec + 16;
    let mut k = approx_log2(x);
    let scale = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(pow2(k as u64))
        } else {
            BigRational::new(BigInt::one(), pow2((-k) as u64))
        }
    };
    let mut m = x / scale(k);
    let two = int(2);
    while m >= two {
        m /= &two;
        k += 1;
    }
    while m < BigRational::one() {
        m *= &two;
        k -= 1;
    }
    let t = (&m - BigRational::one()) / (&m + BigRational::one());
    let (t_lo, t_hi) = (round_down(&t, work), round_up(&t, work));
    let (s_lo, s_hi) = atanh_bounds(&t_lo, &t_hi, prec);
    let (l2_lo, l2_hi) = ln2_bounds(prec);
    let kk = int(k);
    let (lo, hi) = if k >= 0 {
        (&kk * l2_lo + s_lo * int(2), &kk * l2_hi + s_hi * int(2))
    } else {
        (&kk * l2_hi + s_lo * int(2), &kk * l2_lo + s_hi * int(2))
    };
    Ok((round_down(&lo, work), round_up(&hi, work)))
}

/// Enclosure of `exp(x)` for rational `x`.
pub fn exp_bounds(x: &BigRational, prec: u64) -> Result<(BigRational, BigRational)> {
    if x.is_zero() {
        return Ok((BigRational::one(), BigRational::one()));
    }
    if x.is_negative() {
        let (lo, hi) = exp_bounds(&-x, prec)?;
        let work = prec + 16;
        return Ok((round_down(&hi.recip(), work), round_up(&lo.recip(), work)));
    }
    if x.to_f64().is_none_or(|v| v > 40_000.0) {
        return Err(Error::domain("exp argument too large for certified evaluation"));
    }
    let half = BigRational::new(1.into(), 2.into());
    let mut s: u64 = 0;
    let mut y = x.clone();
    while y > half {
        y /= int(2);
        s += 1;
    }
    let work = prec + s + 16;
    let eps = BigRational::new(BigInt::one(), pow2(work));
    let mut term_lo = BigRational::one();
    let mut term_hi = BigRational::one();
    let mut sum_lo = BigRational::zero();
    let mut sum_hi = BigRational::zero();
    let mut j: i64 = 0;
    loop {
        sum_lo = round_down(&(&sum_lo + &term_lo), work);
        sum_hi = round_up(&(&sum_hi + &term_hi), work);
        j += 1;
        term_lo = round_down(&(&term_lo * &y / int(j)), work);
        term_hi = round_up(&(&term_hi * &y / int(j)), work);
        if term_hi < eps {
            sum_hi = round_up(&(sum_hi + term_hi * int(2)), work);
            break;
        }
    }
    for _ in 0..s {
        sum_lo = round_down(&(&sum_lo * &sum_lo), work);
        sum_hi = round_up(&(&sum_hi * &sum_hi), work);
    }
    Ok((round_down(&sum_lo, prec + 16), round_up(&sum_hi, prec + 16)))
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
    prec: u64,
}

impl Interval {
    pub fn point(x: BigRational, prec: u64) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
            prec,
        }
    }

    pub fn new(lo: BigRational, hi: BigRational, prec: u64) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi, prec }
    }

    pub fn precision(&self) -> u64 {
        self.prec
    }

    fn work(&self, other: &Interval) -> u64 {
        self.prec.max(other.prec) + 16
    }

    fn outward(lo: BigRational, hi: BigRational, prec: u64) -> Self {
        Self {
            lo: round_down(&lo, prec + 16),
            hi: round_up(&hi, prec + 16),
            prec,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn midpoint_f64(&self) -> f64 {
        rational_to_f64(&((&self.lo + &self.hi) / int(2)))
    }

    pub fn width_f64(&self) -> f64 {
        rational_to_f64(&(&self.hi - &self.lo))
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let p = self.prec.max(other.prec);
        let w = self.work(other);
        Interval {
            lo: round_down(&(&self.lo + &other.lo), w),
            hi: round_up(&(&self.hi + &other.hi), w),
            prec: p,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval::outward(lo, hi, self.prec.max(other.prec))
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::domain("interval division by a range containing zero"));
        }
        let quotients = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let lo = quotients.iter().min().expect("four quotients").clone();
        let hi = quotients.iter().max().expect("four quotients").clone();
        Ok(Interval::outward(lo, hi, self.prec.max(other.prec)))
    }

    pub fn ln(&self) -> Result<Interval> {
        if !self.lo.is_positive() {
            return Err(Error::domain("ln of a range reaching zero or below"));
        }
        let (lo, _) = ln_bounds(&self.lo, self.prec)?;
        let (_, hi) = ln_bounds(&self.hi, self.prec)?;
        Ok(Interval::outward(lo, hi, self.prec))
    }

    pub fn exp(&self) -> Result<Interval> {
        let (lo, _) = exp_bounds(&self.lo, self.prec)?;
        let (_, hi) = exp_bounds(&self.hi, self.prec)?;
        Ok(Interval::outward(lo, hi, self.prec))
    }

    /// Integer power.
    pub fn powi(&self, k: i64) -> Result<Interval> {
        if k == 0 {
            return Ok(Interval::point(BigRational::one(), self.prec));
        }
        if k < 0 {
            let pos = self.powi(-k)?;
            return Interval::point(BigRational::one(), self.prec).div(&pos);
        }
        let mag_lo = if self.contains_zero() {
            BigRational::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        };
        let mag_hi = self.lo.abs().max(self.hi.abs());
        let mag = Interval::outward(mag_lo, mag_hi, self.prec).powu(k as u64);
        let odd = k % 2 == 1;
        Ok(if !self.lo.is_negative() {
            mag
        } else if !self.hi.is_positive() {
            if odd {
                mag.neg()
            } else {
                mag
            }
        } else if odd {
            let neg = Interval::outward(self.lo.abs(), self.lo.abs(), self.prec).powu(k as u64);
            let pos = Interval::outward(self.hi.clone(), self.hi.clone(), self.prec).powu(k as u64);
            Interval::outward(-neg.hi, pos.hi, self.prec)
        } else {
            Interval::outward(BigRational::zero(), mag.hi, self.prec)
        })
    }

    /// Power of a nonnegative interval by repeated squaring.
    fn powu(&self, mut k: u64) -> Interval {
        let mut base = self.clone();
        let mut acc = Interval::point(BigRational::one(), self.prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// General power; integer point exponents use `powi`, anything else needs a positive base.
    pub fn pow(&self, exponent: &Interval) -> Result<Interval> {
        if exponent.is_point() && exponent.lo.is_integer() {
            if let Some(k) = exponent.lo.numer().to_i64() {
                if k.unsigned_abs() <= 1 << 16 {
                    return self.powi(k);
                }
            }
        }
        exponent.mul(&self.ln()?).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn encloses(lo: &BigRational, hi: &BigRational, v: f64) {
        let (l, h) = (rational_to_f64(lo), rational_to_f64(hi));
        assert!(l <= v * (1.0 + 1e-15) + 1e-300 && v <= h * (1.0 + 1e-15) + 1e-300, "{l} {v} {h}");
        assert!(h - l <= v.abs() * 1e-30 + 1e-35, "too wide: {}", h - l);
    }

    #[test]
    fn rounding_brackets() {
        let short = r(1, 3);
        assert_eq!(round_down(&short, 64), short);
        let x = BigRational::new(1.into(), BigInt::from(3).pow(100));
        let lo = round_down(&x, 64);
        let hi = round_up(&x, 64);
        assert!(lo < x && x < hi);
        assert!(lo.numer().bits() <= 70);
        let big = r(10, 1) * BigRational::from_integer(pow2(300)) / r(7, 1);
        assert!(round_down(&big, 64) <= big && big <= round_up(&big, 64));
    }

    #[test]
    fn ln_known_values() {
        let (lo, hi) = ln2_bounds(128);
        encloses(&lo, &hi, std::f64::consts::LN_2);
        for (x, v) in [
            (r(10, 1), std::f64::consts::LN_10),
            (r(1, 10), -std::f64::consts::LN_10),
            (r(11, 10), 0.09531017980432486),
            (r(15485863, 1), 16.555438101189427),
        ] {
            let (lo, hi) = ln_bounds(&x, 128).unwrap();
            assert!(lo <= hi);
            let (l, h) = (rational_to_f64(&lo), rational_to_f64(&hi));
            assert!(l <= v + 1e-6 && v - 1e-6 <= h, "{x}: {l} {h}");
        }
        assert!(ln_bounds(&r(0, 1), 128).is_err());
    }

    #[test]
    fn exp_known_values() {
        let (lo, hi) = exp_bounds(&r(1, 1), 128).unwrap();
        encloses(&lo, &hi, std::f64::consts::E);
        let (lo, hi) = exp_bounds(&r(-3, 2), 128).unwrap();
        encloses(&lo, &hi, (-1.5f64).exp());
        let (lo, hi) = exp_bounds(&r(25, 1), 128).unwrap();
        encloses(&lo, &hi, 25f64.exp());
    }

    #[test]
    fn interval_ops() {
        let a = Interval::new(r(-1, 1), r(2, 1), 128);
        let sq = a.powi(2).unwrap();
        assert_eq!(sq.lo, r(0, 1));
        assert_eq!(sq.hi, r(4, 1));
        let cube = a.powi(3).unwrap();
        assert_eq!((cube.lo, cube.hi), (r(-1, 1), r(8, 1)));
        assert!(Interval::point(r(1, 1), 128).div(&a).is_err());
        let three = Interval::point(r(3, 1), 128);
        let half = Interval::point(r(1, 2), 128);
        let root = three.pow(&half).unwrap();
        assert!(root.lo < root.hi);
        assert!((root.midpoint_f64() - 3f64.sqrt()).abs() < 1e-15);
    }
}
