//! Exact parsing of decimal literals such as `12`, `0.125`, `-3.5` or `1e8`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest accepted decimal exponent magnitude.
const MAX_EXPONENT: i64 = 4096;

/// Parse `[+-]digits[.digits][(e|E)[+-]digits]` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::Number(text.to_string());
    let s = text.trim();
    let (negative, s) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut exp: i64 = match exponent {
        None => 0,
        Some(e) => {
            let digits = e.strip_prefix(['+', '-']).unwrap_or(e);
            if digits.is_empty() || digits.len() > 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            e.parse::<i64>().map_err(|_| bad())?
        }
    };
    exp -= frac_part.len() as i64;
    if exp.abs() > MAX_EXPONENT + 1024 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value: BigInt = digits.parse().map_err(|_| bad())?;
    if negative {
        value = -value;
    }
    if value.is_zero() {
        return Ok(BigRational::zero());
    }
    if exp.abs() > MAX_EXPONENT {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, exp.unsigned_abs() as usize);
    Ok(if exp >= 0 {
        BigRational::from_integer(value * scale)
    } else {
        BigRational::new(value, scale)
    })
}

/// A non-negative integer count, accepting scientific notation (`1e8`).
pub fn parse_count(text: &str) -> Result<u64> {
    let value = parse_decimal(text)?;
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Number(text.to_string()));
    }
    value
        .numer()
        .to_u64()
        .ok_or_else(|| Error::Number(text.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn literals() {
        assert_eq!(parse_decimal("12").unwrap(), r(12, 1));
        assert_eq!(parse_decimal("0.125").unwrap(), r(1, 8));
        assert_eq!(parse_decimal(".5").unwrap(), r(1, 2));
        assert_eq!(parse_decimal("5.").unwrap(), r(5, 1));
        assert_eq!(parse_decimal("-3.5").unwrap(), r(-7, 2));
        assert_eq!(parse_decimal("2.5e-1").unwrap(), r(1, 4));
        assert_eq!(parse_decimal("1E3").unwrap(), r(1000, 1));
        for bad in ["", ".", "e5", "1e", "1.2.3", "abc", "1e+", "--1", "1e9999999", " 1 2"] {
            assert!(parse_decimal(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e8").unwrap(), 100_000_000);
        assert_eq!(parse_count("100000").unwrap(), 100_000);
        assert_eq!(parse_count("1.5e1").unwrap(), 15);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-1").is_err());
        assert!(parse_count("1e20").is_err());
    }
}
