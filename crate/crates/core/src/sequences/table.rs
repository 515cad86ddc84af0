//! Tabulated sequences: CSV `n,q_n`, one row per index, values as decimal literals.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numeric::decimal::parse_decimal;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    values: BTreeMap<u64, BigRational>,
}

impl Table {
    pub fn from_values(values: impl IntoIterator<Item = (u64, BigRational)>) -> Result<Self> {
        let mut table = Table::default();
        for (n, v) in values {
            if n == 0 {
                return Err(Error::Table {
                    line: 0,
                    msg: "indices start at 1".into(),
                });
            }
            if table.values.insert(n, v).is_some() {
                return Err(Error::Table {
                    line: 0,
                    msg: format!("duplicate index {n}"),
                });
            }
        }
        Ok(table)
    }

    /// Parse CSV text. A leading `n,q_n` header is optional; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let row = raw.trim();
            if row.is_empty() {
                continue;
            }
            if values.is_empty() && row.replace(' ', "") == "n,q_n" {
                continue;
            }
            let err = |msg: String| Error::Table { line, msg };
            let (n, v) = row
                .split_once(',')
                .ok_or_else(|| err("expected `n,q_n`".into()))?;
            let n: u64 = n
                .trim()
                .parse()
                .map_err(|_| err(format!("bad index {:?}", n.trim())))?;
            if n == 0 {
                return Err(err("indices start at 1".into()));
            }
            let v = parse_decimal(v.trim()).map_err(|_| err(format!("bad value {:?}", v.trim())))?;
            if values.insert(n, v).is_some() {
                return Err(err(format!("duplicate index {n}")));
            }
        }
        if values.is_empty() {
            return Err(Error::Table {
                line: 0,
                msg: "no rows".into(),
            });
        }
        Ok(Table { values })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, n: u64) -> Result<&BigRational> {
        self.values.get(&n).ok_or(Error::MissingValue { n })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last_index(&self) -> Option<u64> {
        self.values.keys().next_back().copied()
    }

    /// CSV rendering accepted by [`Table::parse`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,q_n\n");
        for (n, v) in &self.values {
            out.push_str(&format!("{n},{}\n", decimal_text(v)));
        }
        out
    }
}

/// Exact decimal rendering of a rational with a terminating expansion, else
/// 40 significant fraction digits (truncated).
fn decimal_text(v: &BigRational) -> String {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, Zero};

    let neg = v.is_negative();
    let v = v.abs();
    let (int, mut rem) = v.numer().div_rem(v.denom());
    let mut s = if neg { format!("-{int}") } else { int.to_string() };
    if !rem.is_zero() {
        s.push('.');
        let ten = BigInt::from(10);
        for _ in 0..40 {
            rem *= &ten;
            let (d, r) = rem.div_rem(v.denom());
            s.push_str(&d.to_string());
            rem = r;
            if rem.is_zero() {
                break;
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rows() {
        let t = Table::parse("n,q_n\n1,0.5\n2, 3\n\n3,1.25\n").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.get(1).unwrap(), &BigRational::new(1.into(), 2.into()));
        assert!(matches!(t.get(4), Err(Error::MissingValue { n: 4 })));
        assert_eq!(t.last_index(), Some(3));
        assert_eq!(Table::parse(&t.to_csv()).unwrap(), t);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "n,q_n\n", "1;2", "0,1", "1,2\n1,3", "x,1", "1,abc", "1,2\nn,q_n"] {
            assert!(Table::parse(bad).is_err(), "{bad:?}");
        }
        match Table::parse("1,2\n2,oops") {
            Err(Error::Table { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
