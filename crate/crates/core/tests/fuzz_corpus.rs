//! Replays the checked-in fuzz corpus through the same properties the fuzz
//! targets assert, so the seeds are exercised on stable toolchains too.

use std::fs;
use std::path::PathBuf;

use gapforge::numeric::decimal::{parse_count, parse_decimal};
use gapforge::report::{read_records, Format, RecordWriter, XiRow};
use gapforge::sequences::expr::parse_sequence_expr;
use gapforge::sequences::Table;
use gapforge::Primes;

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut seeds: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            (path.display().to_string(), fs::read(&path).unwrap())
        })
        .collect();
    seeds.sort();
    assert!(!seeds.is_empty(), "no seeds in {}", dir.display());
    seeds
}

#[test]
fn sequence_expressions() {
    let primes = Primes::new();
    let mut accepted = 0;
    for (name, data) in corpus("parse_sequence_expr") {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        let Ok(expr) = parse_sequence_expr(text) else { continue };
        accepted += 1;
        let printed = expr.to_string();
        assert_eq!(parse_sequence_expr(&printed).unwrap(), expr, "{name}");
        if !expr.uses_primes() {
            for n in 1..4 {
                let _ = expr.eval(n, &primes);
            }
        }
    }
    assert!(accepted >= 10);
}

#[test]
fn tables() {
    let mut accepted = 0;
    for (name, data) in corpus("parse_table") {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        if let Ok(table) = Table::parse(text) {
            accepted += 1;
            assert_eq!(Table::parse(&table.to_csv()).unwrap(), table, "{name}");
        }
    }
    assert_eq!(accepted, 3);
}

#[test]
fn numbers() {
    for (name, data) in corpus("parse_number") {
        let Ok(text) = std::str::from_utf8(&data) else { continue };
        let decimal = parse_decimal(text);
        if let Ok(count) = parse_count(text) {
            let value = decimal.unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(value.is_integer(), "{name}");
            assert_eq!(value.to_integer(), count.into(), "{name}");
        }
    }
}

#[test]
fn records() {
    let mut accepted = 0;
    for (name, data) in corpus("read_records") {
        for format in [Format::Csv, Format::Jsonl] {
            let Ok(rows) = read_records::<XiRow, _>(&data[..], format) else { continue };
            accepted += 1;
            let mut buf = Vec::new();
            let mut w = RecordWriter::new(&mut buf, format);
            for row in &rows {
                w.write(row).unwrap();
            }
            w.finish().unwrap();
            let again: Vec<XiRow> = read_records(&buf[..], format).unwrap();
            assert_eq!(again.len(), rows.len(), "{name}");
        }
    }
    assert!(accepted >= 3);
}
