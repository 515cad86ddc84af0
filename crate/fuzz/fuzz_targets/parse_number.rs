#![no_main]
use libfuzzer_sys::fuzz_target;

use gapforge::numeric::decimal::{parse_count, parse_decimal};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let decimal = parse_decimal(text);
    if let Ok(count) = parse_count(text) {
        let value = decimal.expect("a count is also a decimal");
        assert!(value.is_integer());
        assert_eq!(value.to_integer(), count.into());
    }
});
