#![no_main]
use libfuzzer_sys::fuzz_target;

use gapforge::sequences::Table;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = Table::parse(text) {
        // decimal inputs always terminate, so the rendering is exact
        let again = Table::parse(&table.to_csv()).expect("rendered table reparses");
        assert_eq!(again, table);
    }
});
