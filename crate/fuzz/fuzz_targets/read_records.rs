#![no_main]
use libfuzzer_sys::fuzz_target;

use gapforge::report::{read_records, Format, RecordWriter, XiRow};

fuzz_target!(|data: &[u8]| {
    for format in [Format::Csv, Format::Jsonl] {
        let Ok(rows) = read_records::<XiRow, _>(data, format) else { continue };
        let mut buf = Vec::new();
        let mut w = RecordWriter::new(&mut buf, format);
        for row in &rows {
            w.write(row).expect("in-memory write");
        }
        w.finish().expect("in-memory flush");
        let again: Vec<XiRow> = read_records(&buf[..], format).expect("written rows reread");
        assert_eq!(again.len(), rows.len());
    }
});
