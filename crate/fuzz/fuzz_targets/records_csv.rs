#![no_main]

use densest_core::experiments::sweep::{read_records_csv, write_records_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_records_csv(data) else { return };
    let mut out = Vec::new();
    write_records_csv(&records, &mut out).unwrap();
    assert_eq!(read_records_csv(out.as_slice()).unwrap().len(), records.len());
});
