#![no_main]

use hps_core::dataset::{read_table, write_table};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(ds) = read_table(data) {
        let mut out = Vec::new();
        write_table(&ds, &mut out).expect("write to memory");
        let _ = read_table(out.as_slice());
    }
});
