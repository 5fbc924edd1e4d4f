#![no_main]

use libfuzzer_sys::fuzz_target;
use ruledgeo::workbench::{read_csv, write_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(table) = read_csv(data) else {
        return;
    };
    let mut out = Vec::new();
    write_csv(&table, &mut out).expect("write to memory");
    let again = read_csv(out.as_slice()).expect("written table reads back");
    assert_eq!(table, again);
});
