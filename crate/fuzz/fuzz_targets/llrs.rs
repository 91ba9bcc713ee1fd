#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_core::channel::parse_llrs;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(v) = parse_llrs(s) {
            assert!(v.iter().all(|x| !x.is_nan()));
        }
    }
});
