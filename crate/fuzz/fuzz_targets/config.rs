#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_core::config::ConfigMap;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(c) = ConfigMap::parse(s) {
            for k in c.keys() {
                assert!(c.get(k).is_some());
            }
        }
    }
});
