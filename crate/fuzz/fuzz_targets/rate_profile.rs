#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_core::code::{calculate_s_values, format_rate_profile, parse_rate_profile};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = parse_rate_profile(s) {
            assert!(p.len().is_power_of_two());
            assert_eq!(parse_rate_profile(&format_rate_profile(&p)).unwrap(), p);
            let k = p.iter().filter(|&&b| b).count();
            assert_eq!(calculate_s_values(&p).level(0), &[k][..]);
        }
    }
});
