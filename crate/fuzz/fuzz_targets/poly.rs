#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_core::ConnPoly;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = s.parse::<ConnPoly>() {
            // display form parses back to the same polynomial
            let again: ConnPoly = p.to_string().parse().unwrap();
            assert_eq!(again, p);
            let v = [1u8, 0, 1, 1, 0, 0, 1, 0];
            assert_eq!(p.decode(&p.encode(&v)), v);
        }
    }
});
