#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_core::{build_tables, ConnPoly, DecodeOptions, DecoderKind, PacCodeSpec, ThresholdCombine};

// Input: one byte of options, then the rate profile bits and one signed
// byte per channel LLR for a length-16 code.
fuzz_target!(|data: &[u8]| {
    if data.len() < 1 + 2 + 16 {
        return;
    }
    let opts = data[0];
    let mask = u16::from_le_bytes([data[1], data[2]]);
    let profile: Vec<bool> = (0..16).map(|i| mask >> i & 1 == 1).collect();
    let llrs: Vec<f64> = data[3..19].iter().map(|&b| (b as i8) as f64 / 4.0).collect();
    let spec = PacCodeSpec::new(profile, ConnPoly::default_pac()).unwrap();
    let tables = build_tables(0.8, 4, Some(1e-3), ThresholdCombine::Min).unwrap();
    let cap = 1 + (opts & 7) as usize;
    let cycles = 1 + (opts >> 3) as usize * 4;
    for kind in [DecoderKind::Stack, DecoderKind::PstackdVar, DecoderKind::Fast] {
        let r = kind.decode(&spec, &tables, &llrs, &DecodeOptions::new(cap, cycles, kind.prunes())).unwrap();
        assert!(r.counters.cycles <= cycles);
        assert!(r.counters.stack_used <= cap);
        if let Some(d) = &r.d_hat {
            assert_eq!(d.len(), spec.k());
        }
    }
});
