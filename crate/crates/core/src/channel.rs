//! BPSK over AWGN and channel-LLR I/O.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Noise standard deviation for unit-energy BPSK at the given `Eb/N0`.
pub fn ebn0_to_sigma(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::OutOfRange { name: "rate", value: rate });
    }
    if !ebn0_db.is_finite() {
        return Err(Error::OutOfRange { name: "Eb/N0", value: ebn0_db });
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt())
}

/// Maps bit `x` to `1 - 2x`, adds `N(0, sigma^2)` noise and returns the
/// channel LLRs `2y / sigma^2`.
pub fn awgn_transmit<R: Rng + ?Sized>(codeword: &[u8], sigma: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::OutOfRange { name: "sigma", value: sigma });
    }
    let scale = 2.0 / (sigma * sigma);
    codeword
        .iter()
        .map(|&x| {
            if x > 1 {
                return Err(Error::OutOfRange { name: "codeword bit", value: x as f64 });
            }
            let z: f64 = rng.sample(StandardNormal);
            let y = 1.0 - 2.0 * x as f64 + sigma * z;
            Ok(scale * y)
        })
        .collect()
}

/// Parses channel LLRs written one per line. Blank lines and lines starting
/// with `#` are skipped; NaN is rejected.
pub fn parse_llrs(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let x: f64 = line.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            msg: format!("not a number: {line:?}"),
        })?;
        if x.is_nan() {
            return Err(Error::Parse {
                line: idx + 1,
                msg: "NaN is not a valid LLR".into(),
            });
        }
        out.push(x);
    }
    Ok(out)
}
