//! Rate-one convolutional precoder `v -> u` and its inverse.
//!
//! Polynomials are held as coefficient lists `c_0..c_m` in ascending powers,
//! so `t^10 + t^9 + t^7 + t^3 + 1` is written `10010001011`.

use std::fmt;
use std::str::FromStr;

use crate::code::PacCodeSpec;
use crate::error::{Error, Result};
use crate::polar::polar_transform;

/// Coefficients of `t^10 + t^9 + t^7 + t^3 + 1`, `c_0` first.
pub const DEFAULT_POLY: &str = "10010001011";

const MAX_DEGREE: usize = 64;

/// Connection polynomial with `c_0 = c_m = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConnPoly {
    coeffs: Vec<bool>,
    // bit j-1 holds c_j
    taps: u64,
}

impl ConnPoly {
    pub fn new(coeffs: Vec<bool>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("no coefficients".into()));
        }
        if !coeffs[0] {
            return Err(Error::InvalidPolynomial("c_0 must be 1".into()));
        }
        if !coeffs[coeffs.len() - 1] {
            return Err(Error::InvalidPolynomial("leading coefficient must be 1".into()));
        }
        if coeffs.len() - 1 > MAX_DEGREE {
            return Err(Error::InvalidPolynomial(format!(
                "degree {} exceeds {MAX_DEGREE}",
                coeffs.len() - 1
            )));
        }
        let taps = coeffs[1..]
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &c)| acc | ((c as u64) << j));
        Ok(Self { coeffs, taps })
    }

    /// `c(t) = 1`: no precoding, the PAC code reduces to a polar code.
    pub fn identity() -> Self {
        Self::new(vec![true]).unwrap()
    }

    pub fn default_pac() -> Self {
        DEFAULT_POLY.parse().unwrap()
    }

    /// Degree `m`; the register holds `m` bits.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[bool] {
        &self.coeffs
    }

    fn feedback(&self, state: &ConvState) -> u8 {
        ((state.reg & self.taps).count_ones() & 1) as u8
    }

    /// One encoder step: returns `u` and advances the register.
    pub fn step(&self, v: u8, state: &mut ConvState) -> u8 {
        let u = (v & 1) ^ self.feedback(state);
        state.push(v & 1);
        u
    }

    /// Inverse step: recovers `v` from `u` and advances the register.
    pub fn inv_step(&self, u: u8, state: &mut ConvState) -> u8 {
        let v = (u & 1) ^ self.feedback(state);
        state.push(v);
        v
    }

    /// Encodes a whole sequence from the all-zero state.
    pub fn encode(&self, v: &[u8]) -> Vec<u8> {
        let mut st = ConvState::zero(self.degree());
        v.iter().map(|&b| self.step(b, &mut st)).collect()
    }

    /// Inverts [`ConnPoly::encode`].
    pub fn decode(&self, u: &[u8]) -> Vec<u8> {
        let mut st = ConvState::zero(self.degree());
        u.iter().map(|&b| self.inv_step(b, &mut st)).collect()
    }
}

impl FromStr for ConnPoly {
    type Err = Error;

    /// Accepts a binary coefficient string (`c_0` first) or a `0x`-prefixed
    /// hex integer whose bit `j` is `c_j`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            let hex = hex.trim_start_matches('0');
            if hex.is_empty() {
                return Err(Error::InvalidPolynomial("zero polynomial".into()));
            }
            if hex.len() > 17 {
                return Err(Error::InvalidPolynomial("too many hex digits".into()));
            }
            let value = u128::from_str_radix(hex, 16)
                .map_err(|e| Error::InvalidPolynomial(e.to_string()))?;
            let bits = 128 - value.leading_zeros() as usize;
            let coeffs = (0..bits).map(|j| (value >> j) & 1 == 1).collect();
            return Self::new(coeffs);
        }
        if s.is_empty() {
            return Err(Error::InvalidPolynomial("empty".into()));
        }
        let coeffs = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidPolynomial(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl fmt::Display for ConnPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.coeffs {
            f.write_str(if c { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Shift-register contents; bit `j` is the input seen `j + 1` steps ago.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConvState {
    reg: u64,
    len: u8,
}

impl ConvState {
    pub fn zero(len: usize) -> Self {
        debug_assert!(len <= MAX_DEGREE);
        Self {
            reg: 0,
            len: len as u8,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, j: usize) -> u8 {
        ((self.reg >> j) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len()).map(|j| self.bit(j)).collect()
    }

    fn mask(&self) -> u64 {
        if self.len as usize >= 64 {
            u64::MAX
        } else {
            (1u64 << self.len) - 1
        }
    }

    fn push(&mut self, v: u8) {
        self.reg = ((self.reg << 1) | v as u64) & self.mask();
    }
}

/// Pure form of [`ConnPoly::step`].
pub fn conv_step(v: u8, state: ConvState, poly: &ConnPoly) -> (u8, ConvState) {
    let mut st = state;
    let u = poly.step(v, &mut st);
    (u, st)
}

/// Pure form of [`ConnPoly::inv_step`].
pub fn conv_inv_step(u: u8, state: ConvState, poly: &ConnPoly) -> (u8, ConvState) {
    let mut st = state;
    let v = poly.inv_step(u, &mut st);
    (v, st)
}

/// Encodes `data` into a codeword: embed on the rate profile, precode,
/// polar transform.
pub fn pac_encode(data: &[u8], spec: &PacCodeSpec) -> Result<Vec<u8>> {
    let v = spec.embed(data)?;
    let mut x = spec.poly().encode(&v);
    polar_transform(&mut x)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_default_poly() {
        let p = ConnPoly::default_pac();
        assert_eq!(p.degree(), 10);
        assert_eq!(p.to_string(), DEFAULT_POLY);
        let hex: ConnPoly = "0x689".parse().unwrap();
        assert_eq!(hex, p);
    }

    #[test]
    fn rejects_bad_polys() {
        for s in ["", "0", "011", "10", "12", "0x0", "0x2", "0xzz"] {
            assert!(s.parse::<ConnPoly>().is_err(), "{s}");
        }
    }

    #[test]
    fn step_examples() {
        let p = ConnPoly::default_pac();
        let z = ConvState::zero(10);
        assert_eq!(conv_step(0, z, &p), (0, z));
        let (u, st) = conv_step(1, z, &p);
        assert_eq!(u, 1);
        assert_eq!(st.bits(), vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(conv_inv_step(0, z, &p), (0, z));
    }

    #[test]
    fn impulse_response_is_the_polynomial() {
        let p = ConnPoly::default_pac();
        let mut v = vec![0u8; 16];
        v[0] = 1;
        let u = p.encode(&v);
        assert_eq!(&u[..11], &[1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1]);
        assert!(u[11..].iter().all(|&b| b == 0));
        assert_eq!(p.decode(&u), v);
    }

    #[test]
    fn encode_small() {
        let spec = PacCodeSpec::new(vec![true, true], ConnPoly::identity()).unwrap();
        assert_eq!(pac_encode(&[0, 1], &spec).unwrap(), vec![1, 1]);
        let spec = PacCodeSpec::reed_muller(4, 11, ConnPoly::default_pac()).unwrap();
        assert_eq!(pac_encode(&[0; 11], &spec).unwrap(), vec![0; 16]);
        assert!(pac_encode(&[0; 10], &spec).is_err());
    }

    proptest! {
        #[test]
        fn step_inverse(v in 0u8..2, reg in any::<u16>()) {
            let p = ConnPoly::default_pac();
            let mut st = ConvState::zero(10);
            for j in 0..10 { st.push(((reg >> j) & 1) as u8); }
            let (u, s1) = conv_step(v, st, &p);
            let (back, s2) = conv_inv_step(u, st, &p);
            prop_assert_eq!(back, v);
            prop_assert_eq!(s1, s2);
        }

        #[test]
        fn precoder_bijection(v in proptest::collection::vec(0u8..2, 64), coeffs in proptest::collection::vec(any::<bool>(), 0..12)) {
            let mut c = vec![true];
            c.extend(coeffs);
            c.push(true);
            let p = ConnPoly::new(c).unwrap();
            prop_assert_eq!(p.decode(&p.encode(&v)), v);
        }

        #[test]
        fn encoder_linear(a in proptest::collection::vec(0u8..2, 57), b in proptest::collection::vec(0u8..2, 57)) {
            let spec = PacCodeSpec::reed_muller(6, 57, ConnPoly::default_pac()).unwrap();
            let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let xa = pac_encode(&a, &spec).unwrap();
            let xb = pac_encode(&b, &spec).unwrap();
            let xs = pac_encode(&sum, &spec).unwrap();
            let expect: Vec<u8> = xa.iter().zip(&xb).map(|(x, y)| x ^ y).collect();
            prop_assert_eq!(xs, expect);
        }
    }
}
