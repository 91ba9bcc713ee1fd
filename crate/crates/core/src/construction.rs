//! Bit-channel construction under the Gaussian approximation: per-channel
//! LLR means, cutoff-rate bias, capacity and varentropy estimates, and the
//! pruning thresholds derived from them.
//!
//! Every synthesized channel is treated as a BI-AWGN channel whose LLR is
//! Gaussian with mean `mu` and variance `2 mu`; its equivalent noise level
//! is `sigma_i = sqrt(2 / mu)`.

use std::f64::consts::{LN_2, PI};
use std::str::FromStr;

use statrs::function::erf::erfc;

use crate::error::{Error, Result};

const PHI_A: f64 = 0.4527;
const PHI_B: f64 = 0.86;
const PHI_C: f64 = 0.0218;
const PHI_SPLIT: f64 = 10.0;

fn ln_phi_low(x: f64) -> f64 {
    (-PHI_A * x.powf(PHI_B) + PHI_C).min(0.0)
}

fn ln_phi_high(x: f64) -> f64 {
    0.5 * (PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
}

/// Natural log of [`phi`], usable where `phi` itself underflows.
pub fn ln_phi(x: f64) -> Result<f64> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::OutOfRange { name: "phi argument", value: x });
    }
    Ok(if x == 0.0 {
        0.0
    } else if x < PHI_SPLIT {
        ln_phi_low(x)
    } else {
        ln_phi_high(x)
    })
}

/// Two-piece closed-form approximation of
/// `1 - E[tanh(u/2)]`, `u ~ N(x, 2x)`; `phi(0) = 1`.
pub fn phi(x: f64) -> Result<f64> {
    ln_phi(x).map(f64::exp)
}

/// Inverse of [`phi`] given `ln y`.
pub fn phi_inv_ln(ln_y: f64) -> Result<f64> {
    if ln_y.is_nan() || ln_y == f64::NEG_INFINITY {
        return Err(Error::OutOfRange { name: "phi_inv argument", value: ln_y.exp() });
    }
    if ln_y >= 0.0 {
        return Ok(0.0);
    }
    if ln_y > ln_phi_low(PHI_SPLIT) {
        return Ok(((PHI_C - ln_y) / PHI_A).powf(1.0 / PHI_B));
    }
    // the high piece is strictly decreasing on [10, inf)
    let mut lo = PHI_SPLIT;
    let mut hi = 2.0 * PHI_SPLIT;
    while ln_phi_high(hi) > ln_y {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo) > 1e-10 * lo {
        let mid = 0.5 * (lo + hi);
        if ln_phi_high(mid) > ln_y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverse of [`phi`] on `(0, 1]`.
pub fn phi_inv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(Error::OutOfRange { name: "phi_inv argument", value: y });
    }
    phi_inv_ln(y.ln())
}

/// Mean LLR of the degraded (check-node) channel.
pub fn ga_minus(mu: f64) -> Result<f64> {
    let lp = ln_phi(mu)?;
    let p = lp.exp();
    // 1 - (1 - p)^2 = p (2 - p)
    phi_inv_ln(lp + (2.0 - p).ln())
}

/// Mean LLR of the upgraded (variable-node) channel.
pub fn ga_plus(mu: f64) -> f64 {
    2.0 * mu
}

/// Per-bit-channel LLR means `mu_1..mu_N` for a length-`2^n` code over a
/// BI-AWGN channel of noise level `sigma_ch`, in natural index order.
pub fn ga_evolve(sigma_ch: f64, n: u32) -> Result<Vec<f64>> {
    if !(sigma_ch > 0.0) || sigma_ch.is_infinite() {
        return Err(Error::OutOfRange { name: "sigma", value: sigma_ch });
    }
    let mut means = vec![2.0 / (sigma_ch * sigma_ch)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * means.len());
        for &mu in &means {
            next.push(ga_minus(mu)?);
            next.push(ga_plus(mu));
        }
        means = next;
    }
    Ok(means)
}

/// Cutoff rate of a BI-AWGN channel, in bits.
pub fn r0_biawgn(sigma: f64) -> f64 {
    1.0 - (-1.0 / (2.0 * sigma * sigma)).exp().ln_1p() / LN_2
}

/// Closed-form capacity approximation, `t = 2 / sigma`.
pub fn j_approx(t: f64) -> f64 {
    (1.0 - (-0.3073 * t.powf(2.0 * 0.8935)).exp2()).powf(1.1064)
}

/// Companion term of the varentropy approximation.
pub fn k_approx(t: f64) -> f64 {
    (1.0 - (-0.96483 * t.powf(2.0 * 0.61746)).exp2()).powf(10.232)
}

/// Varentropy approximation in bits squared, `t = 2 / sigma`.
pub fn v_approx(t: f64) -> f64 {
    let j = j_approx(t);
    -(j - 1.0).powi(2) - k_approx(t) + 1.0
}

/// How the two threshold arms are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdCombine {
    /// The smaller (more permissive) arm.
    #[default]
    Min,
    /// The larger (stricter) arm.
    Max,
}

impl FromStr for ThresholdCombine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min" => Ok(Self::Min),
            "max" => Ok(Self::Max),
            other => Err(Error::Config(format!("unknown threshold combine {other:?}"))),
        }
    }
}

/// Pruning threshold in bits:
/// `min{ floor(-sqrt(var / p_th)) - 10, floor(log2 p_th) }`.
pub fn prune_threshold(var: f64, p_th: f64, combine: ThresholdCombine) -> Result<i64> {
    if !(p_th > 0.0 && p_th < 1.0) {
        return Err(Error::OutOfRange { name: "p_th", value: p_th });
    }
    if !(var >= 0.0) || var.is_infinite() {
        return Err(Error::OutOfRange { name: "varentropy", value: var });
    }
    let spread = (-(var / p_th).sqrt()).floor() as i64 - 10;
    let tail = p_th.log2().floor() as i64;
    Ok(match combine {
        ThresholdCombine::Min => spread.min(tail),
        ThresholdCombine::Max => spread.max(tail),
    })
}

/// Per-bit-channel parameters of one code length at one noise level.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionTables {
    pub n: u32,
    pub sigma_ch: f64,
    /// LLR means.
    pub mu: Vec<f64>,
    /// Equivalent BI-AWGN noise levels.
    pub sigma: Vec<f64>,
    /// `2 / sigma_i`.
    pub t: Vec<f64>,
    /// Metric bias (cutoff rates), bits.
    pub e0: Vec<f64>,
    /// Capacities, bits.
    pub capacity: Vec<f64>,
    /// Varentropies, bits squared.
    pub varentropy: Vec<f64>,
    /// Pruning thresholds, bits.
    pub gamma_t: Vec<f64>,
}

impl ConstructionTables {
    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// CSV with header `index,mu,sigma_i,E0,I,Var,gamma_T`; indices are
    /// one-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,mu,sigma_i,E0,I,Var,gamma_T\n");
        for i in 0..self.len() {
            out.push_str(&format!(
                "{},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{}\n",
                i + 1,
                self.mu[i],
                self.sigma[i],
                self.e0[i],
                self.capacity[i],
                self.varentropy[i],
                self.gamma_t[i]
            ));
        }
        out
    }
}

/// Builds the bias, capacity, varentropy and threshold vectors for a
/// length-`2^n` code at channel noise level `sigma_ch`. Without `p_th`
/// every threshold is `-inf`.
pub fn build_tables(
    sigma_ch: f64,
    n: u32,
    p_th: Option<f64>,
    combine: ThresholdCombine,
) -> Result<ConstructionTables> {
    let mu = ga_evolve(sigma_ch, n)?;
    let sigma: Vec<f64> = mu.iter().map(|&m| (2.0 / m).sqrt()).collect();
    let t: Vec<f64> = mu.iter().map(|&m| (2.0 * m).sqrt()).collect();
    let e0 = sigma.iter().map(|&s| r0_biawgn(s)).collect();
    let capacity = t.iter().map(|&t| j_approx(t)).collect();
    let varentropy: Vec<f64> = t.iter().map(|&t| v_approx(t).max(0.0)).collect();
    let gamma_t = match p_th {
        Some(p) => varentropy
            .iter()
            .map(|&v| prune_threshold(v, p, combine).map(|g| g as f64))
            .collect::<Result<Vec<_>>>()?,
        None => vec![f64::NEG_INFINITY; varentropy.len()],
    };
    Ok(ConstructionTables {
        n,
        sigma_ch,
        mu,
        sigma,
        t,
        e0,
        capacity,
        varentropy,
        gamma_t,
    })
}

/// Capacity, cutoff rate and varentropy of a binary-input channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub capacity: f64,
    pub cutoff_rate: f64,
    pub varentropy: f64,
}

/// Probability that `N(mean, sigma^2)` falls in `[lo, hi)`, computed on
/// the tail side that avoids cancellation.
fn gaussian_mass(lo: f64, hi: f64, mean: f64, sigma: f64) -> f64 {
    let z = |x: f64| (x - mean) / (sigma * std::f64::consts::SQRT_2);
    let upper = |x: f64| if x == f64::INFINITY { 0.0 } else { 0.5 * erfc(z(x)) };
    let lower = |x: f64| if x == f64::NEG_INFINITY { 0.0 } else { 0.5 * erfc(-z(x)) };
    if lo >= mean {
        upper(lo) - upper(hi)
    } else {
        lower(hi) - lower(lo)
    }
}

/// Evaluates the discrete-channel definitions on the BI-AWGN channel with
/// its output quantized into `bins` equal intervals spanning
/// `[-1 - 8 sigma, 1 + 8 sigma]`; the two tails fold into the end bins.
pub fn dmc_quantized_params(sigma: f64, bins: usize) -> Result<ChannelParams> {
    if !(sigma > 0.0) || sigma.is_infinite() {
        return Err(Error::OutOfRange { name: "sigma", value: sigma });
    }
    if bins < 64 {
        return Err(Error::OutOfRange { name: "bins", value: bins as f64 });
    }
    let lo = -1.0 - 8.0 * sigma;
    let width = (2.0 + 16.0 * sigma) / bins as f64;
    let edge = |b: usize| -> f64 {
        if b == 0 {
            f64::NEG_INFINITY
        } else if b == bins {
            f64::INFINITY
        } else {
            lo + b as f64 * width
        }
    };
    let mut capacity = 0.0;
    let mut second = 0.0;
    let mut bhattacharyya = 0.0;
    for b in 0..bins {
        let (a, c) = (edge(b), edge(b + 1));
        // input 0 is sent as +1
        let w0 = gaussian_mass(a, c, 1.0, sigma);
        let w1 = gaussian_mass(a, c, -1.0, sigma);
        let py = 0.5 * (w0 + w1);
        bhattacharyya += (w0 * w1).sqrt();
        for w in [w0, w1] {
            if w > 0.0 {
                let info = (w / py).log2();
                capacity += 0.5 * w * info;
                second += 0.5 * w * info * info;
            }
        }
    }
    Ok(ChannelParams {
        capacity,
        cutoff_rate: 1.0 - bhattacharyya.ln_1p() / LN_2,
        varentropy: (second - capacity * capacity).max(0.0),
    })
}
