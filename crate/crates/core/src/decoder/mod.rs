//! Stack decoders for PAC codes.
//!
//! [`stack_decode`] extends the best path one bit per cycle; with pruning
//! enabled, an information-bit branch whose bit metric does not exceed the
//! threshold of its bit channel is dropped. [`fast_stack_decode`] extends the
//! best path by a whole special node per cycle.

mod fast;
mod handlers;
mod stack;

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

pub use fast::fast_stack_decode;
pub use handlers::{
    handle_rate0, handle_rate1, handle_rep, handle_type_iv, ChunkContext, ChunkChild, Rate1Stats,
};
pub use stack::stack_decode;

use crate::code::{ChunkPolicy, PacCodeSpec};
use crate::construction::ConstructionTables;
use crate::depq::BoundedDepq;
use crate::error::{Error, Result};
use crate::polar::{clamp_llr, LlrBuffer};
use crate::precoder::ConvState;

/// Per-bit metric in bits: `1 - log2(1 + e^{-llr (-1)^bit}) - bias`.
#[inline]
pub fn bit_metric(llr: f64, bit: u8, bias: f64) -> f64 {
    let z = if bit & 1 == 0 { clamp_llr(llr) } else { -clamp_llr(llr) };
    // log(1 + e^{-z})
    let softplus = (-z).max(0.0) + (-z.abs()).exp().ln_1p();
    1.0 - softplus / LN_2 - bias
}

/// One stack element's satellite data; its metric is the store key.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEntry {
    /// Decided precoder inputs.
    pub v: Vec<u8>,
    pub st: ConvState,
    pub llr: LlrBuffer,
    /// Precoder outputs, meaningful up to `v.len()`.
    pub u: Vec<u8>,
}

impl PathEntry {
    pub fn root(spec: &PacCodeSpec) -> Self {
        Self {
            v: Vec::with_capacity(spec.len()),
            st: ConvState::zero(spec.poly().degree()),
            llr: LlrBuffer::new(spec.len()),
            u: vec![0; spec.len()],
        }
    }

    /// Allocation-free stand-in used when moving a path out of a slot.
    pub(crate) fn placeholder() -> Self {
        Self {
            v: Vec::new(),
            st: ConvState::zero(0),
            llr: LlrBuffer::new(0),
            u: Vec::new(),
        }
    }
}

pub type PathStore = BoundedDepq<PathEntry>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Store capacity (S-Size).
    pub stack_capacity: usize,
    pub max_cycles: usize,
    /// Apply the pruning thresholds of the construction tables.
    pub prune: bool,
    /// Special-node policy of the fast decoder.
    pub policy: ChunkPolicy,
}

impl DecodeOptions {
    pub fn new(stack_capacity: usize, max_cycles: usize, prune: bool) -> Self {
        Self {
            stack_capacity,
            max_cycles,
            prune,
            policy: ChunkPolicy::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.stack_capacity == 0 {
            return Err(Error::ZeroCapacity);
        }
        if self.max_cycles == 0 {
            return Err(Error::Config("max_cycles must be at least one".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecodeStatus {
    Decoded,
    CycleLimit,
    StackExhausted,
}

impl fmt::Display for DecodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecodeStatus::Decoded => "decoded",
            DecodeStatus::CycleLimit => "cycle_limit",
            DecodeStatus::StackExhausted => "stack_exhausted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counters {
    /// Main-loop iterations.
    pub cycles: usize,
    /// Store occupancy at termination.
    pub stack_used: usize,
    /// Block-level f/g applications.
    pub fg_ops: usize,
    /// Paths inserted into the main store.
    pub total_insertions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Recovered precoder input: the decoded path, or on cycle exhaustion the
    /// best partial path. Absent when the store ran empty.
    pub v_hat: Option<Vec<u8>>,
    /// Information bits of `v_hat` (only when decoded).
    pub d_hat: Option<Vec<u8>>,
    pub status: DecodeStatus,
    /// Metric of the returned path.
    pub metric: Option<f64>,
    pub counters: Counters,
}

impl DecodeResult {
    pub fn is_decoded(&self) -> bool {
        self.status == DecodeStatus::Decoded
    }
}

/// Decoder flavour of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    /// Conventional stack decoding, no pruning.
    Stack,
    /// Bit-by-bit stack decoding with variance-based pruning.
    PstackdVar,
    /// Special-node stack decoding with pruning.
    Fast,
}

impl DecoderKind {
    pub fn prunes(self) -> bool {
        !matches!(self, DecoderKind::Stack)
    }

    pub fn decode(
        self,
        spec: &PacCodeSpec,
        tables: &ConstructionTables,
        channel_llrs: &[f64],
        options: &DecodeOptions,
    ) -> Result<DecodeResult> {
        match self {
            DecoderKind::Stack | DecoderKind::PstackdVar => {
                stack_decode(spec, tables, channel_llrs, options)
            }
            DecoderKind::Fast => fast_stack_decode(spec, tables, channel_llrs, options),
        }
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "stack" => Ok(Self::Stack),
            "pstackd_var" | "pstackd" => Ok(Self::PstackdVar),
            "fast" => Ok(Self::Fast),
            other => Err(Error::Config(format!("unknown decoder {other:?}"))),
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderKind::Stack => "stack",
            DecoderKind::PstackdVar => "pstackd_var",
            DecoderKind::Fast => "fast",
        })
    }
}

/// Shared input checks; returns clamped channel LLRs and the active
/// threshold vector.
pub(crate) fn prepare(
    spec: &PacCodeSpec,
    tables: &ConstructionTables,
    channel_llrs: &[f64],
    options: &DecodeOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    options.validate()?;
    let len = spec.len();
    if channel_llrs.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: channel_llrs.len(),
        });
    }
    if tables.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: tables.len(),
        });
    }
    if let Some(bad) = channel_llrs.iter().find(|x| x.is_nan()) {
        return Err(Error::OutOfRange {
            name: "channel llr",
            value: *bad,
        });
    }
    let llrs = channel_llrs.iter().map(|&x| clamp_llr(x)).collect();
    let gamma = if options.prune {
        tables.gamma_t.clone()
    } else {
        vec![f64::NEG_INFINITY; len]
    };
    Ok((llrs, gamma))
}

pub(crate) fn finish(
    spec: &PacCodeSpec,
    store: &PathStore,
    status: DecodeStatus,
    mut counters: Counters,
) -> DecodeResult {
    counters.stack_used = store.len();
    let top = store.peek_max();
    let v_hat = top.map(|(_, p)| p.v.clone());
    let d_hat = match (status, &v_hat) {
        (DecodeStatus::Decoded, Some(v)) => Some(spec.extract(v)),
        _ => None,
    };
    DecodeResult {
        v_hat,
        d_hat,
        status,
        metric: top.map(|(m, _)| m),
        counters,
    }
}
