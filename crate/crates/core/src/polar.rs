//! Polar transform, LLR combining rules and the incremental
//! successive-cancellation LLR update with special-node early exit.

use std::ops::Range;

use crate::code::{classify_chunk, ChunkPolicy, NodeType, SegmentCounts};
use crate::error::{Error, Result};

/// Saturation bound for every LLR (natural-log units).
pub const LLR_MAX: f64 = 40.0;

#[inline]
pub fn clamp_llr(x: f64) -> f64 {
    x.clamp(-LLR_MAX, LLR_MAX)
}

/// In-place `x = u F^{⊗n}` over GF(2), `F = [[1,0],[1,1]]`.
pub fn polar_transform(bits: &mut [u8]) -> Result<()> {
    if !bits.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(bits.len()));
    }
    transform_pow2(bits);
    Ok(())
}

/// [`polar_transform`] into a new vector.
pub fn polar_encode(bits: &[u8]) -> Result<Vec<u8>> {
    let mut out = bits.to_vec();
    polar_transform(&mut out)?;
    Ok(out)
}

pub(crate) fn transform_pow2(bits: &mut [u8]) {
    let len = bits.len();
    let mut half = 1;
    while half < len {
        for block in bits.chunks_mut(2 * half) {
            let (l, r) = block.split_at_mut(half);
            for (a, b) in l.iter_mut().zip(r.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// Check-node combine `2 atanh(tanh(a/2) tanh(b/2))`, evaluated as
/// min-sum plus the two log1p corrections.
#[inline]
pub fn f_combine(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let min = a.abs().min(b.abs());
    let corr = (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p();
    clamp_llr(sign * min + corr)
}

/// Variable-node combine `a (-1)^u + b`.
#[inline]
pub fn g_combine(a: f64, b: f64, u: u8) -> f64 {
    clamp_llr(if u & 1 == 0 { b + a } else { b - a })
}

/// Stage at which the next LLR refresh starts after `i` decided bits.
///
/// `i` must be nonzero; the root start is handled by the caller.
#[inline]
pub fn ffs(i: usize) -> u32 {
    debug_assert!(i > 0);
    i.trailing_zeros()
}

/// Location of the stage-`s` block inside an intermediate LLR buffer of a
/// length-`len` code: offset `len - 2^{s+1}`, length `2^s`.
#[inline]
pub fn stage_range(len: usize, s: u32) -> Range<usize> {
    let w = 1usize << s;
    len - 2 * w..len - w
}

/// Intermediate LLRs of one decoding path, stage-major (`N - 1` values).
#[derive(Debug, Clone, PartialEq)]
pub struct LlrBuffer {
    values: Vec<f64>,
}

impl LlrBuffer {
    pub fn new(code_len: usize) -> Self {
        Self {
            values: vec![0.0; code_len.saturating_sub(1)],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Code length this buffer serves.
    pub fn code_len(&self) -> usize {
        self.values.len() + 1
    }

    pub fn stage(&self, s: u32) -> &[f64] {
        &self.values[stage_range(self.code_len(), s)]
    }
}

/// Outcome of one [`update_llr`] call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateResult {
    /// Buffer range of the block written last (the detected node's LLRs).
    pub llr_range: Range<usize>,
    pub node_type: NodeType,
    /// Leaf indices covered by the detected node.
    pub chunk: Range<usize>,
    /// Number of block-level f/g applications performed.
    pub fg_ops: usize,
}

/// Refreshes the intermediate LLRs of a path whose first `i` precoder
/// outputs `u[..i]` are fixed, descending until a terminal chunk is found.
///
/// Starts at the root with `f` when `i == 0`, otherwise at stage `ffs(i)`
/// with one `g` whose partial sums are the polar transform of the trailing
/// `2^s` decided bits; every lower stage applies `f`.
pub fn update_llr(
    channel_llrs: &[f64],
    buffer: &mut LlrBuffer,
    i: usize,
    u: &[u8],
    s_values: &SegmentCounts,
    policy: &ChunkPolicy,
) -> UpdateResult {
    let len = channel_llrs.len();
    debug_assert!(len.is_power_of_two() && len >= 2);
    debug_assert_eq!(buffer.code_len(), len);
    debug_assert!(i < len);
    let n = len.trailing_zeros();
    let (mut s, mut use_f) = if i == 0 { (n - 1, true) } else { (ffs(i), false) };
    let mut fg_ops = 0;
    let mut partial = Vec::new();
    loop {
        let w = 1usize << s;
        let out_range = stage_range(len, s);
        if !use_f {
            partial.clear();
            partial.extend_from_slice(&u[i - w..i]);
            transform_pow2(&mut partial);
        }
        let values = buffer.as_mut_slice();
        let (head, tail) = values.split_at_mut(out_range.start);
        let out = &mut tail[..w];
        let parent: &[f64] = if s == n - 1 {
            channel_llrs
        } else {
            &head[len - 4 * w..len - 2 * w]
        };
        let (left, right) = parent.split_at(w);
        if use_f {
            for ((o, &a), &b) in out.iter_mut().zip(left).zip(right) {
                *o = f_combine(a, b);
            }
        } else {
            for (((o, &a), &b), &p) in out.iter_mut().zip(left).zip(right).zip(&partial) {
                *o = g_combine(a, b, p);
            }
        }
        fg_ops += 1;
        use_f = true;

        let level = (n - s) as usize;
        let chunk_index = i / w;
        let node_type = classify_chunk(s_values, level, chunk_index, w, policy);
        if node_type.is_terminal() {
            return UpdateResult {
                llr_range: out_range,
                node_type,
                chunk: chunk_index * w..(chunk_index + 1) * w,
                fg_ops,
            };
        }
        // a size-one chunk is always terminal
        s -= 1;
    }
}
