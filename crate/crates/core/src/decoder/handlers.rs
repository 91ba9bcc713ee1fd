//! Per-node extension rules of the fast stack decoder.
//!
//! Each handler receives the node-level LLRs of the detected chunk and
//! returns the admitted children in insertion order. Chunk metrics are
//! evaluated at the node: the candidate's precoder outputs over the chunk
//! are polar transformed and scored against the node LLRs, with the bias of
//! the corresponding leaf.

use std::ops::Range;

use super::bit_metric;
use crate::depq::BoundedDepq;
use crate::polar::transform_pow2;
use crate::precoder::{ConnPoly, ConvState};

/// Inputs shared by all handlers for one detected chunk.
#[derive(Debug, Clone)]
pub struct ChunkContext<'a> {
    pub poly: &'a ConnPoly,
    pub rate_profile: &'a [bool],
    /// Bias per leaf (whole code).
    pub e0: &'a [f64],
    /// Pruning threshold per leaf; `-inf` disables pruning.
    pub gamma: &'a [f64],
    /// Leaf range of the chunk.
    pub chunk: Range<usize>,
    /// Node-level LLRs, one per chunk leaf.
    pub r: &'a [f64],
    /// Capacity of the rate-1 frontier and completion stores.
    pub capacity: usize,
}

impl ChunkContext<'_> {
    fn size(&self) -> usize {
        self.chunk.len()
    }

    fn info_offsets(&self) -> Vec<usize> {
        self.rate_profile[self.chunk.clone()]
            .iter()
            .enumerate()
            .filter_map(|(k, &b)| b.then_some(k))
            .collect()
    }

    /// Node-level metric of every chunk position for node bits `x`.
    fn metrics(&self, x: &[u8]) -> Vec<f64> {
        x.iter()
            .zip(self.r)
            .zip(&self.e0[self.chunk.clone()])
            .map(|((&b, &r), &e0)| bit_metric(r, b, e0))
            .collect()
    }

    /// Precodes a candidate input chunk from `st`, returning the outputs,
    /// their polar transform and the end state.
    fn precode(&self, v: &[u8], st: ConvState) -> (Vec<u8>, Vec<u8>, ConvState) {
        let mut st = st;
        let u: Vec<u8> = v.iter().map(|&b| self.poly.step(b, &mut st)).collect();
        let mut x = u.clone();
        transform_pow2(&mut x);
        (u, x, st)
    }
}

/// A child produced by a handler, relative to its parent path.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkChild {
    /// Absolute path metric.
    pub metric: f64,
    /// Precoder inputs over the chunk.
    pub v: Vec<u8>,
    /// Precoder outputs over the chunk.
    pub u: Vec<u8>,
    /// Register state after the chunk.
    pub st: ConvState,
}

/// All-frozen chunk: exactly one child, never pruned.
pub fn handle_rate0(parent_metric: f64, st: ConvState, ctx: &ChunkContext) -> ChunkChild {
    let v = vec![0u8; ctx.size()];
    let (u, x, st) = ctx.precode(&v, st);
    let m: f64 = ctx.metrics(&x).iter().sum();
    ChunkChild {
        metric: parent_metric + m,
        v,
        u,
        st,
    }
}

/// Single information bit at offset `p`: candidates all-zero and `e_p`,
/// each admitted iff its metric at `p` exceeds the threshold there.
pub fn handle_rep(parent_metric: f64, st: ConvState, ctx: &ChunkContext) -> Vec<ChunkChild> {
    let info = ctx.info_offsets();
    debug_assert_eq!(info.len(), 1);
    let p = info[0];
    let threshold = ctx.gamma[ctx.chunk.start + p];
    let mut out = Vec::with_capacity(2);
    for bit in [0u8, 1] {
        let mut v = vec![0u8; ctx.size()];
        v[p] = bit;
        let (u, x, end) = ctx.precode(&v, st);
        let m = ctx.metrics(&x);
        if m[p] > threshold {
            out.push(ChunkChild {
                metric: parent_metric + m.iter().sum::<f64>(),
                v,
                u,
                st: end,
            });
        }
    }
    out
}

/// Two information bits `p1 < p2`: four candidates (00, p1, p2, both),
/// admitted iff the summed metric at `p1, p2` exceeds the summed threshold.
pub fn handle_type_iv(parent_metric: f64, st: ConvState, ctx: &ChunkContext) -> Vec<ChunkChild> {
    let info = ctx.info_offsets();
    debug_assert_eq!(info.len(), 2);
    let (p1, p2) = (info[0], info[1]);
    let threshold = ctx.gamma[ctx.chunk.start + p1] + ctx.gamma[ctx.chunk.start + p2];
    let mut out = Vec::with_capacity(4);
    for (b1, b2) in [(0u8, 0u8), (1, 0), (0, 1), (1, 1)] {
        let mut v = vec![0u8; ctx.size()];
        v[p1] = b1;
        v[p2] = b2;
        let (u, x, end) = ctx.precode(&v, st);
        let m = ctx.metrics(&x);
        if m[p1] + m[p2] > threshold {
            out.push(ChunkChild {
                metric: parent_metric + m.iter().sum::<f64>(),
                v,
                u,
                st: end,
            });
        }
    }
    out
}

/// Bookkeeping of one rate-1 subtree search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rate1Stats {
    /// Leaves accounted for (starts at one); pruning a branch at position
    /// `l` of a size-`n0` chunk adds `2^(n0 - l)`.
    pub count: u128,
    pub completed: usize,
    pub expansions: usize,
}

#[derive(Debug, Clone)]
struct Partial {
    bits: Vec<u8>,
    len: usize,
}

/// All-information chunk: best-first search over the node bits with a
/// bounded frontier store and a bounded completion store. Completed node
/// words are mapped back to precoder outputs and inputs and returned best
/// first. An empty result is a dead end.
pub fn handle_rate1(
    parent_metric: f64,
    st: ConvState,
    ctx: &ChunkContext,
) -> (Vec<ChunkChild>, Rate1Stats) {
    let n0 = ctx.size();
    let base = ctx.chunk.start;
    let subtree = |l: usize| -> u128 { 1u128.checked_shl((n0 - l) as u32).unwrap_or(u128::MAX) };
    let total = subtree(0);
    let capacity = ctx.capacity.max(1);
    let mut frontier = BoundedDepq::new(capacity).expect("nonzero capacity");
    let mut complete = BoundedDepq::new(capacity).expect("nonzero capacity");
    frontier.insert(
        parent_metric,
        Partial {
            bits: vec![0; n0],
            len: 0,
        },
    );
    let mut stats = Rate1Stats {
        count: 1,
        ..Default::default()
    };
    while stats.count < total {
        let Some(top) = frontier.extract_max() else { break };
        stats.expansions += 1;
        let pos = top.item.len;
        let l = pos + 1;
        let threshold = ctx.gamma[base + pos];
        for b in [0u8, 1] {
            let m = bit_metric(ctx.r[pos], b, ctx.e0[base + pos]);
            if m > threshold {
                let mut bits = top.item.bits.clone();
                bits[pos] = b;
                if l < n0 {
                    frontier.insert(top.metric + m, Partial { bits, len: l });
                } else {
                    complete.insert(top.metric + m, bits);
                    stats.count = stats.count.saturating_add(1);
                    stats.completed += 1;
                }
            } else {
                stats.count = stats.count.saturating_add(subtree(l));
            }
        }
    }
    let mut out = Vec::with_capacity(complete.len());
    while let Some(done) = complete.extract_max() {
        let mut u = done.item;
        transform_pow2(&mut u);
        let mut end = st;
        let v = u.iter().map(|&b| ctx.poly.inv_step(b, &mut end)).collect();
        out.push(ChunkChild {
            metric: done.metric,
            v,
            u,
            st: end,
        });
    }
    (out, stats)
}
