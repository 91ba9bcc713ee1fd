use super::{bit_metric, finish, prepare, Counters, DecodeOptions, DecodeResult, DecodeStatus, PathEntry, PathStore};
use crate::code::{ChunkPolicy, PacCodeSpec};
use crate::construction::ConstructionTables;
use crate::error::Result;
use crate::polar::update_llr;

/// Bit-by-bit stack decoding.
///
/// Each cycle pops the best path and extends it by one precoder output: a
/// frozen position yields its single successor, an information position
/// yields each successor whose bit metric exceeds the threshold of that bit
/// channel (all of them when pruning is off). Successors are pushed best
/// first. Decoding stops when the best path reaches full length, the cycle
/// budget is spent, or the store runs empty.
pub fn stack_decode(
    spec: &PacCodeSpec,
    tables: &ConstructionTables,
    channel_llrs: &[f64],
    options: &DecodeOptions,
) -> Result<DecodeResult> {
    let (llrs, gamma) = prepare(spec, tables, channel_llrs, options)?;
    let len = spec.len();
    let s_values = spec.segment_counts();
    let poly = spec.poly();
    let mut store = PathStore::new(options.stack_capacity)?;
    store.insert(0.0, PathEntry::root(spec));
    let mut counters = Counters {
        total_insertions: 1,
        ..Default::default()
    };

    let status = loop {
        if counters.cycles == options.max_cycles {
            break DecodeStatus::CycleLimit;
        }
        counters.cycles += 1;
        let top = store.extract_max().expect("store is nonempty inside the loop");
        let mut path = top.item;
        let i = path.v.len();
        let res = update_llr(&llrs, &mut path.llr, i, &path.u, &s_values, &ChunkPolicy::LEAVES);
        counters.fg_ops += res.fg_ops;
        let leaf_llr = path.llr.as_slice()[res.llr_range.start];

        let mut successors: Vec<(f64, u8, u8)> = Vec::with_capacity(2);
        if spec.is_info(i) {
            let fb = poly.step(0, &mut path.st.clone());
            for u in [0u8, 1] {
                let m = bit_metric(leaf_llr, u, tables.e0[i]);
                if m > gamma[i] {
                    successors.push((m, u ^ fb, u));
                }
            }
            // best first; the 0-branch leads on ties
            successors.sort_by(|a, b| b.0.total_cmp(&a.0));
        } else {
            let u = poly.step(0, &mut path.st.clone());
            successors.push((bit_metric(leaf_llr, u, tables.e0[i]), 0, u));
        }

        let count = successors.len();
        for (k, (m, v, u)) in successors.into_iter().enumerate() {
            let mut child = if k + 1 == count {
                std::mem::replace(&mut path, PathEntry::placeholder())
            } else {
                path.clone()
            };
            poly.step(v, &mut child.st);
            child.v.push(v);
            child.u[i] = u;
            store.insert(top.metric + m, child);
            counters.total_insertions += 1;
        }

        match store.peek_max() {
            None => break DecodeStatus::StackExhausted,
            Some((_, best)) if best.v.len() == len => break DecodeStatus::Decoded,
            _ => {}
        }
    };
    Ok(finish(spec, &store, status, counters))
}
