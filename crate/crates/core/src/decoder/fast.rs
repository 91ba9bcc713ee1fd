use super::handlers::{handle_rate0, handle_rate1, handle_rep, handle_type_iv, ChunkChild, ChunkContext};
use super::{finish, prepare, Counters, DecodeOptions, DecodeResult, DecodeStatus, PathEntry, PathStore};
use crate::code::{NodeType, PacCodeSpec};
use crate::construction::ConstructionTables;
use crate::error::Result;
use crate::polar::update_llr;

/// Stack decoding over special nodes.
///
/// Each cycle pops the best path, refreshes its LLRs down to the next
/// special node and hands the node LLRs to the matching handler, whose
/// admitted children are pushed into the store. Termination is as for
/// [`super::stack_decode`].
pub fn fast_stack_decode(
    spec: &PacCodeSpec,
    tables: &ConstructionTables,
    channel_llrs: &[f64],
    options: &DecodeOptions,
) -> Result<DecodeResult> {
    let (llrs, gamma) = prepare(spec, tables, channel_llrs, options)?;
    let len = spec.len();
    let s_values = spec.segment_counts();
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
        let res = update_llr(&llrs, &mut path.llr, path.v.len(), &path.u, &s_values, &options.policy);
        counters.fg_ops += res.fg_ops;
        let ctx = ChunkContext {
            poly: spec.poly(),
            rate_profile: spec.rate_profile(),
            e0: &tables.e0,
            gamma: &gamma,
            chunk: res.chunk.clone(),
            r: &path.llr.as_slice()[res.llr_range.clone()],
            capacity: options.stack_capacity,
        };
        let children = match res.node_type {
            NodeType::Rate0 => vec![handle_rate0(top.metric, path.st, &ctx)],
            NodeType::Rep => handle_rep(top.metric, path.st, &ctx),
            NodeType::TypeIV => handle_type_iv(top.metric, path.st, &ctx),
            NodeType::Rate1 => handle_rate1(top.metric, path.st, &ctx).0,
            NodeType::NotSpecial => unreachable!("update_llr stops only at terminal nodes"),
        };
        counters.total_insertions += children.len();
        push_children(&mut store, path, &res.chunk, children);

        match store.peek_max() {
            None => break DecodeStatus::StackExhausted,
            Some((_, best)) if best.v.len() == len => break DecodeStatus::Decoded,
            _ => {}
        }
    };
    Ok(finish(spec, &store, status, counters))
}

/// Materializes handler children from their parent and inserts them in
/// order; the parent buffers are moved into the last child.
pub(crate) fn push_children(
    store: &mut PathStore,
    mut parent: PathEntry,
    chunk: &std::ops::Range<usize>,
    children: Vec<ChunkChild>,
) {
    let count = children.len();
    for (k, child) in children.into_iter().enumerate() {
        let mut entry = if k + 1 == count {
std::mem::replace(&mut parent, PathEntry::placeholder())
        } else {
            parent.clone()
        };
        entry.v.extend_from_slice(&child.v);
        entry.u[chunk.clone()].copy_from_slice(&child.u);
        entry.st = child.st;
        store.insert(child.metric, entry);
    }
}
