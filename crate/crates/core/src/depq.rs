//! Bounded double-ended priority queue over an interval heap.
//!
//! Entries are keyed by a metric; ties are broken by insertion order so
//! that the best entry is the earliest-inserted among equals and the worst
//! is the latest-inserted. Both ends are `O(log n)`.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Slot<T> {
    metric: f64,
    seq: u64,
    item: T,
}

/// Entry removed from the store, with its key.
#[derive(Debug, Clone, PartialEq)]
pub struct Keyed<T> {
    pub metric: f64,
    pub seq: u64,
    pub item: T,
}

impl<T> From<Slot<T>> for Keyed<T> {
    fn from(s: Slot<T>) -> Self {
        Keyed {
            metric: s.metric,
            seq: s.seq,
            item: s.item,
        }
    }
}

/// Interval heap with a fixed capacity; inserting into a full store first
/// evicts its minimum.
#[derive(Debug, Clone)]
pub struct BoundedDepq<T> {
    slots: Vec<Slot<T>>,
    capacity: usize,
    next_seq: u64,
    comparisons: u64,
}

impl<T> BoundedDepq<T> {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::ZeroCapacity);
        }
        Ok(Self {
            slots: Vec::with_capacity(capacity.min(1 << 16)),
            capacity,
            next_seq: 0,
            comparisons: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Key comparisons performed so far.
    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    /// Inserts an entry, returning the evicted minimum if the store was full.
    pub fn insert(&mut self, metric: f64, item: T) -> Option<Keyed<T>> {
        let evicted = if self.slots.len() == self.capacity {
            self.extract_min()
        } else {
            None
        };
        let seq = self.next_seq;
        self.next_seq += 1;
        self.push(Slot { metric, seq, item });
        evicted
    }

    pub fn peek_max(&self) -> Option<(f64, &T)> {
        let i = if self.slots.len() == 1 { 0 } else { 1 };
        self.slots.get(i).map(|s| (s.metric, &s.item))
    }

    pub fn peek_min(&self) -> Option<(f64, &T)> {
        self.slots.first().map(|s| (s.metric, &s.item))
    }

    pub fn extract_max(&mut self) -> Option<Keyed<T>> {
        match self.slots.len() {
            0 => None,
            1 | 2 => self.slots.pop().map(Into::into),
            _ => {
                let out = self.slots.swap_remove(1);
                self.sift_down_max(0);
                Some(out.into())
            }
        }
    }

    pub fn extract_min(&mut self) -> Option<Keyed<T>> {
        match self.slots.len() {
            0 => None,
            1 => self.slots.pop().map(Into::into),
            _ => {
                let out = self.slots.swap_remove(0);
                self.sift_down_min(0);
                Some(out.into())
            }
        }
    }

    /// Removes every entry, in no particular order.
    pub fn drain(&mut self) -> impl Iterator<Item = Keyed<T>> + '_ {
        self.slots.drain(..).map(Into::into)
    }

    fn cmp(&mut self, a: usize, b: usize) -> Ordering {
        self.comparisons += 1;
        let (x, y) = (&self.slots[a], &self.slots[b]);
        x.metric
            .total_cmp(&y.metric)
            .then_with(|| y.seq.cmp(&x.seq))
    }

    fn less(&mut self, a: usize, b: usize) -> bool {
        self.cmp(a, b) == Ordering::Less
    }

    fn push(&mut self, slot: Slot<T>) {
        self.slots.push(slot);
        let i = self.slots.len() - 1;
        let node = i / 2;
        if i % 2 == 1 {
            // completes a pair
            if self.less(i, i - 1) {
                self.slots.swap(i, i - 1);
                self.sift_up_min(i - 1);
            } else {
                self.sift_up_max(i);
            }
        } else if node > 0 {
            let parent = (node - 1) / 2;
            if self.less(i, 2 * parent) {
                self.sift_up_min(i);
            } else if self.less(2 * parent + 1, i) {
                self.sift_up_max(i);
            }
        }
    }

    fn sift_up_min(&mut self, mut i: usize) {
        while i / 2 > 0 {
            let parent_lo = 2 * ((i / 2 - 1) / 2);
            if self.less(i, parent_lo) {
                self.slots.swap(i, parent_lo);
                i = parent_lo;
            } else {
                break;
            }
        }
    }

    fn sift_up_max(&mut self, mut i: usize) {
        while i / 2 > 0 {
            let parent_hi = 2 * ((i / 2 - 1) / 2) + 1;
            if self.less(parent_hi, i) {
                self.slots.swap(i, parent_hi);
                i = parent_hi;
            } else {
                break;
            }
        }
    }

    fn sift_down_min(&mut self, mut node: usize) {
        let len = self.slots.len();
        loop {
            let lo = 2 * node;
            let mut best = None;
            for child in [2 * node + 1, 2 * node + 2] {
                let c = 2 * child;
                if c < len && best.map_or(true, |b| self.less(c, b)) {
                    best = Some(c);
                }
            }
            let Some(c) = best else { break };
            if !self.less(c, lo) {
                break;
            }
            self.slots.swap(c, lo);
            if c + 1 < len && self.less(c + 1, c) {
                self.slots.swap(c, c + 1);
            }
            node = c / 2;
        }
    }

    fn sift_down_max(&mut self, mut node: usize) {
        let len = self.slots.len();
        loop {
            let hi = 2 * node + 1;
            if hi >= len {
                break;
            }
            let mut best = None;
            for child in [2 * node + 1, 2 * node + 2] {
                let c_lo = 2 * child;
                if c_lo >= len {
                    continue;
                }
                let c = if c_lo + 1 < len { c_lo + 1 } else { c_lo };
                if best.map_or(true, |b| self.less(b, c)) {
                    best = Some(c);
                }
            }
            let Some(c) = best else { break };
            if !self.less(hi, c) {
                break;
            }
            self.slots.swap(c, hi);
            if c % 2 == 1 && self.less(c, c - 1) {
                self.slots.swap(c, c - 1);
            }
            node = c / 2;
        }
    }
}
