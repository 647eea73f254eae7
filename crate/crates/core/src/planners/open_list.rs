use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy)]
struct Entry {
    f: f64,
    serial: u64,
    index: usize,
    g: f64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // BinaryHeap is a max-heap: invert so the smallest f (then oldest) wins.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.serial.cmp(&self.serial))
    }
}

/// Min-priority frontier keyed by `f`, FIFO among equal keys.
///
/// Decrease-key is done by pushing a fresh entry; the caller discards stale
/// pops by comparing the popped `g` against its own best-known value.
#[derive(Debug, Default)]
pub struct OpenList {
    heap: BinaryHeap<Entry>,
    serial: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Popped {
    pub index: usize,
    pub g: f64,
    pub f: f64,
}

impl OpenList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, index: usize, g: f64, f: f64) {
        self.heap.push(Entry { f, serial: self.serial, index, g });
        self.serial += 1;
    }

    pub fn pop(&mut self) -> Option<Popped> {
        self.heap.pop().map(|e| Popped { index: e.index, g: e.g, f: e.f })
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}
