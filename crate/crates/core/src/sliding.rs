//! FIFO queue with O(1) amortized access to the minimum and maximum of its
//! current contents.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Counters for the elementary deque moves performed so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueueStats {
    pub pushes: u64,
    pub pops: u64,
    pub moves: u64,
}

/// Sliding window over `(tag, value)` items.
///
/// Alongside the plain FIFO it keeps two monotonic deques: `mins` holds a
/// non-decreasing run of candidates for the minimum, `maxs` a non-increasing
/// run for the maximum. Each item enters and leaves each deque at most once.
#[derive(Debug, Clone, Default)]
pub struct SlidingExtremaQueue {
    items: VecDeque<(usize, f64)>,
    mins: VecDeque<(usize, f64)>,
    maxs: VecDeque<(usize, f64)>,
    stats: QueueStats,
}

impl SlidingExtremaQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self {
            items: VecDeque::with_capacity(cap),
            mins: VecDeque::with_capacity(cap),
            maxs: VecDeque::with_capacity(cap),
            stats: QueueStats::default(),
        }
    }

    /// Appends an item. Tags must be strictly increasing across pushes.
    pub fn push(&mut self, tag: usize, value: f64) {
        debug_assert!(self.items.back().is_none_or(|&(last, _)| last < tag));
        self.stats.pushes += 1;
        while self.mins.back().is_some_and(|&(_, v)| v > value) {
            self.mins.pop_back();
            self.stats.moves += 1;
        }
        while self.maxs.back().is_some_and(|&(_, v)| v < value) {
            self.maxs.pop_back();
            self.stats.moves += 1;
        }
        self.items.push_back((tag, value));
        self.mins.push_back((tag, value));
        self.maxs.push_back((tag, value));
        self.stats.moves += 3;
    }

    /// Removes and returns the earliest pushed item.
    pub fn pop_oldest(&mut self) -> Result<(usize, f64)> {
        let item = self.items.pop_front().ok_or(Error::EmptyQueue)?;
        self.stats.pops += 1;
        self.stats.moves += 1;
        if self.mins.front().is_some_and(|&(tag, _)| tag == item.0) {
            self.mins.pop_front();
            self.stats.moves += 1;
        }
        if self.maxs.front().is_some_and(|&(tag, _)| tag == item.0) {
            self.maxs.pop_front();
            self.stats.moves += 1;
        }
        Ok(item)
    }

    pub fn min(&self) -> Result<f64> {
        self.mins.front().map(|&(_, v)| v).ok_or(Error::EmptyQueue)
    }

    pub fn max(&self) -> Result<f64> {
        self.maxs.front().map(|&(_, v)| v).ok_or(Error::EmptyQueue)
    }

    pub fn oldest(&self) -> Result<(usize, f64)> {
        self.items.front().copied().ok_or(Error::EmptyQueue)
    }

    /// `max - min` of the current contents, or 0 when empty.
    pub fn extent(&self) -> f64 {
        match (self.mins.front(), self.maxs.front()) {
            (Some(&(_, lo)), Some(&(_, hi))) => hi - lo,
            _ => 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn stats(&self) -> QueueStats {
        self.stats
    }
}
