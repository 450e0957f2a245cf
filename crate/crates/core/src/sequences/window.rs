//! Ascending integer lists produced window by window.
//!
//! A [`WindowSource`] enumerates the members of a list inside `(lo, hi]`;
//! the stream only needs the last emitted value to resume, so the
//! checkpoint is `(next index, last value)` regardless of how windows were
//! cut before the interruption.

use std::collections::VecDeque;

use super::state::{StateReader, StateWriter};
use super::{Generator, SequenceError};
use crate::kernel::ExactScalar;

pub trait WindowSource: Send {
    /// Sorted members in `(lo, hi]`.
    fn members(&self, lo: u64, hi: u64) -> Result<Vec<u64>, SequenceError>;
    /// End of the next window starting after `lo`; must exceed `lo`.
    fn window_end(&self, lo: u64) -> u64;
}

pub struct WindowStream<S: WindowSource> {
    source: S,
    last: u64,
    scanned_to: u64,
    pending: VecDeque<u64>,
}

impl<S: WindowSource> WindowStream<S> {
    pub fn new(source: S) -> Self {
        WindowStream::resume(source, 0)
    }

    pub fn resume(source: S, last: u64) -> Self {
        WindowStream {
            source,
            last,
            scanned_to: last,
            pending: VecDeque::new(),
        }
    }

    pub fn decode(source: S, r: &mut StateReader<'_>) -> Result<Self, SequenceError> {
        let last = r.u64()?;
        Ok(WindowStream::resume(source, last))
    }

    pub fn next_u64(&mut self) -> Result<u64, SequenceError> {
        while self.pending.is_empty() {
            let lo = self.scanned_to;
            let hi = self.source.window_end(lo);
            if hi <= lo {
                return Err(SequenceError::Overflow("window bound exhausted the u64 range".into()));
            }
            self.pending.extend(self.source.members(lo, hi)?);
            self.scanned_to = hi;
        }
        let v = self.pending.pop_front().expect("non-empty");
        debug_assert!(v > self.last);
        self.last = v;
        Ok(v)
    }
}

impl<S: WindowSource + 'static> Generator for WindowStream<S> {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        self.next_u64().map(ExactScalar::from)
    }

    fn encode(&self, w: &mut StateWriter) {
        w.u64(self.last);
    }
}
