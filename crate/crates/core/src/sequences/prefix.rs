use super::state::{StateReader, StateWriter};
use super::{Generator, SequenceError};
use crate::kernel::ExactScalar;

/// Running sums `a_base + ... + a_n` of an inner generator.
pub struct PrefixSum {
    inner: Box<dyn Generator>,
    sum: ExactScalar,
}

impl PrefixSum {
    pub fn new(inner: Box<dyn Generator>) -> Self {
        PrefixSum {
            inner,
            sum: ExactScalar::zero(),
        }
    }

    /// The running sum is stored ahead of the inner fields.
    pub fn decode(
        r: &mut StateReader<'_>,
        inner: impl FnOnce(&mut StateReader<'_>) -> Result<Box<dyn Generator>, SequenceError>,
    ) -> Result<Self, SequenceError> {
        let sum = r.scalar()?;
        Ok(PrefixSum { inner: inner(r)?, sum })
    }
}

impl Generator for PrefixSum {
    fn next_value(&mut self) -> Result<ExactScalar, SequenceError> {
        let v = self.inner.next_value()?;
        self.sum += &v;
        Ok(self.sum.clone())
    }
    fn encode(&self, w: &mut StateWriter) {
        w.scalar(&self.sum);
        self.inner.encode(w);
    }
}
