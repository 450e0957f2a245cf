//! Canonical byte encoding for generator checkpoints.
//!
//! Layout: magic `AQGS`, one version byte, then a sequence of fields in a
//! fixed order chosen by each generator. Integers are little-endian and
//! length-prefixed; big integers carry a sign byte
//! (0 = zero, 1 = positive, 2 = negative) followed by a `u64` byte count and
//! the magnitude bytes.

use num_bigint::{BigInt, Sign};

use super::SequenceError;
use crate::kernel::ExactScalar;

pub const STATE_MAGIC: &[u8; 4] = b"AQGS";
pub const STATE_VERSION: u8 = 1;

/// Serialized generator state; restoring it reproduces the exact remaining
/// stream.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorState(pub Vec<u8>);

impl GeneratorState {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

#[derive(Default)]
pub struct StateWriter {
    buf: Vec<u8>,
}

impl StateWriter {
    pub fn new() -> Self {
        let mut buf = Vec::with_capacity(64);
        buf.extend_from_slice(STATE_MAGIC);
        buf.push(STATE_VERSION);
        StateWriter { buf }
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn str(&mut self, s: &str) -> &mut Self {
        self.bytes(s.as_bytes())
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.u64(b.len() as u64);
        self.buf.extend_from_slice(b);
        self
    }

    pub fn int(&mut self, v: &BigInt) -> &mut Self {
        let (sign, mag) = v.to_bytes_le();
        let tag = match sign {
            Sign::NoSign => 0u8,
            Sign::Plus => 1,
            Sign::Minus => 2,
        };
        self.buf.push(tag);
        if tag == 0 {
            self.u64(0);
        } else {
            self.bytes(&mag);
        }
        self
    }

    pub fn ints<'a>(&mut self, vs: impl ExactSizeIterator<Item = &'a BigInt>) -> &mut Self {
        self.u64(vs.len() as u64);
        for v in vs {
            self.int(v);
        }
        self
    }

    pub fn scalar(&mut self, v: &ExactScalar) -> &mut Self {
        self.int(v.numer()).int(v.denom())
    }

    pub fn finish(self) -> GeneratorState {
        GeneratorState(self.buf)
    }
}

pub struct StateReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> StateReader<'a> {
    pub fn new(state: &'a GeneratorState) -> Result<Self, SequenceError> {
        let b = state.as_bytes();
        if b.len() < 5 || &b[..4] != STATE_MAGIC {
            return Err(SequenceError::BadState("missing magic".into()));
        }
        if b[4] != STATE_VERSION {
            return Err(SequenceError::BadState(format!("unsupported version {}", b[4])));
        }
        Ok(StateReader { buf: b, pos: 5 })
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], SequenceError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| SequenceError::BadState("truncated".into()))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub fn u64(&mut self) -> Result<u64, SequenceError> {
        let b = self.take(8)?;
        Ok(u64::from_le_bytes(b.try_into().expect("8 bytes")))
    }

    pub fn bytes(&mut self) -> Result<&'a [u8], SequenceError> {
        let n = self.u64()?;
        let n = usize::try_from(n).map_err(|_| SequenceError::BadState("length overflow".into()))?;
        self.take(n)
    }

    pub fn str(&mut self) -> Result<&'a str, SequenceError> {
        std::str::from_utf8(self.bytes()?).map_err(|_| SequenceError::BadState("invalid utf-8".into()))
    }

    pub fn int(&mut self) -> Result<BigInt, SequenceError> {
        let tag = self.take(1)?[0];
        let mag = self.bytes()?;
        let sign = match tag {
            0 => return Ok(BigInt::from(0)),
            1 => Sign::Plus,
            2 => Sign::Minus,
            t => return Err(SequenceError::BadState(format!("bad sign tag {t}"))),
        };
        Ok(BigInt::from_bytes_le(sign, mag))
    }

    pub fn ints(&mut self) -> Result<Vec<BigInt>, SequenceError> {
        let n = self.u64()?;
        (0..n).map(|_| self.int()).collect()
    }

    pub fn scalar(&mut self) -> Result<ExactScalar, SequenceError> {
        let num = self.int()?;
        let den = self.int()?;
        if den <= BigInt::from(0) {
            return Err(SequenceError::BadState("non-positive denominator".into()));
        }
        Ok(ExactScalar::from_fraction(num, den))
    }

    pub fn finish(&self) -> Result<(), SequenceError> {
        if self.pos == self.buf.len() {
            Ok(())
        } else {
            Err(SequenceError::BadState("trailing bytes".into()))
        }
    }
}
