use std::cmp::Ordering;
use std::collections::VecDeque;

use num_bigint::BigInt;

use crate::kernel::{ExactScalar, Kernel, KernelError, Prepared};
use crate::sequences::{self, GeneratorState, SequenceId, SequenceStream, StateReader, StateWriter};

use super::{ExceptionSet, Property, ScanError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSpec {
    pub sequence: SequenceId,
    pub property: Property,
    pub range: (u64, u64),
}

impl ScanSpec {
    pub fn new(sequence: SequenceId, property: Property, range: (u64, u64)) -> Result<Self, ScanError> {
        sequence.validate()?;
        let (lo, hi) = range;
        if lo > hi {
            return Err(ScanError::InvalidSpec(format!("empty range [{lo}, {hi}]")));
        }
        let min = property.min_index().max(sequence.base_index());
        if lo < min {
            return Err(ScanError::InvalidSpec(format!(
                "{property} on {sequence} starts at index {min}, range starts at {lo}"
            )));
        }
        if hi > 1 << 40 {
            return Err(ScanError::InvalidSpec("indices above 2^40 are not supported".into()));
        }
        if needs_sum(property) && sequence.base_index() != 1 {
            return Err(ScanError::InvalidSpec(format!("{property} needs a 1-based list")));
        }
        Ok(ScanSpec {
            sequence,
            property,
            range,
        })
    }
}

fn needs_sum(p: Property) -> bool {
    matches!(p, Property::SumLowerBound | Property::ProthSumBound | Property::PowerMean(_))
}

struct Entry {
    index: u64,
    value: ExactScalar,
    /// Running sum through this index (power sum for power means).
    aux: Option<ExactScalar>,
    prepared: Option<Prepared>,
}

enum Outcome {
    Holds,
    Fails,
    Undecided,
}

/// Incremental, checkpointable evaluation of one [`ScanSpec`].
pub struct Scanner {
    spec: ScanSpec,
    kernel: Kernel,
    stream: SequenceStream,
    window: VecDeque<Entry>,
    acc: ExactScalar,
    next_n: u64,
    exceptions: Vec<u64>,
    indeterminates: Vec<u64>,
    max_precision: u32,
}

impl Scanner {
    pub fn new(spec: ScanSpec, kernel: Kernel) -> Result<Self, ScanError> {
        let stream = sequences::open(&spec.sequence)?;
        let next_n = spec.range.0;
        Ok(Scanner {
            spec,
            kernel,
            stream,
            window: VecDeque::new(),
            acc: ExactScalar::zero(),
            next_n,
            exceptions: Vec::new(),
            indeterminates: Vec::new(),
            max_precision: 0,
        })
    }

    pub fn spec(&self) -> &ScanSpec {
        &self.spec
    }

    /// Step index evaluated next.
    pub fn next_step(&self) -> u64 {
        self.next_n
    }

    pub fn is_done(&self) -> bool {
        self.next_n > self.spec.range.1
    }

    fn pull(&mut self) -> Result<(), ScanError> {
        let t = self.stream.next_term()?;
        let aux = match self.spec.property {
            Property::PowerMean(alpha) => {
                self.acc += &t.value.pow(alpha as u64);
                Some(self.acc.clone())
            }
            p if needs_sum(p) => {
                self.acc += &t.value;
                Some(self.acc.clone())
            }
            _ => None,
        };
        self.window.push_back(Entry {
            index: t.index,
            value: t.value,
            aux,
            prepared: None,
        });
        Ok(())
    }

    fn load(&mut self, n: u64) -> Result<(), ScanError> {
        let last = n + self.spec.property.lookahead();
        while self.window.back().is_none_or(|e| e.index < last) {
            self.pull()?;
            while self.window.front().is_some_and(|e| e.index < n) {
                self.window.pop_front();
            }
        }
        Ok(())
    }

    fn entry(&self, index: u64) -> &Entry {
        let front = self.window.front().expect("window loaded").index;
        &self.window[(index - front) as usize]
    }

    fn value(&self, index: u64) -> &ExactScalar {
        &self.entry(index).value
    }

    fn prepared(&mut self, index: u64) -> Result<Prepared, ScanError> {
        let front = self.window.front().expect("window loaded").index;
        let e = &mut self.window[(index - front) as usize];
        if e.prepared.is_none() {
            e.prepared = Some(self.kernel.prepare(&e.value)?);
        }
        Ok(e.prepared.clone().expect("just prepared"))
    }

    fn judge(&mut self, r: Result<crate::kernel::Decision<Ordering>, KernelError>, want: Ordering) -> Result<Outcome, ScanError> {
        match r {
            Ok(d) => {
                self.max_precision = self.max_precision.max(d.precision_bits);
                Ok(if d.value == want { Outcome::Holds } else { Outcome::Fails })
            }
            Err(KernelError::Indeterminate { precision_reached }) => {
                self.max_precision = self.max_precision.max(precision_reached);
                Ok(Outcome::Undecided)
            }
            Err(e) => Err(e.into()),
        }
    }

    fn step(&mut self, n: u64) -> Result<Outcome, ScanError> {
        use Property::*;
        let exact = |holds: bool| Ok(if holds { Outcome::Holds } else { Outcome::Fails });
        match self.spec.property {
            RootDecreasing | RootIncreasing => {
                let (x, y) = (self.prepared(n)?, self.prepared(n + 1)?);
                let r = self.kernel.root_step_prepared(&x, &y, n);
                let want = if self.spec.property == RootDecreasing { Ordering::Greater } else { Ordering::Less };
                self.judge(r, want)
            }
            RatioIncreasing | RatioDecreasing => {
                let (x, y, z) = (self.prepared(n)?, self.prepared(n + 1)?, self.prepared(n + 2)?);
                let r = self.kernel.ratio_step_prepared(&x, &y, &z, n);
                let want = if self.spec.property == RatioIncreasing { Ordering::Greater } else { Ordering::Less };
                self.judge(r, want)
            }
            ValueRatioIncreasing | ValueRatioDecreasing => {
                let o = product_cmp(1, &[self.value(n), self.value(n + 2)], 1, &[self.value(n + 1), self.value(n + 1)]);
                let want = if self.spec.property == ValueRatioIncreasing { Ordering::Greater } else { Ordering::Less };
                exact(o == want)
            }
            SumLowerBound => {
                let sum = self.entry(n).aux.as_ref().expect("sum tracked");
                exact(product_cmp(2, &[sum], n - 1, &[self.value(n + 1)]) == Ordering::Less)
            }
            ProthSumBound => {
                let sum = self.entry(n).aux.as_ref().expect("sum tracked");
                exact(product_cmp(3, &[sum], n, &[self.value(n)]) == Ordering::Less)
            }
            PowerMean(alpha) => {
                let e = self.entry(n);
                let o = self
                    .kernel
                    .power_mean_cmp(e.aux.as_ref().expect("sum tracked"), &e.value, n, alpha);
                exact(o == Ordering::Less)
            }
            RefinedFiroozbakht => {
                let r = self.kernel.refined_firoozbakht_cmp(self.value(n), self.value(n + 1), n);
                self.judge(r, Ordering::Less)
            }
        }
    }

    /// Evaluate up to `max_steps` further steps.
    pub fn advance(&mut self, max_steps: u64) -> Result<(), ScanError> {
        let mut left = max_steps;
        while left > 0 && !self.is_done() {
            let n = self.next_n;
            self.load(n)?;
            match self.step(n)? {
                Outcome::Holds => {}
                Outcome::Fails => self.exceptions.push(n),
                Outcome::Undecided => self.indeterminates.push(n),
            }
            self.next_n += 1;
            left -= 1;
        }
        Ok(())
    }

    pub fn run_to_end(mut self) -> Result<ExceptionSet, ScanError> {
        self.advance(u64::MAX)?;
        Ok(self.result())
    }

    /// Exceptions found so far; the range ends at the last evaluated step.
    pub fn result(&self) -> ExceptionSet {
        ExceptionSet {
            sequence: self.spec.sequence.clone(),
            property: self.spec.property,
            range: (self.spec.range.0, self.next_n.saturating_sub(1).max(self.spec.range.0)),
            exceptions: self.exceptions.clone(),
            indeterminates: self.indeterminates.clone(),
            max_precision_bits: self.max_precision,
        }
    }

    /// Canonical encoding of the scan position, the term window, partial
    /// results and the generator state.
    pub fn checkpoint(&self) -> Vec<u8> {
        let mut w = StateWriter::new();
        w.str(&self.spec.sequence.to_string())
            .str(&self.spec.property.to_string())
            .u64(self.spec.range.0)
            .u64(self.spec.range.1)
            .bytes(self.stream.state().as_bytes())
            .u64(self.next_n)
            .scalar(&self.acc)
            .u64(self.window.len() as u64);
        for e in &self.window {
            w.u64(e.index).scalar(&e.value);
            match &e.aux {
                Some(a) => w.u64(1).scalar(a),
                None => w.u64(0),
            };
        }
        write_list(&mut w, &self.exceptions);
        write_list(&mut w, &self.indeterminates);
        w.u64(self.max_precision as u64);
        w.finish().0
    }

    pub fn resume(spec: ScanSpec, kernel: Kernel, bytes: &[u8]) -> Result<Self, ScanError> {
        let bad = |s: &str| ScanError::BadCheckpoint(s.to_string());
        let state = GeneratorState(bytes.to_vec());
        let mut r = StateReader::new(&state)?;
        if r.str()? != spec.sequence.to_string() || r.str()? != spec.property.to_string() {
            return Err(bad("checkpoint belongs to a different scan"));
        }
        if (r.u64()?, r.u64()?) != spec.range {
            return Err(bad("checkpoint range differs"));
        }
        let stream = sequences::restore(&GeneratorState(r.bytes()?.to_vec()))?;
        if stream.id() != &spec.sequence {
            return Err(bad("stream id differs"));
        }
        let next_n = r.u64()?;
        let acc = r.scalar()?;
        let len = r.u64()?;
        let mut window = VecDeque::new();
        for _ in 0..len {
            let index = r.u64()?;
            let value = r.scalar()?;
            let aux = match r.u64()? {
                0 => None,
                1 => Some(r.scalar()?),
                _ => return Err(bad("bad aux tag")),
            };
            window.push_back(Entry {
                index,
                value,
                aux,
                prepared: None,
            });
        }
        let exceptions = read_list(&mut r)?;
        let indeterminates = read_list(&mut r)?;
        let max_precision = u32::try_from(r.u64()?).map_err(|_| bad("precision overflow"))?;
        r.finish()?;
        let expected_next = window.back().map_or(spec.sequence.base_index(), |e| e.index + 1);
        if stream.next_index() != expected_next || next_n < spec.range.0 {
            return Err(bad("window and stream disagree"));
        }
        Ok(Scanner {
            spec,
            kernel,
            stream,
            window,
            acc,
            next_n,
            exceptions,
            indeterminates,
            max_precision,
        })
    }
}

/// Sign of `k * prod(xs) - m * prod(ys)` by cross multiplication, skipping
/// the gcd reductions of rational products.
fn product_cmp(k: u64, xs: &[&ExactScalar], m: u64, ys: &[&ExactScalar]) -> Ordering {
    let side = |c: u64, num: &[&ExactScalar], den: &[&ExactScalar]| {
        let mut acc = BigInt::from(c);
        for x in num {
            acc *= x.numer();
        }
        for y in den {
            acc *= y.denom();
        }
        acc
    };
    side(k, xs, ys).cmp(&side(m, ys, xs))
}

fn write_list(w: &mut StateWriter, v: &[u64]) {
    w.u64(v.len() as u64);
    for &x in v {
        w.u64(x);
    }
}

fn read_list(r: &mut StateReader<'_>) -> Result<Vec<u64>, ScanError> {
    let n = r.u64()?;
    (0..n).map(|_| r.u64().map_err(ScanError::from)).collect()
}
