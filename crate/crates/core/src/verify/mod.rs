//! Finite-range checks of monotonicity laws, partial-sum bounds and
//! congruences over generated sequences.
//!
//! A scan walks the step index `n` over `[n_lo, n_hi]` and evaluates one
//! [`Property`] per step:
//!
//! | property | step `n` holds when |
//! |---|---|
//! | `root_decreasing` | `a_n^(1/n) > a_{n+1}^(1/(n+1))` |
//! | `root_increasing` | `a_n^(1/n) < a_{n+1}^(1/(n+1))` |
//! | `ratio_increasing` | `r_n < r_{n+1}` with `r_n = a_{n+1}^(1/(n+1)) / a_n^(1/n)` |
//! | `ratio_decreasing` | `r_n > r_{n+1}` |
//! | `value_ratio_increasing` | `a_{n+1}/a_n < a_{n+2}/a_{n+1}` |
//! | `value_ratio_decreasing` | `a_{n+1}/a_n > a_{n+2}/a_{n+1}` |
//! | `sum_lower_bound` | `2 (a_1 + ... + a_n) < (n - 1) a_{n+1}` |
//! | `proth_sum_bound` | `3 (a_1 + ... + a_n) < n a_n` |
//! | `power_mean[k]` | `(k + 1) (a_1^k + ... + a_n^k) < n a_n^k` |
//! | `refined_firoozbakht` | `a_{n+1}^(1/(n+1)) / a_n^(1/n) < 1 - ln ln n / (2 n^2)` |
//!
//! All inequalities are strict, so an exact tie counts as an exception.
//! Kernel results that stay undecided at the maximum precision are listed as
//! indeterminates and never as exceptions.

pub mod congruence;
pub mod report;
mod scanner;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::kernel::{Kernel, KernelError};
use crate::sequences::{SequenceError, SequenceId};

pub use congruence::{clf_euler_congruence, CongruenceId, CongruenceReport};
pub use report::ResultRecord;
pub use scanner::{ScanSpec, Scanner};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScanError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("invalid scan: {0}")]
    InvalidSpec(String),
    #[error("bad scan checkpoint: {0}")]
    BadCheckpoint(String),
    #[error("inconsistent reports: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    RootDecreasing,
    RootIncreasing,
    RatioIncreasing,
    RatioDecreasing,
    ValueRatioIncreasing,
    ValueRatioDecreasing,
    SumLowerBound,
    ProthSumBound,
    PowerMean(u32),
    RefinedFiroozbakht,
}

impl Property {
    pub fn root(direction: Direction) -> Property {
        match direction {
            Direction::Increasing => Property::RootIncreasing,
            Direction::Decreasing => Property::RootDecreasing,
        }
    }

    pub fn ratio(direction: Direction) -> Property {
        match direction {
            Direction::Increasing => Property::RatioIncreasing,
            Direction::Decreasing => Property::RatioDecreasing,
        }
    }

    pub fn value_ratio(direction: Direction) -> Property {
        match direction {
            Direction::Increasing => Property::ValueRatioIncreasing,
            Direction::Decreasing => Property::ValueRatioDecreasing,
        }
    }

    /// How many terms past `a_n` the step at `n` reads.
    pub fn lookahead(self) -> u64 {
        use Property::*;
        match self {
            ProthSumBound | PowerMean(_) => 0,
            RootDecreasing | RootIncreasing | SumLowerBound | RefinedFiroozbakht => 1,
            RatioIncreasing | RatioDecreasing | ValueRatioIncreasing | ValueRatioDecreasing => 2,
        }
    }

    /// Smallest step index at which the property is defined.
    pub fn min_index(self) -> u64 {
        use Property::*;
        match self {
            ValueRatioIncreasing | ValueRatioDecreasing => 0,
            RefinedFiroozbakht => 5,
            _ => 1,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Property::*;
        match self {
            RootDecreasing => f.write_str("root_decreasing"),
            RootIncreasing => f.write_str("root_increasing"),
            RatioIncreasing => f.write_str("ratio_increasing"),
            RatioDecreasing => f.write_str("ratio_decreasing"),
            ValueRatioIncreasing => f.write_str("value_ratio_increasing"),
            ValueRatioDecreasing => f.write_str("value_ratio_decreasing"),
            SumLowerBound => f.write_str("sum_lower_bound"),
            ProthSumBound => f.write_str("proth_sum_bound"),
            PowerMean(a) => write!(f, "power_mean[{a}]"),
            RefinedFiroozbakht => f.write_str("refined_firoozbakht"),
        }
    }
}

impl FromStr for Property {
    type Err = ScanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use Property::*;
        let s = s.trim();
        Ok(match s {
            "root_decreasing" => RootDecreasing,
            "root_increasing" => RootIncreasing,
            "ratio_increasing" => RatioIncreasing,
            "ratio_decreasing" => RatioDecreasing,
            "value_ratio_increasing" => ValueRatioIncreasing,
            "value_ratio_decreasing" => ValueRatioDecreasing,
            "sum_lower_bound" => SumLowerBound,
            "proth_sum_bound" => ProthSumBound,
            "refined_firoozbakht" => RefinedFiroozbakht,
            _ => {
                let alpha = s
                    .strip_prefix("power_mean[")
                    .and_then(|r| r.strip_suffix(']'))
                    .and_then(|a| a.trim().parse::<u32>().ok())
                    .filter(|&a| a >= 1)
                    .ok_or_else(|| ScanError::InvalidSpec(format!("unknown property '{s}'")))?;
                PowerMean(alpha)
            }
        })
    }
}

/// Indices in a scanned range where a property fails or stays undecided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionSet {
    pub sequence: SequenceId,
    pub property: Property,
    pub range: (u64, u64),
    pub exceptions: Vec<u64>,
    pub indeterminates: Vec<u64>,
    /// Highest ball precision any step needed.
    pub max_precision_bits: u32,
}

pub const STABILITY_CAVEAT: &str = "stable within scanned range only";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub minimal_stable_start: Option<u64>,
    pub scanned_to: u64,
    pub caveat: String,
}

impl ExceptionSet {
    /// Least `N` such that every step in `[N, n_hi]` holds; `None` when the
    /// final step already fails. Undecided steps block stability.
    pub fn threshold(&self) -> ThresholdReport {
        let last_bad = self
            .exceptions
            .iter()
            .chain(&self.indeterminates)
            .copied()
            .max();
        let start = match last_bad {
            None => Some(self.range.0),
            Some(b) if b >= self.range.1 => None,
            Some(b) => Some(b + 1),
        };
        ThresholdReport {
            minimal_stable_start: start,
            scanned_to: self.range.1,
            caveat: STABILITY_CAVEAT.to_string(),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.exceptions.is_empty() && self.indeterminates.is_empty()
    }

    /// Union of two reports on adjacent or overlapping ranges of the same
    /// scan; overlapping parts must agree.
    pub fn merge(&self, other: &ExceptionSet) -> Result<ExceptionSet, ScanError> {
        if self.sequence != other.sequence || self.property != other.property {
            return Err(ScanError::Inconsistent("different scans".into()));
        }
        let (a, b) = if self.range.0 <= other.range.0 { (self, other) } else { (other, self) };
        if b.range.0 > a.range.1.saturating_add(1) {
            return Err(ScanError::Inconsistent("ranges leave a gap".into()));
        }
        let lo = b.range.0;
        let hi = a.range.1.min(b.range.1);
        let within = |v: &[u64]| -> Vec<u64> { v.iter().copied().filter(|&i| i >= lo && i <= hi).collect() };
        if within(&a.exceptions) != within(&b.exceptions) || within(&a.indeterminates) != within(&b.indeterminates) {
            return Err(ScanError::Inconsistent(format!("overlap [{lo}, {hi}] disagrees")));
        }
        let union = |x: &[u64], y: &[u64]| -> Vec<u64> {
            let mut v: Vec<u64> = x.iter().chain(y).copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        Ok(ExceptionSet {
            sequence: a.sequence.clone(),
            property: a.property,
            range: (a.range.0, a.range.1.max(b.range.1)),
            exceptions: union(&a.exceptions, &b.exceptions),
            indeterminates: union(&a.indeterminates, &b.indeterminates),
            max_precision_bits: a.max_precision_bits.max(b.max_precision_bits),
        })
    }
}

fn run(sequence: SequenceId, property: Property, range: (u64, u64), kernel: Kernel) -> Result<ExceptionSet, ScanError> {
    let spec = ScanSpec::new(sequence, property, range)?;
    Scanner::new(spec, kernel)?.run_to_end()
}

pub fn scan_root_monotone(
    seq: &SequenceId,
    direction: Direction,
    range: (u64, u64),
    kernel: Kernel,
) -> Result<ExceptionSet, ScanError> {
    run(seq.clone(), Property::root(direction), range, kernel)
}

pub fn scan_ratio_monotone(
    seq: &SequenceId,
    direction: Direction,
    range: (u64, u64),
    kernel: Kernel,
) -> Result<(ExceptionSet, ThresholdReport), ScanError> {
    let e = run(seq.clone(), Property::ratio(direction), range, kernel)?;
    let t = e.threshold();
    Ok((e, t))
}

pub fn scan_value_ratio_monotone(
    seq: &SequenceId,
    direction: Direction,
    range: (u64, u64),
) -> Result<ExceptionSet, ScanError> {
    run(seq.clone(), Property::value_ratio(direction), range, Kernel::default())
}

/// `2 Q(n) < (n - 1) q_{n+1}` over a prime list `q`.
pub fn scan_sum_lower_bound(seq: &SequenceId, range: (u64, u64)) -> Result<(ExceptionSet, ThresholdReport), ScanError> {
    let e = run(seq.clone(), Property::SumLowerBound, range, Kernel::default())?;
    let t = e.threshold();
    Ok((e, t))
}

/// `3 PR(n) < n Pr(n)` over the Proth primes.
pub fn scan_proth_sum_bound(range: (u64, u64)) -> Result<(ExceptionSet, ThresholdReport), ScanError> {
    let e = run(SequenceId::Proth, Property::ProthSumBound, range, Kernel::default())?;
    let t = e.threshold();
    Ok((e, t))
}

pub fn scan_power_mean(alpha: u32, range: (u64, u64)) -> Result<(ExceptionSet, ThresholdReport), ScanError> {
    let e = run(SequenceId::Primes, Property::PowerMean(alpha), range, Kernel::default())?;
    let t = e.threshold();
    Ok((e, t))
}

pub fn scan_refined_firoozbakht(range: (u64, u64), kernel: Kernel) -> Result<ExceptionSet, ScanError> {
    run(SequenceId::Primes, Property::RefinedFiroozbakht, range, kernel)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProthDiagnostic {
    pub x: u64,
    pub count: u64,
    /// `count * ln(x) / sqrt(x)`
    pub estimate: f64,
}

/// Point estimate of the constant in `count(Proth primes <= x) ~ c sqrt(x)/ln x`.
pub fn proth_count_diagnostic(x: u64) -> Result<ProthDiagnostic, ScanError> {
    if x < 1000 {
        return Err(ScanError::InvalidSpec("diagnostic needs x >= 1000".into()));
    }
    let count = crate::sequences::special::ProthSource::proth_numbers(0, x)
        .into_iter()
        .filter(|&v| crate::sequences::primes::is_prime_u64(v))
        .count() as u64;
    let xf = x as f64;
    Ok(ProthDiagnostic {
        x,
        count,
        estimate: count as f64 * xf.ln() / xf.sqrt(),
    })
}
