//! Task files: `#` comments, one `[task]` header per task, then
//! `key = value` lines.
//!
//! ```text
//! [task]
//! id = sophie_germain
//! sequence = hypothesis_h[x,2x+1]
//! property = root_decreasing
//! range = [1, 1000]
//! expect_exceptions = [3, 4]
//! ```
//!
//! Optional keys: `expect_exceptions`, `expect_threshold`,
//! `checkpoint_interval`, `initial_bits`, `max_bits`, `escalation_factor`.

use std::collections::HashSet;
use std::path::Path;

use crate::kernel::PrecisionPolicy;
use crate::sequences::SequenceId;
use crate::verify::{Property, ScanSpec};

use super::{HarnessError, TaskSpec};

pub const DEFAULT_CHECKPOINT_INTERVAL: u64 = 10_000;

#[derive(Default)]
struct Draft {
    line: usize,
    id: Option<String>,
    sequence: Option<SequenceId>,
    property: Option<Property>,
    range: Option<(u64, u64)>,
    expected_exceptions: Option<Vec<u64>>,
    expected_threshold: Option<u64>,
    checkpoint_interval: Option<u64>,
    initial_bits: Option<u32>,
    max_bits: Option<u32>,
    escalation_factor: Option<u32>,
}

fn parse_list(s: &str) -> Option<Vec<u64>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?.trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|x| x.trim().parse().ok()).collect()
}

fn parse_range(s: &str) -> Option<(u64, u64)> {
    match parse_list(s)?.as_slice() {
        &[lo, hi] => Some((lo, hi)),
        _ => None,
    }
}

pub fn parse_tasks(path: &Path) -> Result<Vec<TaskSpec>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    parse_tasks_str(&text)
}

pub fn parse_tasks_str(text: &str) -> Result<Vec<TaskSpec>, HarnessError> {
    let mut drafts: Vec<Draft> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |reason: String| HarnessError::Parse { line, reason };
        let s = raw.split('#').next().unwrap_or("").trim();
        if s.is_empty() {
            continue;
        }
        if s == "[task]" {
            drafts.push(Draft {
                line,
                ..Draft::default()
            });
            continue;
        }
        let (key, value) = s
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(format!("expected 'key = value', got '{s}'")))?;
        let d = drafts
            .last_mut()
            .ok_or_else(|| err("field outside a [task] section".into()))?;
        let num = |v: &str| v.parse::<u64>().map_err(|_| err(format!("bad number for {key}: '{v}'")));
        let bits = |v: &str| v.parse::<u32>().map_err(|_| err(format!("bad number for {key}: '{v}'")));
        let dup = match key {
            "id" => d.id.replace(value.to_string()).is_some(),
            "sequence" => {
                let id = value.parse::<SequenceId>().map_err(|e| err(e.to_string()))?;
                d.sequence.replace(id).is_some()
            }
            "property" => {
                let p = value.parse::<Property>().map_err(|e| err(e.to_string()))?;
                d.property.replace(p).is_some()
            }
            "range" => {
                let r = parse_range(value).ok_or_else(|| err(format!("range must be [lo, hi], got '{value}'")))?;
                d.range.replace(r).is_some()
            }
            "expect_exceptions" => {
                let v = parse_list(value).ok_or_else(|| err(format!("expected a list like [3, 4], got '{value}'")))?;
                d.expected_exceptions.replace(v).is_some()
            }
            "expect_threshold" => d.expected_threshold.replace(num(value)?).is_some(),
            "checkpoint_interval" => d.checkpoint_interval.replace(num(value)?).is_some(),
            "initial_bits" => d.initial_bits.replace(bits(value)?).is_some(),
            "max_bits" => d.max_bits.replace(bits(value)?).is_some(),
            "escalation_factor" => d.escalation_factor.replace(bits(value)?).is_some(),
            _ => return Err(err(format!("unknown key '{key}'"))),
        };
        if dup {
            return Err(err(format!("duplicate key '{key}'")));
        }
    }

    let mut seen = HashSet::new();
    drafts.into_iter().map(|d| finish(d, &mut seen)).collect()
}

fn finish(d: Draft, seen: &mut HashSet<String>) -> Result<TaskSpec, HarnessError> {
    let missing = |k: &str| HarnessError::Parse {
        line: d.line,
        reason: format!("task is missing '{k}'"),
    };
    let id = d.id.clone().ok_or_else(|| missing("id"))?;
    let invalid = |reason: String| HarnessError::Validation {
        task: id.clone(),
        reason,
    };
    if !seen.insert(id.clone()) {
        return Err(invalid("duplicate task id".into()));
    }
    let sequence = d.sequence.ok_or_else(|| missing("sequence"))?;
    let property = d.property.ok_or_else(|| missing("property"))?;
    let range = d.range.ok_or_else(|| missing("range"))?;
    let base = PrecisionPolicy::default();
    let policy = PrecisionPolicy::new(
        d.initial_bits.unwrap_or(base.initial_bits),
        d.max_bits.unwrap_or(base.max_bits),
        d.escalation_factor.unwrap_or(base.escalation_factor),
    )
    .map_err(|e| invalid(e.to_string()))?;
    let spec = ScanSpec::new(sequence, property, range).map_err(|e| invalid(e.to_string()))?;
    let checkpoint_interval = d.checkpoint_interval.unwrap_or(DEFAULT_CHECKPOINT_INTERVAL);
    if checkpoint_interval == 0 {
        return Err(invalid("checkpoint_interval must be positive".into()));
    }
    Ok(TaskSpec {
        id,
        spec,
        policy,
        checkpoint_interval,
        expected_exceptions: d.expected_exceptions,
        expected_threshold: d.expected_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_task() {
        let t = parse_tasks_str(
            "# demo\n[task]\nid = sg\nsequence = hypothesis_h[x, 2x+1]\nproperty = root_decreasing\nrange = [1,1000]\n",
        )
        .unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].spec.range, (1, 1000));
        assert_eq!(t[0].spec.sequence.to_string(), "hypothesis_h[x,2x+1]");
        assert_eq!(t[0].checkpoint_interval, DEFAULT_CHECKPOINT_INTERVAL);
    }

    #[test]
    fn errors_carry_positions() {
        let one = "[task]\nid = a\nsequence = primes\nproperty = root_decreasing\nrange = [1, 5]\n";
        let dup = format!("{one}{one}");
        assert!(matches!(parse_tasks_str(&dup), Err(HarnessError::Validation { task, .. }) if task == "a"));
        let bad = "[task]\nid = a\nsequence = nosuch\n";
        assert!(matches!(parse_tasks_str(bad), Err(HarnessError::Parse { line: 3, .. })));
        assert!(matches!(parse_tasks_str("id = a\n"), Err(HarnessError::Parse { line: 1, .. })));
        let empty_range = "[task]\nid = a\nsequence = primes\nproperty = root_decreasing\nrange = [9, 5]\n";
        assert!(matches!(parse_tasks_str(empty_range), Err(HarnessError::Validation { .. })));
        let missing = "\n[task]\nid = a\nsequence = primes\n";
        assert!(matches!(parse_tasks_str(missing), Err(HarnessError::Parse { line: 2, .. })));
        assert!(parse_tasks_str("").unwrap().is_empty());
    }

    #[test]
    fn expectations_and_overrides() {
        let t = parse_tasks_str(
            "[task]\nid = b\nsequence = primes\nproperty = power_mean[2]\nrange = [2, 100]\nexpect_exceptions = []\nexpect_threshold = 9\nmax_bits = 4096\ncheckpoint_interval = 7\n",
        )
        .unwrap();
        assert_eq!(t[0].expected_exceptions, Some(vec![]));
        assert_eq!(t[0].expected_threshold, Some(9));
        assert_eq!(t[0].policy.max_bits, 4096);
        assert_eq!(t[0].checkpoint_interval, 7);
    }
}
