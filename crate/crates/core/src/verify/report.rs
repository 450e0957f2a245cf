use serde::{Deserialize, Serialize};

use super::{ExceptionSet, ThresholdReport};

/// One JSON-lines record per finished scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub task_id: String,
    pub sequence: String,
    pub property: String,
    pub range: (u64, u64),
    pub exceptions: Vec<u64>,
    pub indeterminates: Vec<u64>,
    pub threshold: ThresholdReport,
    /// Declared expectation and whether the scan met it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_exceptions: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_threshold: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
    pub wall_time_ms: u64,
    pub max_precision_bits: u32,
}

impl ResultRecord {
    pub fn new(task_id: &str, set: &ExceptionSet, wall_time_ms: u64) -> Self {
        ResultRecord {
            task_id: task_id.to_string(),
            sequence: set.sequence.to_string(),
            property: set.property.to_string(),
            range: set.range,
            exceptions: set.exceptions.clone(),
            indeterminates: set.indeterminates.clone(),
            threshold: set.threshold(),
            expected_exceptions: None,
            expected_threshold: None,
            matches_expected: None,
            wall_time_ms,
            max_precision_bits: set.max_precision_bits,
        }
    }

    /// Records the expectation and evaluates it against the scan.
    pub fn expect(mut self, exceptions: Option<Vec<u64>>, threshold: Option<u64>) -> Self {
        if exceptions.is_none() && threshold.is_none() {
            return self;
        }
        let ok_set = exceptions.as_ref().is_none_or(|e| *e == self.exceptions);
        let ok_thr = threshold.is_none_or(|t| self.threshold.minimal_stable_start == Some(t));
        self.matches_expected = Some(ok_set && ok_thr && self.indeterminates.is_empty());
        self.expected_exceptions = exceptions;
        self.expected_threshold = threshold;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    /// The record with timing zeroed, for determinism comparisons.
    pub fn untimed(&self) -> Self {
        ResultRecord {
            wall_time_ms: 0,
            ..self.clone()
        }
    }
}
