use serde::{Deserialize, Serialize};

/// A statistic whose inputs do not determine a value (no pairs, a single
/// class, zero items). Reported as data, never as 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("not measurable: {reason}")]
pub struct NotMeasurable {
    pub reason: String,
}

impl NotMeasurable {
    pub fn new(reason: impl Into<String>) -> Self {
        NotMeasurable {
            reason: reason.into(),
        }
    }
}
