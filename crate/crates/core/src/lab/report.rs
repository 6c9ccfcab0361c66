use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "confirms_paper")]
    Confirms,
    #[serde(rename = "violates_paper")]
    Violates,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Confirms
        } else {
            Self::Violates
        }
    }

    pub fn confirms(self) -> bool {
        self == Self::Confirms
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Confirms => "confirms_paper",
            Self::Violates => "violates_paper",
        })
    }
}

/// Outcome of one security experiment. `claimed_bound` is the published
/// value the measurement was compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub experiment: String,
    pub n: u32,
    pub trace_distance: Option<f64>,
    pub success_probability: Option<f64>,
    #[serde(rename = "paper_bound")]
    pub claimed_bound: Option<f64>,
    pub verdict: Verdict,
    pub details: BTreeMap<String, Value>,
}

impl AttackReport {
    /// Empty report; the verdict starts as a violation until a check sets it.
    pub fn new(experiment: &str, n: u32) -> Self {
        Self {
            experiment: experiment.to_owned(),
            n,
            trace_distance: None,
            success_probability: None,
            claimed_bound: None,
            verdict: Verdict::Violates,
            details: BTreeMap::new(),
        }
    }

    /// Adds or replaces one entry of `details`.
    pub fn detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(
            key.to_owned(),
            serde_json::to_value(value).expect("detail values are plain data"),
        );
        self
    }

    /// `experiment n=.. verdict (distance, success, bound)` on one line.
    pub fn summary_line(&self) -> String {
        let mut s = format!("{} n={} {}", self.experiment, self.n, self.verdict);
        for (name, v) in [
            ("trace_distance", self.trace_distance),
            ("success", self.success_probability),
            ("bound", self.claimed_bound),
        ] {
            if let Some(v) = v {
                s.push_str(&format!(" {name}={v:.12}"));
            }
        }
        s
    }
}
