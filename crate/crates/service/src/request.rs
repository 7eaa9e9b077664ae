//! Wire types for `POST /api/evaluate`.

use serde::{Deserialize, Deserializer, Serialize};
use trendcheck_core::{DiscoveredStatement, SupportEstimate, SupportResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Support,
    Mss,
    Tightest,
    All,
}

impl Task {
    pub fn wants_support(self) -> bool {
        matches!(self, Task::Support | Task::All)
    }

    pub fn wants_mss(self) -> bool {
        matches!(self, Task::Mss | Task::All)
    }

    pub fn wants_tightest(self) -> bool {
        matches!(self, Task::Tightest | Task::All)
    }
}

/// `null` means unbounded on that side.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundsInput {
    #[serde(default)]
    pub lower: Option<f64>,
    #[serde(default)]
    pub upper: Option<f64>,
}

/// Raw trend values; parsed server-side according to `trend_is_date`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeInput {
    #[serde(deserialize_with = "raw_value")]
    pub from: String,
    #[serde(deserialize_with = "raw_value")]
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionsInput {
    pub begin: RangeInput,
    pub end: RangeInput,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingInput {
    #[serde(default)]
    pub budgets: Option<Vec<u64>>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRequest {
    pub dataset_id: String,
    pub task: Task,
    pub target_column: String,
    pub trend_column: String,
    #[serde(default)]
    pub trend_is_date: bool,
    #[serde(default)]
    pub bounds: BoundsInput,
    pub regions: RegionsInput,
    #[serde(default)]
    pub window: Option<f64>,
    #[serde(default)]
    pub row_limit: Option<usize>,
    #[serde(default)]
    pub sampling: SamplingInput,
    #[serde(default)]
    pub mss_width: Option<f64>,
    #[serde(default)]
    pub tightest_support: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportBlock {
    /// `null` when the pair space is too large for brute force.
    pub exact_baseline: Option<SupportResult>,
    pub exact: SupportResult,
    pub random: Vec<SupportEstimate>,
}

/// Result table; anything the task did not ask for is `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResponse {
    pub support: Option<SupportBlock>,
    pub mss: Option<DiscoveredStatement>,
    pub tightest: Option<DiscoveredStatement>,
    /// The request as evaluated: seed and budgets resolved, unused
    /// conditions cleared.
    pub echo: EvaluationRequest,
    pub warnings: Vec<String>,
}

/// Accepts a JSON string or number for a raw trend value.
fn raw_value<'de, D: Deserializer<'de>>(de: D) -> Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Number(serde_json::Number),
    }
    Ok(match Raw::deserialize(de)? {
        Raw::Text(s) => s,
        Raw::Number(n) => n.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_request_defaults() {
        let req: EvaluationRequest = serde_json::from_str(
            r#"{"dataset_id":"toy","task":"support","target_column":"y","trend_column":"x",
                "regions":{"begin":{"from":"1","to":2},"end":{"from":"3","to":"4"}}}"#,
        )
        .unwrap();
        assert_eq!(req.task, Task::Support);
        assert_eq!(req.bounds, BoundsInput::default());
        assert_eq!(req.regions.begin.to, "2");
        assert_eq!(req.sampling, SamplingInput::default());
        assert!(!req.trend_is_date);
    }

    #[test]
    fn unknown_task_is_rejected() {
        let res: Result<Task, _> = serde_json::from_str("\"median\"");
        assert!(res.is_err());
    }
}
