use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one exhaustive or numeric check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub params: Value,
    pub domain_size: u64,
    pub image_size: u64,
    pub pass: bool,
    pub counterexample: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Report {
    pub fn new(check: impl Into<String>, params: Value) -> Report {
        Report {
            check: check.into(),
            params,
            domain_size: 0,
            image_size: 0,
            pass: true,
            counterexample: None,
            detail: None,
        }
    }

    /// Records the first failure; later ones are ignored.
    pub fn fail(&mut self, counterexample: Option<Value>, detail: impl Into<String>) {
        if self.pass {
            self.pass = false;
            self.counterexample = counterexample;
            self.detail = Some(detail.into());
        }
    }
}
