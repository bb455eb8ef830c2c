use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one check. A failing verdict always carries a witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub witness: Option<Value>,
    pub metrics: BTreeMap<String, f64>,
}

impl Verdict {
    pub fn pass(check: &str) -> Self {
        Verdict {
            check: check.to_string(),
            pass: true,
            witness: None,
            metrics: BTreeMap::new(),
        }
    }

    pub fn fail(check: &str, witness: Value) -> Self {
        Verdict {
            check: check.to_string(),
            pass: false,
            witness: Some(witness),
            metrics: BTreeMap::new(),
        }
    }

    /// Pass unless a witness is given.
    pub fn from_witness(check: &str, witness: Option<Value>) -> Self {
        match witness {
            Some(w) => Verdict::fail(check, w),
            None => Verdict::pass(check),
        }
    }

    pub fn metric(mut self, name: &str, value: f64) -> Self {
        self.metrics.insert(name.to_string(), value);
        self
    }
}
