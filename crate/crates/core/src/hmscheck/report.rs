use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Pass,
            counterexample: None,
        }
    }

    pub fn fail(name: impl Into<String>, counterexample: Value) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Fail,
            counterexample: Some(counterexample),
        }
    }

    /// Passes when `witness` is `None`.
    pub fn from_witness(name: impl Into<String>, witness: Option<Value>) -> Self {
        match witness {
            None => Self::pass(name),
            Some(v) => Self::fail(name, v),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Topology {
    pub genus: u64,
    pub punctures: u64,
    pub chi: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HmsReport {
    pub schema: u32,
    pub input: Value,
    pub checks: Vec<CheckResult>,
    pub topology: Topology,
}

impl HmsReport {
    pub fn new(input: Value, checks: Vec<CheckResult>, topology: Topology) -> Self {
        HmsReport {
            schema: SCHEMA_VERSION,
            input,
            checks,
            topology,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(out, "{tag}  {}", c.name).unwrap();
            if let Some(v) = &c.counterexample {
                writeln!(out, "      counterexample: {v}").unwrap();
            }
        }
        let t = self.topology;
        writeln!(out, "topology: genus {} punctures {} chi {}", t.genus, t.punctures, t.chi).unwrap();
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        writeln!(out, "{passed}/{} checks passed", self.checks.len()).unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = HmsReport::new(
            serde_json::json!({"command": "affine"}),
            vec![
                CheckResult::pass("a"),
                CheckResult::fail("b", serde_json::json!({"weight": 3})),
            ],
            Topology {
                genus: 0,
                punctures: 3,
                chi: -1,
            },
        );
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["checks"][0], serde_json::json!({"name": "a", "status": "pass"}));
        assert_eq!(v["checks"][1]["counterexample"]["weight"], 3);
        assert_eq!(v["topology"]["chi"], -1);
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_text().contains("FAIL  b"));
    }
}
