use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use semistable_core::ser::MAX_SAFE_INTEGER;

pub const SCHEMA_VERSION: u32 = 1;

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the source literature.
    Paper,
    /// True by construction.
    Trivial,
    /// Recomputed independently.
    Derived,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: Value::Null,
            checks: Vec::new(),
            meta: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.to_string(), to_json(value));
        self
    }

    pub fn results(mut self, value: impl Serialize) -> Self {
        self.results = to_json(value);
        self
    }

    /// Records `expected == actual`.
    pub fn check_eq<T: Serialize + PartialEq>(
        &mut self,
        name: &str,
        expected: T,
        actual: T,
        provenance: Provenance,
    ) {
        let pass = expected == actual;
        self.checks.push(Check {
            name: name.to_string(),
            expected: to_json(expected),
            actual: to_json(actual),
            pass,
            provenance,
        });
    }

    pub fn check(&mut self, name: &str, pass: bool, provenance: Provenance) {
        self.check_eq(name, true, pass, provenance);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_value(&self) -> Value {
        to_json(self)
    }
}

pub fn to_json(value: impl Serialize) -> Value {
    exact(serde_json::to_value(value).expect("report values serialize"))
}

/// Integers outside `±(2⁵³ − 1)` become decimal strings.
fn exact(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let unsafe_int = n.as_u64().is_some_and(|x| x > MAX_SAFE_INTEGER)
                || n.as_i64()
                    .is_some_and(|x| x.unsigned_abs() > MAX_SAFE_INTEGER);
            if unsafe_int {
                Value::String(n.to_string())
            } else {
                Value::Number(n)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(exact).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, exact(v))).collect()),
        other => other,
    }
}

pub fn summary(report: &Report) -> Value {
    json!({
        "command": report.command,
        "checks": report.checks.len(),
        "failed": report.checks.iter().filter(|c| !c.pass).count(),
        "pass": report.all_pass(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_integers_become_strings() {
        assert_eq!(to_json(1u64 << 53), json!("9007199254740992"));
        assert_eq!(to_json(MAX_SAFE_INTEGER), json!(9007199254740991u64));
        assert_eq!(to_json(-(1i64 << 60)), json!("-1152921504606846976"));
        assert_eq!(
            to_json(vec![1u64, u64::MAX]),
            json!([1, "18446744073709551615"])
        );
    }

    #[test]
    fn failed_check_is_recorded() {
        let mut r = Report::new("x");
        r.check_eq("eq", 1, 2, Provenance::Derived);
        assert!(!r.all_pass());
        assert_eq!(r.to_value()["checks"][0]["provenance"], "derived");
    }
}
