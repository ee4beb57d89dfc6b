//! Versioned JSON envelope shared by every command.
//!
//! Everything nondeterministic (wall-clock timings, the worker count) lives
//! under keys listed in [`RUNTIME_KEYS`] so reports can be compared after
//! [`strip_runtime`].

use serde::Serialize;
use serde_json::Value;

use crate::gf::FieldSpec;

pub const ARTIFACT: &str = "boundspec";
pub const SCHEMA_VERSION: u32 = 1;
pub const RUNTIME_KEYS: &[&str] = &["runtime", "elapsed_ms"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub field: String,
    pub modulus: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicate: Option<String>,
    pub budget: u64,
    pub samples: u64,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(field: &FieldSpec, budget: u64, samples: u64, seed: u64) -> Self {
        RunConfig {
            field: field.name(),
            modulus: field.modulus(),
            n: None,
            construction: None,
            predicate: None,
            budget,
            samples,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Runtime {
    pub workers: usize,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub artifact: &'static str,
    pub version: &'static str,
    pub schema: u32,
    pub order_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub passed: bool,
    pub result: T,
    pub runtime: Runtime,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, config: RunConfig, passed: bool, result: T, runtime: Runtime) -> Self {
        Report {
            artifact: ARTIFACT,
            version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA_VERSION,
            order_version: crate::structure::ORDER_VERSION,
            command: command.to_string(),
            config,
            passed,
            result,
            runtime,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Remove every runtime key, at any depth.
pub fn strip_runtime(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| !RUNTIME_KEYS.contains(&k.as_str()));
            map.values_mut().for_each(strip_runtime);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_runtime),
        _ => {}
    }
}

/// Serialized form with runtime keys removed.
pub fn deterministic_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("reports serialize");
    strip_runtime(&mut v);
    serde_json::to_string(&v).expect("values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stripping_removes_nested_runtime_keys_only() {
        let mut v = serde_json::json!({"a": 1, "elapsed_ms": 3, "runtime": {"workers": 2},
            "list": [{"elapsed_ms": 9, "b": true}]});
        strip_runtime(&mut v);
        assert_eq!(v, serde_json::json!({"a": 1, "list": [{"b": true}]}));
    }

    #[test]
    fn envelope_echoes_config() {
        let f = FieldSpec::gf4();
        let r = Report::new("x", RunConfig::new(&f, 5, 6, 7), true, 1u8, Runtime { workers: 1, elapsed_ms: 0 });
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["config"]["seed"], 7);
        assert_eq!(v["config"]["budget"], 5);
        assert_eq!(v["config"]["modulus"], 7);
        assert_eq!(v["artifact"], ARTIFACT);
    }
}
