//! Schema compiler and gatekeeper for RDF resources.
//!
//! A definition (OWL classes annotated with compact property definitions) is
//! loaded into a [`schema::Schema`], checked, and then either emitted as
//! ShEx, OWL, documentation and other artifacts, or used to validate data and
//! compare it with the structure recovered from a dataset.

use std::fmt;

use serde::Serialize;

pub mod emit;
pub mod rdf;
pub mod recover;
pub mod schema;
pub mod validate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

/// Pretty JSON with object keys sorted at every level and a trailing newline.
pub fn canonical_json(value: &impl Serialize) -> String {
    fn sorted(v: serde_json::Value) -> serde_json::Value {
        match v {
            serde_json::Value::Object(map) => {
                let entries: std::collections::BTreeMap<String, serde_json::Value> =
                    map.into_iter().map(|(k, v)| (k, sorted(v))).collect();
                serde_json::Value::Object(entries.into_iter().collect())
            }
            serde_json::Value::Array(items) => serde_json::Value::Array(items.into_iter().map(sorted).collect()),
            other => other,
        }
    }
    let value = serde_json::to_value(value).expect("report types serialize to JSON");
    let mut text = serde_json::to_string_pretty(&sorted(value)).expect("JSON values always serialize");
    text.push('\n');
    text
}
