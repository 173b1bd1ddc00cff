use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Reads a JSON object from `path`, or an empty object.
pub fn load_file(path: Option<&Path>) -> CliResult<Value> {
    let Some(path) = path else { return Ok(Value::Object(Map::new())) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config `{}`: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("config `{}` is not valid JSON: {e}", path.display())))?;
    if !value.is_object() {
        return Err(CliError::Config(format!("config `{}` must hold a JSON object", path.display())));
    }
    Ok(value)
}

fn overlay(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => overlay(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, t) => *b = t,
    }
}

fn strip_nulls(v: &mut Value) {
    if let Value::Object(m) = v {
        m.retain(|_, x| !x.is_null());
        m.values_mut().for_each(strip_nulls);
    }
}

/// File values overridden by every flag that was given.
pub fn resolve<C: DeserializeOwned, A: Serialize>(file: Value, args: &A) -> CliResult<C> {
    let mut merged = file;
    let mut flags = serde_json::to_value(args)?;
    strip_nulls(&mut flags);
    overlay(&mut merged, flags);
    serde_json::from_value(merged).map_err(|e| CliError::Config(format!("invalid configuration: {e}")))
}

/// Hex SHA-256 of the canonical (key-sorted, compact) JSON of the command
/// name and its resolved configuration.
pub fn config_hash<C: Serialize>(command: &str, config: &C) -> CliResult<String> {
    let canonical = serde_json::to_string(&serde_json::json!({ "command": command, "config": config }))?;
    let digest = Sha256::digest(canonical.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

pub fn is_false(b: &bool) -> bool {
    !*b
}
