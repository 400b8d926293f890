//! Loading scenario documents and applying `--set key=value` overrides.

use std::path::Path;

use isac_core::{default_config, Error, Scenario, ScenarioConfig};
use serde_json::Value;

use crate::Failure;

/// One parsed `--set` override.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub key: String,
    pub value: Value,
}

impl std::str::FromStr for Override {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (key, raw) = s
            .split_once('=')
            .ok_or_else(|| format!("override `{s}` is not of the form key=value"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(format!("override `{s}` has an empty key"));
        }
        // JSON literals (numbers, booleans, null, arrays) parse as such;
        // anything else is taken as a bare string.
        let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
        Ok(Override {
            key: key.to_string(),
            value,
        })
    }
}

impl std::fmt::Display for Override {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}={}", self.key, self.value)
    }
}

/// Writes `value` at the dotted `key` inside `doc`. Numeric segments index
/// arrays; the parent of the final segment must already exist.
pub fn apply_override(doc: &mut Value, ov: &Override) -> Result<(), Error> {
    let invalid = |msg: &str| Error::Invalid {
        path: ov.key.clone(),
        message: msg.to_string(),
    };
    let segments: Vec<&str> = ov.key.split('.').collect();
    let (last, parents) = segments.split_last().expect("split yields at least one segment");
    let mut node = doc;
    for seg in parents {
        node = match node {
            Value::Object(map) => map.get_mut(*seg),
            Value::Array(items) => seg.parse::<usize>().ok().and_then(|i| items.get_mut(i)),
            _ => None,
        }
        .ok_or_else(|| invalid("no such configuration section"))?;
    }
    match node {
        Value::Object(map) => {
            map.insert(last.to_string(), ov.value.clone());
        }
        Value::Array(items) => {
            let slot = last
                .parse::<usize>()
                .ok()
                .and_then(|i| items.get_mut(i))
                .ok_or_else(|| invalid("array index out of range"))?;
            *slot = ov.value.clone();
        }
        _ => return Err(invalid("cannot set a field inside a scalar")),
    }
    Ok(())
}

/// Reads the config (or the built-in defaults), applies the overrides and
/// validates the result.
pub fn load(path: Option<&Path>, overrides: &[Override]) -> Result<(ScenarioConfig, Scenario), Failure> {
    let mut doc = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Config(Error::Config(format!("{}: {e}", p.display()))))?
        }
        None => serde_json::to_value(default_config()).expect("default config serializes"),
    };
    for ov in overrides {
        apply_override(&mut doc, ov).map_err(Failure::Config)?;
    }
    let config = ScenarioConfig::from_value(doc).map_err(Failure::Config)?;
    let scenario = Scenario::from_config(&config).map_err(Failure::Config)?;
    Ok((config, scenario))
}
