//! Option resolution: a JSON config file supplies defaults, flags win.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

/// Bad flags, bad config, or unusable paths. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(message: impl fmt::Display) -> anyhow::Error {
    UsageError(message.to_string()).into()
}

/// Flag values collected as JSON under their config keys.
#[derive(Default)]
pub struct Overrides(Map<String, Value>);

impl Overrides {
    pub fn set<T: serde::Serialize>(&mut self, key: &str, value: Option<T>) -> &mut Self {
        if let Some(v) = value {
            self.0.insert(key.to_owned(), serde_json::to_value(v).expect("flag values serialize"));
        }
        self
    }

    /// Values of a JSON config file, keys normalized to underscores.
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        let Value::Object(map) = value else {
            return Err(usage(format!("config {} must hold a JSON object", path.display())));
        };
        Ok(Self(map.into_iter().map(|(k, v)| (k.replace('-', "_"), v)).collect()))
    }

    /// Entries of `other` replace entries of `self`.
    pub fn extend(&mut self, other: Overrides) {
        self.0.extend(other.0);
    }

    pub fn flag(&mut self, key: &str, on: bool) -> &mut Self {
        if on {
            self.0.insert(key.to_owned(), Value::Bool(true));
        }
        self
    }
}

/// Merge `overrides` over the config file and deserialize. Config keys may
/// use dashes or underscores.
pub fn resolve<T: DeserializeOwned>(config: Option<&Path>, overrides: Overrides) -> anyhow::Result<T> {
    let mut merged = match config {
        Some(path) => Overrides::from_file(path)?,
        None => Overrides::default(),
    };
    merged.extend(overrides);
    serde_json::from_value(Value::Object(merged.0)).map_err(|e| usage(format!("invalid options: {e}")))
}

/// Normalize a string option through `FromStr`, storing its serde form.
pub fn normalize<T>(map_key: &str, config: &mut Overrides, parse: impl Fn(&str) -> anyhow::Result<T>) -> anyhow::Result<()>
where
    T: serde::Serialize,
{
    if let Some(Value::String(s)) = config.0.get(map_key) {
        let v = parse(s)?;
        config.0.insert(map_key.to_owned(), serde_json::to_value(v)?);
    }
    Ok(())
}
