use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::{Command, Format};
use crate::error::CliError;

/// Contents of a `--config` file. `params` keys are the subcommand's long
/// flag names.
#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Map<String, Value>,
}

pub fn load(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::param(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::param(format!("config {}: {e}", path.display())))
}

/// Flags override config entries; unset flags (None, false) leave them.
fn merge<T: Serialize + DeserializeOwned>(
    flags: &T,
    config: &Map<String, Value>,
) -> Result<T, CliError> {
    let mut merged = config.clone();
    if let Value::Object(given) =
        serde_json::to_value(flags).map_err(|e| CliError::param(e.to_string()))?
    {
        for (key, value) in given {
            if value.is_null() || value == Value::Bool(false) {
                continue;
            }
            merged.insert(key, value);
        }
    }
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::param(format!("params: {e}")))
}

pub fn merge_command(command: &Command, config: &ConfigFile) -> Result<Command, CliError> {
    if let Some(name) = &config.command {
        if name != command.name() {
            return Err(CliError::param(format!(
                "config is for '{name}', invoked '{}'",
                command.name()
            )));
        }
    }
    let p = &config.params;
    Ok(match command {
        Command::Primes(f) => Command::Primes(merge(f, p)?),
        Command::Sum(f) => Command::Sum(merge(f, p)?),
        Command::Sharpness(f) => Command::Sharpness(merge(f, p)?),
        Command::Partition(f) => Command::Partition(merge(f, p)?),
        Command::Vmvt(f) => Command::Vmvt(merge(f, p)?),
        Command::Roots(f) => Command::Roots(merge(f, p)?),
        Command::Equidist(f) => Command::Equidist(merge(f, p)?),
        Command::Charsum(f) => Command::Charsum(merge(f, p)?),
        Command::Approx(f) => Command::Approx(merge(f, p)?),
    })
}

pub fn params_value(command: &Command) -> Value {
    let v = match command {
        Command::Primes(p) => serde_json::to_value(p),
        Command::Sum(p) => serde_json::to_value(p),
        Command::Sharpness(p) => serde_json::to_value(p),
        Command::Partition(p) => serde_json::to_value(p),
        Command::Vmvt(p) => serde_json::to_value(p),
        Command::Roots(p) => serde_json::to_value(p),
        Command::Equidist(p) => serde_json::to_value(p),
        Command::Charsum(p) => serde_json::to_value(p),
        Command::Approx(p) => serde_json::to_value(p),
    };
    v.expect("parameter structs serialize")
}
