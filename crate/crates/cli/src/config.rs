//! Flat TOML config file. Keys are the long flag names with `_` for `-`;
//! flags given on the command line win.

use crate::CliError;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::Path;
use toml::Table;

pub fn load(path: Option<&Path>) -> Result<Table, CliError> {
    let Some(path) = path else {
        return Ok(Table::new());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    text.parse::<Table>()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Fills options missing from `cli` with values from `file`.
pub fn merge<T: Serialize + DeserializeOwned>(cli: &T, file: &Table) -> Result<T, CliError> {
    let given = Table::try_from(cli).map_err(|e| CliError::Config(e.to_string()))?;
    let mut merged = file.clone();
    merged.extend(given);
    merged
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(format!("config: {}", e.message())))
}

pub fn get_u64(file: &Table, key: &str) -> Result<Option<u64>, CliError> {
    match file.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_integer()
            .and_then(|i| u64::try_from(i).ok())
            .map(Some)
            .ok_or_else(|| CliError::Config(format!("config: `{key}` must be a nonnegative integer"))),
    }
}

pub fn get_str(file: &Table, key: &str) -> Result<Option<String>, CliError> {
    match file.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_str()
            .map(|s| Some(s.to_owned()))
            .ok_or_else(|| CliError::Config(format!("config: `{key}` must be a string"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Serialize, Deserialize, Default, PartialEq, Debug)]
    struct Opts {
        n: Option<usize>,
        eta: Option<String>,
    }

    #[test]
    fn command_line_wins() {
        let file: Table = "n = 5\neta = \"constant:0.2\"\nunrelated = 1".parse().unwrap();
        let cli = Opts {
            n: Some(9),
            eta: None,
        };
        let m = merge(&cli, &file).unwrap();
        assert_eq!(m.n, Some(9));
        assert_eq!(m.eta.as_deref(), Some("constant:0.2"));
    }

    #[test]
    fn type_errors_are_config_errors() {
        let file: Table = "n = \"many\"".parse().unwrap();
        assert!(matches!(merge(&Opts::default(), &file), Err(CliError::Config(_))));
    }
}
