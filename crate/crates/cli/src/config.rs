//! TOML config files: one table per subcommand, keyed like the flags.
//!
//! ```toml
//! [bounds]
//! p0 = 0.55
//! p1 = 0.45
//! n-list = [100, 200]
//! ```

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

/// The table named `command`, or `T::default()` when it is absent.
pub fn section<T: DeserializeOwned + Default>(text: &str, path: &Path, command: &str) -> CliResult<T> {
    let err = |msg: String| CliError::Config { path: path.to_path_buf(), msg };
    let mut root: toml::Table = text.parse().map_err(|e: toml::de::Error| err(e.to_string()))?;
    match root.remove(command) {
        None => Ok(T::default()),
        Some(toml::Value::Table(t)) => t.try_into().map_err(|e: toml::de::Error| err(format!("[{command}]: {e}"))),
        Some(_) => Err(err(format!("`{command}` must be a table"))),
    }
}

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>, command: &str) -> CliResult<T> {
    let Some(path) = path else { return Ok(T::default()) };
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    section(&text, path, command)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commands::BoundsArgs;

    #[test]
    fn flags_override_config() {
        let text = "[bounds]\np0 = 0.3\nn-list = [10, 20]\nseed = 4\n[other]\nx = 1\n";
        let cfg: BoundsArgs = section(text, Path::new("c.toml"), "bounds").unwrap();
        assert_eq!(cfg.n_list, Some(vec![10, 20]));
        let flags = BoundsArgs { p0: Some(0.4), ..Default::default() };
        let merged = flags.over(cfg);
        assert_eq!(merged.p0, Some(0.4));
        assert_eq!(merged.seed, Some(4));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(section::<BoundsArgs>("[bounds]\nbogus = 1\n", Path::new("c"), "bounds").is_err());
        assert!(section::<BoundsArgs>("bounds = 3\n", Path::new("c"), "bounds").is_err());
        assert_eq!(section::<BoundsArgs>("", Path::new("c"), "bounds").unwrap(), BoundsArgs::default());
    }
}
