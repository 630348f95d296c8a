//! Flat `key = value` configuration files. Command-line flags win over file
//! entries; keys use the flag names with `-` or `_` interchangeably.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

const KNOWN_KEYS: &[&str] = &[
    "M",
    "n",
    "k",
    "epsilon",
    "sigma2",
    "ebn0_db",
    "energy",
    "es",
    "distance_unit",
    "axis",
    "grid",
    "trials",
    "seed",
    "codebook_seed",
    "constellation",
    "min_distance",
    "out",
    "format",
    "strict",
];

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    let key = key.trim().replace('-', "_");
    if key == "m" {
        "M".to_string()
    } else {
        key
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = normalize(key);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key `{key}`", lineno + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("config line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Flag value if given, else the parsed file entry.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`")))
            })
            .transpose()
    }

    /// Like [`ConfigFile::pick`] for clap value enums.
    pub fn pick_enum<T: clap::ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|v| T::from_str(v, true).map_err(|e| CliError::Usage(format!("config key `{key}`: {e}"))))
            .transpose()
    }
}
