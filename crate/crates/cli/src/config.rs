//! `key = value` config files merged under command-line flags.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Values from a config file. Keys are normalized to the flag spelling (`t-end`).
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (k, v) in active_flux::io::parse_key_values(text)? {
            let key = k.replace('_', "-");
            if values.insert(key.clone(), v).is_some() {
                return Err(CliError::Usage(format!("config key {key:?} given twice")));
            }
        }
        Ok(Self { values })
    }

    /// Rejects keys that the command does not know.
    pub fn check_keys(&self, known: &[&str]) -> Result<(), CliError> {
        match self.values.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(CliError::Usage(format!("unknown config key {k:?} (known: {})", known.join(", ")))),
            None => Ok(()),
        }
    }

    /// The flag value if given, otherwise the parsed config value.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("config key {key}: {e}"))))
            .transpose()
    }

    pub fn require<T>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.pick(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("--{key} is required (flag or config file)")))
    }
}

/// `on`/`off` switch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl FromStr for Switch {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "on" | "true" | "yes" | "1" => Ok(Switch::On),
            "off" | "false" | "no" | "0" => Ok(Switch::Off),
            _ => Err(format!("expected on or off, got {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Bin,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bin" => Ok(Format::Bin),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("expected bin or csv, got {s:?}")),
        }
    }
}

/// Comma-separated list, e.g. `32,64,128`.
#[derive(Clone, Debug, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<T>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_wins_over_file() {
        let c = ConfigFile::parse("nx = 10\nt_end = 0.5 # comment\n").unwrap();
        assert_eq!(c.pick(Some(20usize), "nx").unwrap(), Some(20));
        assert_eq!(c.pick(None::<usize>, "nx").unwrap(), Some(10));
        assert_eq!(c.pick(None::<f64>, "t-end").unwrap(), Some(0.5));
        assert_eq!(c.pick(None::<f64>, "cfl").unwrap(), None);
    }

    #[test]
    fn bad_values_and_keys() {
        let c = ConfigFile::parse("nx = ten\n").unwrap();
        assert!(c.pick(None::<usize>, "nx").is_err());
        assert!(c.check_keys(&["ny"]).is_err());
        assert!(ConfigFile::parse("nx = 1\nnx = 2\n").is_err());
        assert!(ConfigFile::parse("just words\n").is_err());
    }

    #[test]
    fn lists_and_switches() {
        assert_eq!("32, 64,128".parse::<List<usize>>().unwrap(), List(vec![32, 64, 128]));
        assert!("32,x".parse::<List<usize>>().is_err());
        assert_eq!("ON".parse::<Switch>().unwrap(), Switch::On);
        assert!("maybe".parse::<Switch>().is_err());
    }
}
