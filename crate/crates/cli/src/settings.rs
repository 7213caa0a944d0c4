//! Resolved run configuration: `key = value` file entries overridden by
//! command-line flags, with defaults recorded as they are read.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;

use chdyn::parse::{parse_complex, parse_real};
use chdyn::{Complex, Error, Result};

#[derive(Clone, Debug, Default)]
pub struct Settings {
    given: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut s = Settings::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "{}:{}: expected `key = value`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            s.given.insert(normalize(k), v.trim().to_string());
        }
        Ok(s)
    }

    /// Overrides `key` when the flag was given.
    pub fn set<T: Display>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.given.insert(normalize(key), v.to_string());
        }
    }

    pub fn set_flag(&mut self, key: &str, on: bool) {
        if on {
            self.given.insert(normalize(key), "true".into());
        }
    }

    fn raw(&mut self, key: &str, default: Option<String>) -> Option<String> {
        let v = self.given.get(key).cloned().or(default);
        if let Some(v) = &v {
            self.resolved.insert(key.to_string(), v.clone());
        }
        v
    }

    fn parsed<T>(
        &mut self,
        key: &str,
        default: Option<T>,
        f: impl Fn(&str) -> Result<T>,
    ) -> Result<T>
    where
        T: Display,
    {
        match self.raw(key, default.map(|d| d.to_string())) {
            Some(v) => f(&v).map_err(|e| Error::InvalidParameter(format!("{key}: {e}"))),
            None => Err(Error::InvalidParameter(format!(
                "missing required setting `{key}`"
            ))),
        }
    }

    pub fn string(&mut self, key: &str, default: Option<&str>) -> Result<String> {
        self.parsed(key, default.map(str::to_string), |s| Ok(s.to_string()))
    }

    pub fn opt_string(&mut self, key: &str) -> Option<String> {
        self.raw(key, None)
    }

    pub fn u32(&mut self, key: &str, default: Option<u32>) -> Result<u32> {
        self.parsed(key, default, |s| {
            s.parse()
                .map_err(|_| Error::InvalidParameter(format!("`{s}` is not a count")))
        })
    }

    pub fn usize(&mut self, key: &str, default: Option<usize>) -> Result<usize> {
        self.parsed(key, default, |s| {
            s.parse()
                .map_err(|_| Error::InvalidParameter(format!("`{s}` is not a count")))
        })
    }

    pub fn f64(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        self.parsed(key, default, parse_real)
    }

    pub fn bool(&mut self, key: &str, default: bool) -> Result<bool> {
        self.parsed(key, Some(default), |s| match s {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(Error::InvalidParameter(format!("`{s}` is not a boolean"))),
        })
    }

    pub fn complex(&mut self, key: &str, default: Option<Complex>) -> Result<Complex> {
        let d = default.map(chdyn::sphere::format_complex);
        match self.raw(key, d) {
            Some(v) => {
                parse_complex(&v).map_err(|e| Error::InvalidParameter(format!("{key}: {e}")))
            }
            None => Err(Error::InvalidParameter(format!(
                "missing required setting `{key}`"
            ))),
        }
    }

    /// The values actually used, one `key = value` per line.
    pub fn echo(&self) -> String {
        self.resolved
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_override_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment\nn = 3\nalpha = 0.7\nx-min = -2").unwrap();
        let mut s = Settings::from_file(f.path()).unwrap();
        s.set("alpha", Some("2.5"));
        assert_eq!(s.u32("n", None).unwrap(), 3);
        assert_eq!(s.complex("alpha", None).unwrap(), Complex::new(2.5, 0.0));
        assert_eq!(s.f64("x_min", None).unwrap(), -2.0);
        assert_eq!(s.u32("width", Some(64)).unwrap(), 64);
        assert_eq!(s.echo(), "alpha = 2.5\nn = 3\nwidth = 64\nx_min = -2\n");
    }

    #[test]
    fn missing_and_malformed() {
        let mut s = Settings::default();
        assert!(s.u32("n", None).is_err());
        s.set("n", Some("three"));
        assert!(s.u32("n", None).is_err());
    }
}
