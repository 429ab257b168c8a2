//! Run configuration: command-line flags over environment over a
//! `key = value` file over defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mahler::QmcSettings;
use crate::modular::NewformSpec;
use crate::precision::{check_precision, digits_for_bits};
use crate::quadrature::{DEFAULT_SEED, MIN_SAMPLES};

pub const CACHE_ENV: &str = "MAHLERLAB_CACHE";
pub const DEFAULT_PRECISION: u32 = 128;
pub const DEFAULT_SAMPLES: u64 = 1 << 20;
pub const QMC_SHIFTS: u32 = 16;
/// Longest decimal rendering in reports.
pub const MAX_REPORT_DIGITS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidArgument(format!("unknown format `{other}` (text, json, csv)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Text => "text",
            Self::Json => "json",
            Self::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub precision: u32,
    pub seed: u64,
    pub samples: u64,
    pub filter: Vec<String>,
    pub format: OutputFormat,
    pub cache: Option<PathBuf>,
    pub digits: Option<usize>,
    /// Record wall-clock times in machine-readable reports.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision: DEFAULT_PRECISION,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            filter: Vec::new(),
            format: OutputFormat::Text,
            cache: None,
            digits: None,
            timing: false,
        }
    }
}

/// Values given explicitly on the command line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub filter: Option<Vec<String>>,
    pub format: Option<OutputFormat>,
    pub cache: Option<PathBuf>,
    pub digits: Option<usize>,
    pub timing: Option<bool>,
}

/// Accepts decimal or `0x`-prefixed hexadecimal.
pub fn parse_u64(text: &str) -> Result<u64> {
    let t = text.trim().replace('_', "");
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| Error::Parse(format!("`{text}` is not a 64-bit unsigned integer")))
}

fn parse_bool(text: &str) -> Result<bool> {
    match text.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::Parse(format!("`{text}` is not a boolean"))),
    }
}

fn split_tags(text: &str) -> Vec<String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

impl RunConfig {
    /// Defaults, then `file_text`, then `env_cache`, then `overrides`.
    pub fn layered(file_text: Option<&str>, env_cache: Option<String>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(text) = file_text {
            cfg.apply_file(text)?;
        }
        if let Some(path) = env_cache.filter(|p| !p.is_empty()) {
            cfg.cache = Some(PathBuf::from(path));
        }
        cfg.apply_overrides(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    /// [`RunConfig::layered`] reading the file from disk and the cache
    /// path from the process environment.
    pub fn resolve(file: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let text = match file {
            Some(p) => Some(std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?),
            None => None,
        };
        Self::layered(text.as_deref(), std::env::var(CACHE_ENV).ok(), overrides)
    }

    /// `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", lineno + 1)))?;
            let value = value.trim();
            let bad = |e: Error| Error::Parse(format!("config line {}: {e}", lineno + 1));
            match key.trim().replace('_', "-").as_str() {
                "precision" => self.precision = parse_u64(value).map_err(bad)? as u32,
                "seed" => self.seed = parse_u64(value).map_err(bad)?,
                "samples" | "qmc-samples" => self.samples = parse_u64(value).map_err(bad)?,
                "filter" => self.filter = split_tags(value),
                "format" | "output-format" => self.format = value.parse().map_err(bad)?,
                "cache" | "coefficient-cache-path" => self.cache = Some(PathBuf::from(value)),
                "digits" => self.digits = Some(parse_u64(value).map_err(bad)? as usize),
                "timing" => self.timing = parse_bool(value).map_err(bad)?,
                other => return Err(Error::Parse(format!("config line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(v) = o.precision {
            self.precision = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.samples {
            self.samples = v;
        }
        if let Some(v) = &o.filter {
            self.filter = v.clone();
        }
        if let Some(v) = o.format {
            self.format = v;
        }
        if let Some(v) = &o.cache {
            self.cache = Some(v.clone());
        }
        if let Some(v) = o.digits {
            self.digits = Some(v);
        }
        if let Some(v) = o.timing {
            self.timing = v;
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_precision(self.precision)?;
        if !self.samples.is_power_of_two() || self.samples < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "QMC samples must be a power of two ≥ {MIN_SAMPLES}, got {}",
                self.samples
            )));
        }
        Ok(())
    }

    pub fn qmc(&self) -> QmcSettings {
        QmcSettings { samples: self.samples, shifts: QMC_SHIFTS, seed: self.seed }
    }

    /// Digits shown for computed values.
    pub fn report_digits(&self) -> usize {
        self.digits.unwrap_or_else(|| digits_for_bits(self.precision).min(MAX_REPORT_DIGITS))
    }

    /// The newforms `f` and `h`, backed by the coefficient cache directory
    /// when one is configured.
    pub fn forms(&self) -> Result<(NewformSpec, NewformSpec)> {
        let (f, h) = (NewformSpec::f(), NewformSpec::h());
        match &self.cache {
            None => Ok((f, h)),
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
                Ok((f.with_cache_file(dir.join("f.coeffs"))?, h.with_cache_file(dir.join("h.coeffs"))?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!((c.precision, c.seed, c.samples), (128, 0x5EED, 1 << 20));
        assert!(c.validate().is_ok());
        assert_eq!(c.report_digits(), 40);
    }

    #[test]
    fn layering_order() {
        let file = "precision = 96\nseed = 0x10 # hex\nsamples=4096\ncache = /from/file\nfilter = exact, statistical\n";
        let c = RunConfig::layered(Some(file), None, &Overrides::default()).unwrap();
        assert_eq!((c.precision, c.seed, c.samples), (96, 16, 4096));
        assert_eq!(c.filter, vec!["exact", "statistical"]);
        assert_eq!(c.cache.as_deref(), Some(Path::new("/from/file")));

        let c = RunConfig::layered(Some(file), Some("/from/env".into()), &Overrides::default()).unwrap();
        assert_eq!(c.cache.as_deref(), Some(Path::new("/from/env")));

        let o = Overrides { precision: Some(200), cache: Some("/from/flag".into()), ..Default::default() };
        let c = RunConfig::layered(Some(file), Some("/from/env".into()), &o).unwrap();
        assert_eq!(c.precision, 200);
        assert_eq!(c.cache.as_deref(), Some(Path::new("/from/flag")));
        assert_eq!(c.seed, 16);
    }

    #[test]
    fn rejects_bad_values() {
        for text in ["precision = 16", "precision = 5000", "samples = 1000", "format = xml", "bogus = 1", "seed"] {
            assert!(RunConfig::layered(Some(text), None, &Overrides::default()).is_err(), "{text}");
        }
        assert_eq!(parse_u64("0x5EED").unwrap(), 0x5EED);
        assert_eq!(parse_u64("1_000").unwrap(), 1000);
        assert!(parse_u64("-1").is_err());
    }
}
