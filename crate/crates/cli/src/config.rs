//! Effective settings: flags override the JSON config file, which overrides
//! the defaults.

use std::path::Path;

use anyhow::Context;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub seed: u64,
    /// Alphabet size for randomized checks.
    pub n: usize,
    /// Grid resolution for binary checks.
    pub grid: usize,
    /// Random trials per check.
    pub trials: u64,
    /// Sampled (P, Q) pairs per fit.
    pub sample_pairs: usize,
    /// Knots per fit.
    pub knots: usize,
    /// Table knots for generated families.
    pub samples: usize,
    pub format: Format,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            seed: 42,
            n: 3,
            grid: 20,
            trials: 10_000,
            sample_pairs: 1000,
            knots: 48,
            samples: 4096,
            format: Format::Json,
        }
    }
}

/// Flag values; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub grid: Option<usize>,
    pub trials: Option<u64>,
    pub sample_pairs: Option<usize>,
    pub knots: Option<usize>,
    pub samples: Option<usize>,
    pub format: Option<Format>,
}

impl Settings {
    pub fn load(path: Option<&Path>, flags: &Overrides) -> anyhow::Result<Self> {
        let mut settings = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => Self::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {$(
                if let Some(v) = flags.$field.clone() {
                    settings.$field = v;
                }
            )*};
        }
        apply!(seed, n, grid, trials, sample_pairs, knots, samples, format);
        Ok(settings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, r#"{"seed": 7, "grid": 5}"#).unwrap();
        let flags = Overrides { grid: Some(9), ..Default::default() };
        let s = Settings::load(Some(&path), &flags).unwrap();
        assert_eq!((s.seed, s.grid, s.n), (7, 9, 3));
        assert_eq!(Settings::load(None, &Overrides::default()).unwrap(), Settings::default());
        std::fs::write(&path, r#"{"sead": 7}"#).unwrap();
        assert!(Settings::load(Some(&path), &flags).is_err());
    }
}
