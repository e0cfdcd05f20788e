//! Campaign configuration: defaults, a flat `key = value` file format, and
//! command-line overrides.
//!
//! ```text
//! # comments and blank lines are ignored
//! seed = 42
//! n_instances = 1000
//! alphas = 0.3, 0.5, 0.8, 1.0, 1.5
//! pl_range = 0.05, 5
//! format = csv
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown output format {other:?} (expected json or csv)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    pub n_instances: usize,
    /// Orders `>= 1` are used by the Riemann–Liouville bounds only.
    pub alphas: Vec<f64>,
    /// Fixed p values; when absent each instance draws `p·(b−a)` from `pl_range`.
    pub p_list: Option<Vec<f64>>,
    pub pl_range: (f64, f64),
    pub left_range: (f64, f64),
    pub length_range: (f64, f64),
    pub coef_range: (f64, f64),
    /// Relative frequency of ODE-generated functions (closed forms have weight 1).
    pub ode_weight: f64,
    pub tol: f64,
    /// Also evaluate D4/D5 with the printed `sech(p(b−a))` constant.
    pub probe: bool,
    #[serde(skip)]
    pub format: OutputFormat,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub csv_output: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 42,
            n_instances: 1000,
            alphas: vec![0.3, 0.5, 0.8, 1.0, 1.5],
            p_list: None,
            pl_range: (0.05, 5.0),
            left_range: (-1.0, 1.0),
            length_range: (0.2, 4.0),
            coef_range: (0.1, 2.0),
            ode_weight: 0.0,
            tol: 1e-8,
            probe: true,
            format: OutputFormat::Json,
            output: None,
            csv_output: None,
        }
    }
}

pub fn parse_list(value: &str) -> Result<Vec<f64>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("not a number: {s:?}")))
        .collect()
}

pub fn parse_pair(value: &str) -> Result<(f64, f64), String> {
    match parse_list(value)?.as_slice() {
        [lo, hi] => Ok((*lo, *hi)),
        _ => Err(format!("expected two comma-separated numbers, got {value:?}")),
    }
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("not a boolean: {value:?}")),
    }
}

impl CampaignConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        let num = |v: &str| v.parse::<f64>().map_err(|_| format!("{key}: not a number: {v:?}"));
        match key.trim() {
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| format!("seed: not an unsigned integer: {value:?}"))?
            }
            "n" | "n_instances" => {
                self.n_instances = value
                    .parse()
                    .map_err(|_| format!("{key}: not an unsigned integer: {value:?}"))?
            }
            "alphas" | "alpha" => self.alphas = parse_list(value)?,
            "p" | "p_list" => self.p_list = Some(parse_list(value)?),
            "pl_range" => self.pl_range = parse_pair(value)?,
            "left_range" => self.left_range = parse_pair(value)?,
            "length_range" => self.length_range = parse_pair(value)?,
            "coef_range" => self.coef_range = parse_pair(value)?,
            "ode_weight" => self.ode_weight = num(value)?,
            "tol" => self.tol = num(value)?,
            "probe" => self.probe = parse_bool(value)?,
            "format" => self.format = value.parse()?,
            "output" => self.output = Some(PathBuf::from(value)),
            "csv_output" => self.csv_output = Some(PathBuf::from(value)),
            other => return Err(format!("unknown configuration key {other:?}")),
        }
        Ok(())
    }

    /// Applies every setting in a config file's text.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value, got {line:?}", n + 1))?;
            self.set(key, value).map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigFileError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigFileError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = CampaignConfig::default();
        cfg.apply_text(&text).map_err(ConfigFileError::Invalid)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n_instances == 0 {
            return Err("n_instances must be >= 1".into());
        }
        if self.alphas.is_empty() {
            return Err("alphas must be nonempty".into());
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(format!("alpha must be positive, got {a}"));
        }
        if let Some(ps) = &self.p_list {
            if ps.is_empty() {
                return Err("p list must be nonempty".into());
            }
            if let Some(p) = ps.iter().find(|p| !(p.is_finite() && **p != 0.0)) {
                return Err(format!("p values must be finite and nonzero, got {p}"));
            }
        }
        let (lo, hi) = self.pl_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(format!("pl_range must satisfy 0 < lo <= hi, got [{lo}, {hi}]"));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(format!("tol must be >= 0, got {}", self.tol));
        }
        self.gen_config().validate().map_err(|e| e.to_string())
    }

    pub fn gen_config(&self) -> hypfrac_core::generator::GenConfig {
        hypfrac_core::generator::GenConfig {
            seed: self.seed,
            closed_form_weight: 1.0,
            ode_weight: self.ode_weight,
            left_range: self.left_range,
            length_range: self.length_range,
            coef_range: self.coef_range,
            ..Default::default()
        }
    }
}

#[derive(Debug)]
pub enum ConfigFileError {
    Io(String),
    Invalid(String),
}

impl fmt::Display for ConfigFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigFileError::Io(m) | ConfigFileError::Invalid(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for ConfigFileError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_text_overrides_defaults() {
        let mut c = CampaignConfig::default();
        c.apply_text("# campaign\nseed = 7\n\nalphas = 0.5, 1.5\np = 1, 2\nformat = csv\nprobe = no\n")
            .unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.alphas, vec![0.5, 1.5]);
        assert_eq!(c.p_list, Some(vec![1.0, 2.0]));
        assert_eq!(c.format, OutputFormat::Csv);
        assert!(!c.probe);
        assert_eq!(c.n_instances, 1000);
        c.validate().unwrap();
    }

    #[test]
    fn bad_settings_are_rejected() {
        let mut c = CampaignConfig::default();
        assert!(c.apply_text("seed 7").is_err());
        assert!(c.apply_text("colour = blue").is_err());
        assert!(c.apply_text("pl_range = 1").is_err());
        c.set("n", "0").unwrap();
        assert!(c.validate().is_err());
        let mut c = CampaignConfig::default();
        c.set("alphas", "0.5, -1").unwrap();
        assert!(c.validate().is_err());
    }
}
