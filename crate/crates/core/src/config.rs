//! Run configuration: a `key = value` text file, then `key=value` overrides.
//!
//! ```text
//! # lines starting with '#' are ignored
//! zero_table = data/zeros_certify.txt
//! candidate_re = 14685.51615614841236
//! candidate_im = 0.0798327
//! n = 11
//! ```

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ball::{DEFAULT_PREC, MAX_PREC};
use crate::search;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("bad value for {key}: {value:?}")]
    BadValue { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

/// Bundled zero tables.
pub fn bundled_table(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub const SEARCH_TABLE: &str = "zeros_search_1000.txt";
pub const CERTIFY_TABLE: &str = "zeros_certify.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Table path; commands fall back to the bundled table that suits them.
    pub zero_table: Option<PathBuf>,
    /// Overrides the table's own header.
    pub declared_abs_error: Option<String>,
    pub rh_verified_height: Option<String>,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
    pub y_start: f64,
    pub y_cap: f64,
    pub max_iter: usize,
    pub n_search: usize,
    pub n_start: usize,
    /// Fixed truncation order for the contour; swept from `n_start` if unset.
    pub n: Option<usize>,
    pub candidate_re: Option<String>,
    pub candidate_im: Option<String>,
    pub x0: Option<String>,
    pub x1: Option<String>,
    pub y0: Option<String>,
    pub y1: Option<String>,
    pub m: usize,
    /// The Rouché circle has radius `2^-radius_exp`.
    pub radius_exp: u32,
    pub seg_len: String,
    pub precision_bits: u32,
    pub max_precision_bits: u32,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            zero_table: None,
            declared_abs_error: None,
            rh_verified_height: None,
            t_min: 14600.0,
            t_max: 14800.0,
            step: search::DEFAULT_STEP,
            y_start: search::DEFAULT_Y_START,
            y_cap: search::DEFAULT_Y_CAP,
            max_iter: search::DEFAULT_MAX_ITER,
            n_search: search::DEFAULT_N_SEARCH,
            n_start: 10,
            n: None,
            candidate_re: None,
            candidate_im: None,
            x0: None,
            x1: None,
            y0: None,
            y1: None,
            m: 4520,
            radius_exp: 20,
            seg_len: "1e-6".into(),
            precision_bits: DEFAULT_PREC,
            max_precision_bits: MAX_PREC,
            threads: None,
            output: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue { key: key.into(), value: value.into() })
}

fn decimal(key: &str, value: &str) -> Result<String, ConfigError> {
    let v = value.trim();
    if v.parse::<f64>().map(f64::is_finite).unwrap_or(false) {
        Ok(v.to_string())
    } else {
        Err(ConfigError::BadValue { key: key.into(), value: value.into() })
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Applies `key=value`.
    pub fn apply_override(&mut self, kv: &str) -> Result<(), ConfigError> {
        let (k, v) = kv.split_once('=').ok_or_else(|| ConfigError::Invalid(format!("override {kv:?} lacks '='")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "zero_table" => self.zero_table = Some(PathBuf::from(value)),
            "declared_abs_error" => self.declared_abs_error = Some(value.into()),
            "rh_verified_height" => self.rh_verified_height = Some(decimal(key, value)?),
            "t_min" => self.t_min = parse(key, value)?,
            "t_max" => self.t_max = parse(key, value)?,
            "step" => self.step = parse(key, value)?,
            "y_start" => self.y_start = parse(key, value)?,
            "y_cap" => self.y_cap = parse(key, value)?,
            "max_iter" => self.max_iter = parse(key, value)?,
            "n_search" => self.n_search = parse(key, value)?,
            "n_start" => self.n_start = parse(key, value)?,
            "n" => self.n = Some(parse(key, value)?),
            "candidate_re" => self.candidate_re = Some(decimal(key, value)?),
            "candidate_im" => self.candidate_im = Some(decimal(key, value)?),
            "x0" => self.x0 = Some(decimal(key, value)?),
            "x1" => self.x1 = Some(decimal(key, value)?),
            "y0" => self.y0 = Some(decimal(key, value)?),
            "y1" => self.y1 = Some(decimal(key, value)?),
            "m" => self.m = parse(key, value)?,
            "radius_exp" => self.radius_exp = parse(key, value)?,
            "seg_len" => self.seg_len = decimal(key, value)?,
            "precision_bits" => self.precision_bits = parse(key, value)?,
            "max_precision_bits" => self.max_precision_bits = parse(key, value)?,
            "threads" => self.threads = Some(parse(key, value)?),
            "output" => self.output = Some(PathBuf::from(value)),
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        if !(self.t_min < self.t_max) {
            return bad("t_min must be below t_max");
        }
        if !(self.step > 0.0) {
            return bad("step must be positive");
        }
        if !(self.y_start > 0.0 && self.y_start < self.y_cap) {
            return bad("need 0 < y_start < y_cap");
        }
        if self.max_iter == 0 || self.n_search == 0 || self.n_start == 0 || self.m == 0 {
            return bad("iteration counts and truncation orders must be positive");
        }
        if self.n == Some(0) {
            return bad("n must be positive");
        }
        if !(1..=60).contains(&self.radius_exp) {
            return bad("radius_exp must lie in 1..=60");
        }
        if !(self.seg_len.parse::<f64>().map(|s| s > 0.0).unwrap_or(false)) {
            return bad("seg_len must be positive");
        }
        if !(64..=self.max_precision_bits).contains(&self.precision_bits) || self.max_precision_bits > MAX_PREC {
            return bad("need 64 <= precision_bits <= max_precision_bits <= 8192");
        }
        let contour = [&self.x0, &self.x1, &self.y0, &self.y1];
        let given = contour.iter().filter(|c| c.is_some()).count();
        if given != 0 && given != 4 {
            return bad("give all of x0, x1, y0, y1 or none");
        }
        if self.candidate_re.is_some() != self.candidate_im.is_some() {
            return bad("give both candidate_re and candidate_im");
        }
        Ok(())
    }

    /// The fixed contour, when all four sides are given.
    pub fn contour(&self) -> Option<[&str; 4]> {
        Some([self.x0.as_deref()?, self.x1.as_deref()?, self.y0.as_deref()?, self.y1.as_deref()?])
    }

    pub fn table_path(&self, fallback: &str) -> PathBuf {
        self.zero_table.clone().unwrap_or_else(|| bundled_table(fallback))
    }
}
