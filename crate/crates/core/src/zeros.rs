//! Tables of positive ordinates of nontrivial zeta zeros.
//!
//! File format: UTF-8 text, one ordinate per line, optionally prefixed by its
//! 1-based index. Lines starting with `#` are comments; two of them are
//! understood as headers:
//!
//! ```text
//! # declared_abs_error: 2^-102
//! # rh_verified_height: 3e10
//! 1 14.134725141734693790457251983562470270784
//! 2 21.022039638771554992628479593896902777334
//! ```
//!
//! Every ordinate becomes a ball of radius `declared_abs_error` (plus the
//! binary conversion error) around the parsed decimal.

use std::fmt::Write as _;
use std::path::Path;

use rug::float::Round;
use rug::Float;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ball::{ComplexBall, NumError, RealBall, DEFAULT_PREC, RAD_PREC};

/// Height up to which RH is taken as numerically verified.
pub const DEFAULT_RH_HEIGHT: &str = "3e10";

/// Declared error of a certify-grade table must not exceed this.
pub const CERTIFY_MAX_ERROR_LOG2: i32 = -102;

const GAMMA1_ANCHOR: &str = "14.1347251417";

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read zero table {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no declared absolute error (pass one or add a `# declared_abs_error:` header)")]
    MissingError,
    #[error("declared absolute error must be positive, got {0}")]
    BadError(String),
    #[error("ordinates not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("first ordinate does not match 14.1347251417")]
    AnchorMismatch,
    #[error("table is empty")]
    Empty,
    #[error("requested {requested} zeros but the table holds {available}")]
    Insufficient { requested: usize, available: usize },
}

/// One ordinate with its enclosure.
#[derive(Debug, Clone)]
pub struct ZetaZero {
    pub index: usize,
    pub ordinate: RealBall,
    text: String,
}

impl ZetaZero {
    /// The decimal as it appeared in the source file.
    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Validated, strictly increasing ordinates `gamma_1 < gamma_2 < ...`.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    zeros: Vec<ZetaZero>,
    declared_abs_error: Float,
    declared_abs_error_text: String,
    source_digest: String,
    rh_verified_height: RealBall,
    comments: Vec<String>,
    raw: Vec<u8>,
}

/// Parses an absolute error such as `1e-15` or `2^-102` into an upward-rounded float.
pub fn parse_abs_error(s: &str) -> Result<Float, TableError> {
    let t = s.trim();
    let bad = || TableError::BadError(t.to_string());
    let value = if let Some(exp) = t.strip_prefix("2^") {
        let k: i32 = exp.trim().parse().map_err(|_| bad())?;
        let mut v = Float::with_val(RAD_PREC, 1);
        v <<= k;
        v
    } else {
        let parsed = Float::parse(t).map_err(|_| bad())?;
        Float::with_val_round(RAD_PREC, parsed, Round::Up).0
    };
    if !(value > 0) || !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

impl ZeroTable {
    /// Reads and validates a table file. `declared_abs_error` overrides the
    /// file header when given.
    pub fn load(path: impl AsRef<Path>, declared_abs_error: Option<&str>) -> Result<Self, TableError> {
        let path = path.as_ref();
        let raw = std::fs::read(path)
            .map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
        Self::from_bytes(raw, declared_abs_error)
    }

    pub fn from_bytes(raw: Vec<u8>, declared_abs_error: Option<&str>) -> Result<Self, TableError> {
        let text = String::from_utf8(raw.clone())
            .map_err(|_| TableError::Parse { line: 0, msg: "not valid UTF-8".into() })?;
        let mut header_error = None;
        let mut rh_height = DEFAULT_RH_HEIGHT.to_string();
        let mut comments = Vec::new();
        let mut entries: Vec<(usize, String)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(v) = comment.strip_prefix("declared_abs_error:") {
                    header_error = Some(v.trim().to_string());
                } else if let Some(v) = comment.strip_prefix("rh_verified_height:") {
                    rh_height = v.trim().to_string();
                }
                comments.push(comment.to_string());
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let value = match fields.as_slice() {
                [v] => *v,
                [idx, v] => {
                    let idx: usize = idx.parse().map_err(|_| TableError::Parse {
                        line: line_no,
                        msg: format!("bad index {idx:?}"),
                    })?;
                    if idx != entries.len() + 1 {
                        return Err(TableError::Parse {
                            line: line_no,
                            msg: format!("expected index {}, found {idx}", entries.len() + 1),
                        });
                    }
                    *v
                }
                _ => {
                    return Err(TableError::Parse { line: line_no, msg: "expected `[index] ordinate`".into() })
                }
            };
            entries.push((line_no, value.to_string()));
        }

        let err_text = declared_abs_error
            .map(str::to_string)
            .or(header_error)
            .ok_or(TableError::MissingError)?;
        let declared = parse_abs_error(&err_text)?;
        let rh_verified_height = RealBall::from_decimal(DEFAULT_PREC, &rh_height)
            .map_err(|_| TableError::Parse { line: 0, msg: format!("bad rh_verified_height {rh_height:?}") })?;

        let mut zeros = Vec::with_capacity(entries.len());
        for (i, (line_no, value)) in entries.into_iter().enumerate() {
            let ordinate = ordinate_ball(DEFAULT_PREC, &value, &declared).map_err(|e| TableError::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            if !ordinate.is_positive() {
                return Err(TableError::Parse { line: line_no, msg: "ordinate must be positive".into() });
            }
            zeros.push(ZetaZero { index: i + 1, ordinate, text: value });
        }
        let first = zeros.first().ok_or(TableError::Empty)?;
        let anchor = RealBall::from_decimal(DEFAULT_PREC, GAMMA1_ANCHOR)
            .expect("anchor literal")
            .widen(&Float::with_val(RAD_PREC, 1e-10));
        if !first.ordinate.overlaps(&anchor) {
            return Err(TableError::AnchorMismatch);
        }
        for pair in zeros.windows(2) {
            if !pair[0].ordinate.lt(&pair[1].ordinate) {
                return Err(TableError::NotIncreasing { index: pair[1].index });
            }
        }

        let source_digest = hex_digest(&raw);
        Ok(ZeroTable {
            zeros,
            declared_abs_error: declared,
            declared_abs_error_text: err_text,
            source_digest,
            rh_verified_height,
            comments,
            raw,
        })
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn zeros(&self) -> &[ZetaZero] {
        &self.zeros
    }

    /// Zero `n` (1-based).
    pub fn zero(&self, n: usize) -> Result<&ZetaZero, TableError> {
        self.require(n)?;
        Ok(&self.zeros[n - 1])
    }

    /// Fails unless the table holds at least `n` zeros.
    pub fn require(&self, n: usize) -> Result<(), TableError> {
        if n == 0 || n > self.zeros.len() {
            return Err(TableError::Insufficient { requested: n, available: self.zeros.len() });
        }
        Ok(())
    }

    /// Ordinate `gamma_n` re-parsed at `prec` bits.
    pub fn ordinate(&self, n: usize, prec: u32) -> Result<RealBall, TableError> {
        let z = self.zero(n)?;
        if prec == z.ordinate.prec() {
            return Ok(z.ordinate.clone());
        }
        ordinate_ball(prec, &z.text, &self.declared_abs_error)
            .map_err(|e| TableError::Parse { line: n, msg: e.to_string() })
    }

    /// Ordinates as f64, for the floating-point search.
    pub fn ordinates_f64(&self) -> Vec<f64> {
        self.zeros.iter().map(|z| z.ordinate.to_f64()).collect()
    }

    pub fn declared_abs_error(&self) -> &Float {
        &self.declared_abs_error
    }

    pub fn declared_abs_error_text(&self) -> &str {
        &self.declared_abs_error_text
    }

    /// Whether the declared error is small enough for certification.
    pub fn is_certify_grade(&self) -> bool {
        let mut limit = Float::with_val(RAD_PREC, 1);
        limit <<= CERTIFY_MAX_ERROR_LOG2;
        self.declared_abs_error <= limit
    }

    /// Hex SHA-256 of the source bytes.
    pub fn source_digest(&self) -> &str {
        &self.source_digest
    }

    pub fn rh_verified_height(&self) -> &RealBall {
        &self.rh_verified_height
    }

    pub fn set_rh_verified_height(&mut self, height: RealBall) {
        self.rh_verified_height = height;
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    /// The source bytes; reloading them reproduces this table and its digest.
    pub fn to_bytes(&self) -> &[u8] {
        &self.raw
    }

    /// Serializes into the text format with a fresh header.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# declared_abs_error: {}", self.declared_abs_error_text);
        let _ = writeln!(out, "# rh_verified_height: {}", self.rh_verified_height.mid().to_string_radix(10, None));
        for z in &self.zeros {
            let _ = writeln!(out, "{} {}", z.index, z.text);
        }
        out
    }

    /// `(a_n, w_n)` with `a_n = 1/(1/2 + i gamma_n)` and `w_n = gamma_n`.
    pub fn coefficient(&self, n: usize, prec: u32) -> Result<(ComplexBall, RealBall), TableError> {
        let w = self.ordinate(n, prec)?;
        Ok((coefficient_for(&w), w))
    }
}

/// `1/(1/2 + i w) = (1/2 - i w) / (1/4 + w^2)`.
pub fn coefficient_for(w: &RealBall) -> ComplexBall {
    let prec = w.prec();
    let quarter = RealBall::from_ratio(prec, 1, 4);
    let den = quarter.add(&w.sqr());
    let re = RealBall::from_ratio(prec, 1, 2).div(&den).expect("1/4 + w^2 > 0");
    let im = w.neg().div(&den).expect("1/4 + w^2 > 0");
    ComplexBall::new(re, im)
}

fn ordinate_ball(prec: u32, text: &str, declared: &Float) -> Result<RealBall, NumError> {
    Ok(RealBall::from_decimal(prec, text)?.widen(declared))
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}
